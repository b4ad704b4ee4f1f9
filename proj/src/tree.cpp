#include "eidsgrep/tree.hpp"

#include <stdexcept>

namespace eidsgrep {

Tree::Tree(Symbol functor, std::optional<Symbol> head, std::vector<Tree> children) {
    if (children.size() > max_arity)
        throw std::invalid_argument("EIDS nodes have at most three children");
    node_ = std::make_shared<const Node>(Node{functor, head, std::move(children)});
}

Tree Tree::leaf(Symbol head) { return Tree(intern(";"), head); }

std::size_t Tree::size() const {
    std::size_t n = 1;
    for (const auto& c : children())
        n += c.size();
    return n;
}

Tree Tree::with_head(std::optional<Symbol> head) const {
    return Tree(functor(), head, node_->children);
}

Tree Tree::with_functor(Symbol f) const { return Tree(f, head(), node_->children); }

Tree Tree::with_children(std::vector<Tree> children) const {
    return Tree(functor(), head(), std::move(children));
}

bool operator==(const Tree& a, const Tree& b) {
    if (a.node_ == b.node_)
        return true;
    if (a.functor() != b.functor() || a.head() != b.head() || a.arity() != b.arity())
        return false;
    for (std::size_t i = 0; i < a.arity(); ++i)
        if (!(a.child(i) == b.child(i)))
            return false;
    return true;
}

} // namespace eidsgrep
