#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "eidsgrep/symbol.hpp"

namespace eidsgrep {

class Tree;

struct Node {
    Symbol functor;
    std::optional<Symbol> head;
    std::vector<Tree> children;
};

// Immutable, shared EIDS tree. Copies share the same nodes, so node identity
// (`node()` address) is stable and usable as a memo key.
class Tree {
public:
    static constexpr std::size_t max_arity = 3;

    // Throws std::invalid_argument when more than three children are given.
    Tree(Symbol functor, std::optional<Symbol> head, std::vector<Tree> children = {});

    static Tree leaf(Symbol head);

    const Node& node() const noexcept { return *node_; }
    Symbol functor() const noexcept { return node_->functor; }
    const std::optional<Symbol>& head() const noexcept { return node_->head; }
    std::span<const Tree> children() const noexcept { return node_->children; }
    std::size_t arity() const noexcept { return node_->children.size(); }
    const Tree& child(std::size_t i) const { return node_->children.at(i); }

    std::size_t size() const;  // total node count

    Tree with_head(std::optional<Symbol> head) const;
    Tree with_functor(Symbol functor) const;
    Tree with_children(std::vector<Tree> children) const;

    // Structural equality.
    friend bool operator==(const Tree& a, const Tree& b);

private:
    std::shared_ptr<const Node> node_;
};

// Preorder walk over every node, the tree itself first.
template <typename Fn>
void for_each_subtree(const Tree& t, Fn&& fn) {
    fn(t);
    for (const auto& c : t.children())
        for_each_subtree(c, fn);
}

} // namespace eidsgrep
