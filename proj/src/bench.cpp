#include "eidsgrep/bench.hpp"

#include <functional>
#include <optional>
#include <set>
#include <unordered_map>

#include "eidsgrep/syntax.hpp"
#include "eidsgrep/utf8.hpp"

namespace eidsgrep {

namespace {

Tree op(const char* functor, std::vector<Tree> children) {
    return Tree(intern(functor), std::nullopt, std::move(children));
}

Tree anywhere(Tree t) { return op(".", {std::move(t)}); }

void collect_wildcards(const Tree& t, const Tree& wildcard, std::vector<Tree>& out,
                       const std::function<Tree(Tree)>& rebuild) {
    if (t.arity() == 0) {
        out.push_back(rebuild(wildcard));
        return;
    }
    for (std::size_t i = 0; i < t.arity(); ++i) {
        collect_wildcards(t.child(i), wildcard, out, [&, i](Tree replacement) {
            std::vector<Tree> kids(t.children().begin(), t.children().end());
            kids[i] = std::move(replacement);
            return rebuild(t.with_children(std::move(kids)));
        });
    }
}

bool has_assoc_child(const Tree& t) {
    if (t.arity() == 0)
        return false;
    for (const auto& c : t.children())
        if (c.functor() == t.functor() && c.arity() == t.arity())
            return true;
    return false;
}

Tree insert_assoc(const Tree& t, bool parent_same, bool& inserted) {
    std::vector<Tree> kids;
    kids.reserve(t.arity());
    for (const auto& c : t.children()) {
        const bool same = c.functor() == t.functor() && c.arity() == t.arity();
        kids.push_back(insert_assoc(c, same, inserted));
    }
    Tree rebuilt = t.arity() ? t.with_children(std::move(kids)) : t;
    if (!parent_same && has_assoc_child(t)) {
        inserted = true;
        return op("@", {rebuilt});
    }
    return rebuilt;
}

} // namespace

Tree strip_internal_heads(const Tree& t) {
    if (t.arity() == 0)
        return t;
    std::vector<Tree> kids;
    kids.reserve(t.arity());
    for (const auto& c : t.children())
        kids.push_back(strip_internal_heads(c));
    return Tree(t.functor(), std::nullopt, std::move(kids));
}

std::vector<Tree> wildcard_variants(const Tree& t) {
    std::vector<Tree> out;
    const Tree wildcard(intern("?"), std::nullopt);
    collect_wildcards(t, wildcard, out, [](Tree x) { return x; });
    return out;
}

std::optional<Tree> associative_variant(const Tree& t) {
    bool inserted = false;
    Tree r = insert_assoc(t, false, inserted);
    if (!inserted)
        return std::nullopt;
    return r;
}

std::vector<BenchQuery> bench_generate(std::string_view dictionary, std::string_view seeds,
                                       const BenchOptions& options) {
    std::vector<std::string> seed_list;
    std::set<std::string> seen_seeds;
    for (std::size_t i = 0; i < seeds.size();) {
        auto d = utf8::decode(seeds, i);
        auto ch = std::string(seeds.substr(i, d.length));
        i += d.length;
        if (d.cp == ' ' || d.cp == '\t' || d.cp == '\r' || d.cp == '\n')
            continue;
        if (seen_seeds.insert(ch).second)
            seed_list.push_back(std::move(ch));
    }

    std::unordered_map<std::string_view, Tree> by_head;
    const auto parsed = parse_stream(dictionary);
    for (const auto& p : parsed.trees)
        if (p.tree.head())
            by_head.try_emplace(p.tree.head()->text(), p.tree);

    std::vector<BenchQuery> out;
    auto add = [&](QueryFamily f, Tree q) {
        auto text = to_eids(q);
        out.push_back({f, std::move(q), std::move(text)});
    };

    std::vector<Tree> headless;
    for (const auto& s : seed_list)
        if (auto it = by_head.find(s); it != by_head.end())
            headless.push_back(strip_internal_heads(it->second));

    for (const auto& s : seed_list)
        add(QueryFamily::bare, Tree::leaf(intern(s)));
    for (const auto& s : seed_list)
        add(QueryFamily::anywhere, anywhere(Tree::leaf(intern(s))));
    for (const auto& h : headless)
        add(QueryFamily::headless, h);
    std::set<std::string> seen_wild;
    for (const auto& h : headless)
        for (auto& w : wildcard_variants(h))
            if (seen_wild.insert(to_eids(w)).second)
                add(QueryFamily::wildcard_leaf, std::move(w));
    for (const auto& h : headless)
        add(QueryFamily::unordered, op("*", {h}));
    for (const auto& h : headless)
        if (auto a = associative_variant(h))
            add(QueryFamily::associative, std::move(*a));
    for (const auto& h : headless)
        if (h.arity() == 2)
            add(QueryFamily::boolean_or, h.with_functor(intern("|")));
    const Tree pivot = anywhere(Tree::leaf(intern(options.pivot)));
    for (const auto& s : seed_list) {
        add(QueryFamily::boolean_and_not, op("&", {anywhere(Tree::leaf(intern(s))), pivot}));
        add(QueryFamily::boolean_and_not,
            op("&", {anywhere(Tree::leaf(intern(s))), op("!", {pivot})}));
    }
    return out;
}

} // namespace eidsgrep
