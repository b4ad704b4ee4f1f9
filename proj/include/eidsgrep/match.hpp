#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "eidsgrep/tree.hpp"

namespace eidsgrep {

// Unanchored search of `pattern` inside `subject`, both UTF-8.
using RegexHook = std::function<bool(std::string_view pattern, std::string_view subject)>;

// std::wregex (ECMAScript) over code points, with a per-hook cache of compiled
// patterns. Throws QueryError on a malformed pattern.
RegexHook default_regex_hook();

enum class Operator {
    none,
    wildcard,   // (?)
    anywhere,   // ...
    unordered,  // .*.
    negate,     // .!.
    both,       // [&]
    either,     // [|]
    literal,    // .=.
    assoc,      // .@.
    regex,      // ./.
    predicate,  // .#.
};

Operator classify(Symbol functor, std::size_t arity);
inline Operator classify(const Tree& t) { return classify(t.functor(), t.arity()); }

// Per-worker matching state. Not shareable across threads.
class MatchContext {
public:
    explicit MatchContext(bool memoize = false, RegexHook regex = default_regex_hook());

    bool memoizing() const noexcept { return memoize_; }

    // Forget memo entries. Required whenever the haystack tree being matched
    // may be freed, since entries are keyed on node addresses.
    void clear_memo() { memo_.clear(); }

    // Node-pair evaluations actually performed (memo hits excluded).
    std::uint64_t evaluations() const noexcept { return evaluations_; }
    void reset_evaluations() noexcept { evaluations_ = 0; }

private:
    friend class Matcher;

    struct PairHash {
        std::size_t operator()(const std::pair<const Node*, const Node*>& p) const noexcept {
            auto a = reinterpret_cast<std::uintptr_t>(p.first);
            auto b = reinterpret_cast<std::uintptr_t>(p.second);
            return std::hash<std::uintptr_t>{}(a * 0x9E3779B97F4A7C15ull ^ b);
        }
    };

    bool memoize_;
    RegexHook regex_;
    std::unordered_map<std::pair<const Node*, const Node*>, bool, PairHash> memo_;
    std::uint64_t evaluations_ = 0;
};

// Throws UnsupportedOperator for `.#.` and QueryError for regex failures.
bool match(const Tree& needle, const Tree& haystack, MatchContext& ctx);

// The `.@.` rule: `pattern` is the operator's child.
bool match_assoc(const Tree& pattern, const Tree& haystack, MatchContext& ctx);

// Descends through nodes carrying (functor, arity); the remaining subtrees in
// order. A root without (functor, arity) yields itself.
std::vector<Tree> flatten(const Tree& tree, Symbol functor, std::size_t arity);

// More than two `...` or `.*.` nodes anywhere in the needle.
bool should_memoize(const Tree& needle);

} // namespace eidsgrep
