#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eidsgrep/tree.hpp"

namespace eidsgrep {

enum class QueryFamily {
    bare = 1,        // the seed character, head-to-head
    anywhere,        // ...x
    headless,        // dictionary entry with non-leaf heads removed
    wildcard_leaf,   // headless entry, one leaf replaced by (?)
    unordered,       // .*. over the headless entry
    associative,     // .@. inserted above associative structures
    boolean_or,      // binary root functor replaced by [|]
    boolean_and_not, // &...x...p and &...x!...p
};

struct BenchQuery {
    QueryFamily family;
    Tree query;
    std::string text;  // canonical form
};

struct BenchOptions {
    std::string pivot = "日";
};

// Removes heads everywhere except on leaves.
Tree strip_internal_heads(const Tree& tree);

// One tree per leaf (preorder), with that leaf replaced by (?).
std::vector<Tree> wildcard_variants(const Tree& tree);

// .@. inserted above every node that shares (functor, arity) with one of its
// children and whose parent does not. Returns nullopt when there is none.
std::optional<Tree> associative_variant(const Tree& tree);

// Builds the benchmark query set from a dictionary and a list of seed
// characters (any whitespace-separated code points). Deterministic.
std::vector<BenchQuery> bench_generate(std::string_view dictionary, std::string_view seeds,
                                       const BenchOptions& options = {});

} // namespace eidsgrep
