#pragma once

#include <cstddef>

#include "eidsgrep/bdd.hpp"
#include "eidsgrep/bitvec.hpp"
#include "eidsgrep/tree.hpp"

namespace eidsgrep {

struct CompileOptions {
    std::size_t bdd_cap = default_bdd_cap;
};

struct CompileStats {
    std::size_t bdd_operations = 0;     // and/or/remap steps, each followed by a cap
    std::size_t max_bdd_nodes = 0;      // largest diagram retained after capping
    std::size_t max_uncapped_nodes = 0; // largest diagram seen before capping
    int quantified_bits = 0;            // bits removed by capping, summed
};

// A needle plus the two filters guarding it. For every haystack H,
// match(needle, H) implies both lambda_check(lambda, vec(H)) and
// bdd.evaluate(vec(H)).
struct CompiledQuery {
    Tree needle;
    LambdaFilter lambda;
    BddFilter bdd;
    bool memoize = false;
    CompileStats stats;
};

// Pushes negation down: double negation, de Morgan in both directions. Only
// headless operator nodes are rewritten, so match results are unchanged.
Tree normalize_not(const Tree& query);

// `(?)` or `.!.(?)`, both headless.
bool is_match_everything(const Tree& query);
bool is_match_nothing(const Tree& query);

CompiledQuery compile(const Tree& needle, const CompileOptions& options = {});

} // namespace eidsgrep
