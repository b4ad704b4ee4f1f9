#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <unordered_map>
#include <vector>

#include "eidsgrep/bitvec.hpp"

namespace eidsgrep {

inline constexpr std::size_t default_bdd_cap = 1000;

struct BddRef {
    std::uint32_t id;
    friend bool operator==(BddRef, BddRef) = default;
};

// Variable substitution: entry j (1..128) is the variable that input j of the
// function reads after remapping. Entry 0 is unused.
using VarMap = std::array<int, Vec128::bits + 1>;

VarMap identity_varmap();
VarMap varmap_for(const SlotMap& map);

// Reduced ordered BDD store for monotone functions of the 128 signature bits.
// Variables are ordered by bit index (bit 1 at the top). There are no negated
// edges and no constructor for negation, so everything built here is
// monotone. One store serves one query compilation.
class BddStore {
public:
    BddStore();

    static constexpr BddRef false_ref{0};
    static constexpr BddRef true_ref{1};

    BddRef constant(bool b) const { return b ? true_ref : false_ref; }
    // Projection of bit i, 1 <= i <= 128; throws std::out_of_range otherwise.
    BddRef var(int i);
    // Conjunction of the given bits.
    BddRef all_of(const Vec128& bits);

    BddRef conj(BddRef f, BddRef g);
    BddRef disj(BddRef f, BddRef g);

    // f with bit i quantified out. For monotone f this forces bit i to 1.
    BddRef exists(BddRef f, int i);

    // g(v) = f(w) where bit j of w is bit map[j] of v. Requires monotone f.
    BddRef remap(BddRef f, const VarMap& map);

    // Quantifies bits 128, 127, ..., 1 in turn while the diagram has more than
    // `limit` nodes. `quantified` receives the number of bits removed.
    BddRef cap(BddRef f, std::size_t limit = default_bdd_cap, int* quantified = nullptr);

    // Distinct nodes reachable from f, terminals included.
    std::size_t node_count(BddRef f) const;

    bool evaluate(BddRef f, const Vec128& v) const;

    // Decision variable of f's root, or 0 for a terminal.
    int top_var(BddRef f) const { return f.id < 2 ? 0 : nodes_[f.id].var; }
    std::size_t store_size() const { return nodes_.size(); }

private:
    friend class BddFilter;

    struct NodeRec {
        std::uint32_t var;  // terminal_var for the two terminals
        std::uint32_t lo, hi;
    };
    static constexpr std::uint32_t terminal_var = Vec128::bits + 1;

    std::uint32_t mk(std::uint32_t var, std::uint32_t lo, std::uint32_t hi);
    std::uint32_t apply(bool is_and, std::uint32_t f, std::uint32_t g);

    std::vector<NodeRec> nodes_;
    std::unordered_map<std::uint64_t, std::uint32_t> unique_;
    std::unordered_map<std::uint64_t, std::uint32_t> and_cache_;
    std::unordered_map<std::uint64_t, std::uint32_t> or_cache_;
};

// Immutable copy of one function, compacted for evaluation during scans.
// Safe for concurrent use.
class BddFilter {
public:
    BddFilter() = default;  // constant true
    BddFilter(const BddStore& store, BddRef root);

    bool evaluate(const Vec128& v) const {
        std::uint32_t id = root_;
        while (id > 1) {
            const auto& n = nodes_[id];
            id = v.test(static_cast<int>(n.var)) ? n.hi : n.lo;
        }
        return id == 1;
    }

    // Same count as BddStore::node_count: a non-constant diagram reaches both terminals.
    std::size_t node_count() const { return root_ > 1 ? nodes_.size() : 1; }
    bool is_true() const { return root_ == 1; }
    bool is_false() const { return root_ == 0; }

private:
    std::vector<BddStore::NodeRec> nodes_{{BddStore::terminal_var, 0, 0}, {BddStore::terminal_var, 1, 1}};
    std::uint32_t root_ = 1;
};

} // namespace eidsgrep
