#include "eidsgrep/bdd.hpp"

#include <stdexcept>
#include <string>

namespace eidsgrep {

namespace {

std::uint64_t pair_key(std::uint32_t a, std::uint32_t b) {
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

} // namespace

VarMap identity_varmap() {
    VarMap m{};
    for (int j = 1; j <= Vec128::bits; ++j)
        m[j] = j;
    return m;
}

VarMap varmap_for(const SlotMap& map) {
    VarMap m{};
    for (int s = 0; s < 4; ++s)
        for (int b = 1; b <= 32; ++b)
            m[s * 32 + b] = map.target[s] == SlotMap::drop ? 0 : map.target[s] * 32 + b;
    return m;
}

BddStore::BddStore() {
    nodes_.push_back({terminal_var, 0, 0});
    nodes_.push_back({terminal_var, 1, 1});
}

std::uint32_t BddStore::mk(std::uint32_t var, std::uint32_t lo, std::uint32_t hi) {
    if (lo == hi)
        return lo;
    const std::uint64_t key = (static_cast<std::uint64_t>(var) << 56) |
                              (static_cast<std::uint64_t>(lo) << 28) | hi;
    if (auto it = unique_.find(key); it != unique_.end())
        return it->second;
    if (nodes_.size() >= (1u << 28))
        throw std::length_error("BDD store exhausted");
    const auto id = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back({var, lo, hi});
    unique_.emplace(key, id);
    return id;
}

BddRef BddStore::var(int i) {
    if (i < 1 || i > Vec128::bits)
        throw std::out_of_range("BDD variable " + std::to_string(i) + " outside 1..128");
    return {mk(static_cast<std::uint32_t>(i), 0, 1)};
}

BddRef BddStore::all_of(const Vec128& bits) {
    // Built bottom-up so every mk call is already ordered.
    std::uint32_t f = 1;
    for (int i = Vec128::bits; i >= 1; --i)
        if (bits.test(i))
            f = mk(static_cast<std::uint32_t>(i), 0, f);
    return {f};
}

std::uint32_t BddStore::apply(bool is_and, std::uint32_t f, std::uint32_t g) {
    if (is_and) {
        if (f == 0 || g == 0) return 0;
        if (f == 1) return g;
        if (g == 1) return f;
    } else {
        if (f == 1 || g == 1) return 1;
        if (f == 0) return g;
        if (g == 0) return f;
    }
    if (f == g)
        return f;
    if (f > g)
        std::swap(f, g);
    auto& cache = is_and ? and_cache_ : or_cache_;
    const auto key = pair_key(f, g);
    if (auto it = cache.find(key); it != cache.end())
        return it->second;

    const auto nf = nodes_[f], ng = nodes_[g];
    const std::uint32_t v = std::min(nf.var, ng.var);
    const std::uint32_t f0 = nf.var == v ? nf.lo : f, f1 = nf.var == v ? nf.hi : f;
    const std::uint32_t g0 = ng.var == v ? ng.lo : g, g1 = ng.var == v ? ng.hi : g;
    const auto lo = apply(is_and, f0, g0);
    const auto hi = apply(is_and, f1, g1);
    const auto r = mk(v, lo, hi);
    cache.emplace(key, r);
    return r;
}

BddRef BddStore::conj(BddRef f, BddRef g) { return {apply(true, f.id, g.id)}; }
BddRef BddStore::disj(BddRef f, BddRef g) { return {apply(false, f.id, g.id)}; }

BddRef BddStore::exists(BddRef f, int i) {
    std::unordered_map<std::uint32_t, std::uint32_t> memo;
    const auto target = static_cast<std::uint32_t>(i);
    auto rec = [&](auto&& self, std::uint32_t id) -> std::uint32_t {
        const auto n = nodes_[id];
        if (n.var > target)
            return id;
        if (auto it = memo.find(id); it != memo.end())
            return it->second;
        std::uint32_t r;
        if (n.var == target) {
            r = apply(false, n.lo, n.hi);
        } else {
            const auto lo = self(self, n.lo);
            const auto hi = self(self, n.hi);
            r = mk(n.var, lo, hi);
        }
        memo.emplace(id, r);
        return r;
    };
    return {rec(rec, f.id)};
}

BddRef BddStore::remap(BddRef f, const VarMap& map) {
    std::unordered_map<std::uint32_t, std::uint32_t> memo;
    auto rec = [&](auto&& self, std::uint32_t id) -> std::uint32_t {
        if (id < 2)
            return id;
        if (auto it = memo.find(id); it != memo.end())
            return it->second;
        const auto n = nodes_[id];
        const int to = map[n.var];
        if (to < 1 || to > Vec128::bits)
            throw std::logic_error("variable map is not total on the function's support");
        const auto lo = self(self, n.lo);
        const auto hi = self(self, n.hi);
        // Monotone: f = lo | (x & hi).
        const auto x = mk(static_cast<std::uint32_t>(to), 0, 1);
        const auto r = apply(false, lo, apply(true, x, hi));
        memo.emplace(id, r);
        return r;
    };
    return {rec(rec, f.id)};
}

BddRef BddStore::cap(BddRef f, std::size_t limit, int* quantified) {
    int count = 0;
    for (int bit = Vec128::bits; bit >= 1 && node_count(f) > limit; --bit) {
        f = exists(f, bit);
        ++count;
    }
    if (quantified)
        *quantified = count;
    return f;
}

std::size_t BddStore::node_count(BddRef f) const {
    std::vector<std::uint32_t> stack{f.id};
    std::unordered_map<std::uint32_t, bool> seen;
    seen.reserve(64);
    std::size_t n = 0;
    while (!stack.empty()) {
        auto id = stack.back();
        stack.pop_back();
        if (!seen.emplace(id, true).second)
            continue;
        ++n;
        if (id > 1) {
            stack.push_back(nodes_[id].lo);
            stack.push_back(nodes_[id].hi);
        }
    }
    return n;
}

bool BddStore::evaluate(BddRef f, const Vec128& v) const {
    std::uint32_t id = f.id;
    while (id > 1) {
        const auto& n = nodes_[id];
        id = v.test(static_cast<int>(n.var)) ? n.hi : n.lo;
    }
    return id == 1;
}

BddFilter::BddFilter(const BddStore& store, BddRef root) {
    std::unordered_map<std::uint32_t, std::uint32_t> renumber{{0, 0}, {1, 1}};
    auto rec = [&](auto&& self, std::uint32_t id) -> std::uint32_t {
        if (auto it = renumber.find(id); it != renumber.end())
            return it->second;
        const auto n = store.nodes_[id];
        const auto lo = self(self, n.lo);
        const auto hi = self(self, n.hi);
        const auto mine = static_cast<std::uint32_t>(nodes_.size());
        nodes_.push_back({n.var, lo, hi});
        renumber.emplace(id, mine);
        return mine;
    };
    root_ = rec(rec, root.id);
}

} // namespace eidsgrep
