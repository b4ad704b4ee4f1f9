#include "eidsgrep/bitvec.hpp"

#include <algorithm>
#include <functional>
#include <initializer_list>
#include <stdexcept>
#include <string>

namespace eidsgrep {

namespace {

constexpr std::uint64_t fnv_offset = 14695981039346656037ull;
constexpr std::uint64_t fnv_prime = 1099511628211ull;
constexpr int triple_count = 4960;

constexpr int choose2(int n) { return n * (n - 1) / 2; }

std::uint32_t triple_bits(const BitTriple& t) {
    return (1u << (t[0] - 1)) | (1u << (t[1] - 1)) | (1u << (t[2] - 1));
}

} // namespace

BitTriple hash_triple(std::uint8_t domain, std::string_view payload) {
    std::uint64_t h = fnv_offset;
    h = (h ^ domain) * fnv_prime;
    for (unsigned char c : payload)
        h = (h ^ c) * fnv_prime;
    int r = static_cast<int>(h % triple_count);

    // Lexicographic unranking of 3-subsets of {1..32}.
    BitTriple out{};
    int a = 1;
    for (;; ++a) {
        int block = choose2(32 - a);
        if (r < block)
            break;
        r -= block;
    }
    int b = a + 1;
    for (;; ++b) {
        int block = 32 - b;
        if (r < block)
            break;
        r -= block;
    }
    out = {a, b, b + 1 + r};
    return out;
}

std::uint32_t head_bits(const std::optional<Symbol>& head) {
    return triple_bits(hash_triple(head_domain, head ? head->text() : std::string_view{}));
}

std::uint32_t functor_bits(Symbol functor, std::size_t arity) {
    std::string payload(1, static_cast<char>(arity));
    payload.append(functor.text());
    return triple_bits(hash_triple(functor_domain, payload));
}

Vec128 vec(const Tree& t) {
    Vec128 v;
    v.w[0] = head_bits(t.head()) | functor_bits(t.functor(), t.arity());
    switch (t.arity()) {
    case 0:
        break;
    case 1: {
        auto c = vec(t.child(0));
        v.w[1] = v.w[2] = c.w[0];
        v.w[3] = c.w[1] | c.w[2] | c.w[3];
        break;
    }
    case 2: {
        auto c0 = vec(t.child(0)), c1 = vec(t.child(1));
        v.w[1] = c0.w[0];
        v.w[2] = c1.w[0];
        v.w[3] = c0.w[1] | c0.w[2] | c0.w[3] | c1.w[1] | c1.w[2] | c1.w[3];
        break;
    }
    default: {
        auto c0 = vec(t.child(0)), c1 = vec(t.child(1)), c2 = vec(t.child(2));
        v.w[1] = c0.w[0];
        v.w[2] = c2.w[0];
        v.w[3] = c0.w[1] | c0.w[2] | c0.w[3] | c1.w[0] | c1.w[1] | c1.w[2] | c1.w[3] |
                 c2.w[1] | c2.w[2] | c2.w[3];
        break;
    }
    }
    return v;
}

LambdaFilter lambda_or(const LambdaFilter& a, const LambdaFilter& b) {
    return {a.mask | b.mask, std::min(a.lambda, b.lambda)};
}

LambdaFilter lambda_and(const LambdaFilter& f1, const LambdaFilter& f2) {
    const Vec128 only1 = and_not(f1.mask, f2.mask);
    const Vec128 only2 = and_not(f2.mask, f1.mask);
    const Vec128 shared = f1.mask & f2.mask;
    const int alpha = only1.popcount(), beta = only2.popcount(), gamma = shared.popcount();
    const int need1 = f1.lambda + 1, need2 = f2.lambda + 1;

    // Lower bounds on the set bits of an accepted vector within each category
    // and each union of categories.
    const int la = std::max(0, need1 - gamma);
    const int lb = std::max(0, need2 - gamma);
    const int lc = std::max({0, need1 - alpha, need2 - beta});
    const int lac = std::max(need1, la + lc);
    const int lbc = std::max(need2, lb + lc);
    const int lab = std::max(la + lb, need1 + need2 - 2 * gamma);
    const int labc = std::max({need1 + lb, need2 + la, need1 + need2 - gamma});

    enum : unsigned { A = 1, B = 2, C = 4 };
    auto bound = [&](unsigned s) {
        switch (s) {
        case A: return la;
        case B: return lb;
        case C: return lc;
        case A | B: return lab;
        case A | C: return lac;
        case B | C: return lbc;
        default: return labc;
        }
    };
    auto bits_of = [&](unsigned s) {
        Vec128 m;
        if (s & A) m = m | only1;
        if (s & B) m = m | only2;
        if (s & C) m = m | shared;
        return m;
    };

    const int sizes[3] = {alpha, beta, gamma};
    const int singles[3] = {la, lb, lc};
    unsigned chosen = 0;
    for (int i = 0; i < 3; ++i)
        if (3 * singles[i] > sizes[i])
            chosen |= 1u << i;
    if (!chosen)
        for (int i = 0; i < 3; ++i)
            if (singles[i] >= 1)
                chosen |= 1u << i;
    if (!chosen) {
        int best = -2;
        for (unsigned s : std::initializer_list<unsigned>{A, B, C, A | B, A | C, B | C, A | B | C})
            if (bound(s) - 1 > best) {
                best = bound(s) - 1;
                chosen = s;
            }
    }

    const Vec128 mask = bits_of(chosen);
    const int need = bound(chosen);
    if (need > mask.popcount())
        return {mask, mask.popcount()};
    return {mask, need - 1};
}

namespace slots {
SlotMap for_child(std::size_t arity, std::size_t index) {
    if (arity <= 1 || index == 0)
        return first;
    if (index + 1 == arity)
        return last;
    return deep;
}
} // namespace slots

Vec128 remap_vector(const Vec128& v, const SlotMap& map) {
    Vec128 out;
    for (int s = 0; s < 4; ++s) {
        if (!v.w[s])
            continue;
        if (map.target[s] == SlotMap::drop)
            throw std::logic_error("slot map drops a word that has bits set");
        out.w[map.target[s]] |= v.w[s];
    }
    return out;
}

LambdaFilter lambda_remap(const LambdaFilter& f, const SlotMap& map) {
    const Vec128 image = remap_vector(f.mask, map);
    if (f.lambda < 0)
        return {image, -1};

    // Collision count per target bit, largest first.
    std::array<int, 128> hits{};
    for (int s = 0; s < 4; ++s)
        for (int b = 0; b < 32; ++b)
            if ((f.mask.w[s] >> b) & 1u)
                ++hits[map.target[s] * 32 + b];
    std::sort(hits.begin(), hits.end(), std::greater<>());

    const int need = f.lambda + 1;
    int covered = 0;
    for (int r = 1; r <= 128 && hits[r - 1] > 0; ++r) {
        covered += hits[r - 1];
        if (covered >= need)
            return {image, r - 1};
    }
    // The source filter accepts nothing.
    return {image, image.popcount()};
}

} // namespace eidsgrep
