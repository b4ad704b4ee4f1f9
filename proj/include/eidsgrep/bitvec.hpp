#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <span>
#include <string_view>

#include "eidsgrep/tree.hpp"

namespace eidsgrep {

// 128-bit tree signature. Word 0 describes the root, word 1 the first child,
// word 2 the last child, word 3 everything else. Bit positions are 1-based:
// bit 1 is the least significant bit of word 0, bit 128 the most significant
// bit of word 3.
struct Vec128 {
    std::array<std::uint32_t, 4> w{};

    static constexpr int bits = 128;

    bool test(int bit) const { return (w[(bit - 1) / 32] >> ((bit - 1) % 32)) & 1u; }
    void set(int bit) { w[(bit - 1) / 32] |= 1u << ((bit - 1) % 32); }
    void reset(int bit) { w[(bit - 1) / 32] &= ~(1u << ((bit - 1) % 32)); }

    int popcount() const {
        return std::popcount(w[0]) + std::popcount(w[1]) + std::popcount(w[2]) + std::popcount(w[3]);
    }
    bool empty() const { return (w[0] | w[1] | w[2] | w[3]) == 0; }

    friend Vec128 operator&(const Vec128& a, const Vec128& b) {
        return {{a.w[0] & b.w[0], a.w[1] & b.w[1], a.w[2] & b.w[2], a.w[3] & b.w[3]}};
    }
    friend Vec128 operator|(const Vec128& a, const Vec128& b) {
        return {{a.w[0] | b.w[0], a.w[1] | b.w[1], a.w[2] | b.w[2], a.w[3] | b.w[3]}};
    }
    friend Vec128 and_not(const Vec128& a, const Vec128& b) {
        return {{a.w[0] & ~b.w[0], a.w[1] & ~b.w[1], a.w[2] & ~b.w[2], a.w[3] & ~b.w[3]}};
    }
    friend bool operator==(const Vec128&, const Vec128&) = default;
};

// Three distinct bit positions in [1,32], ascending.
using BitTriple = std::array<int, 3>;

inline constexpr std::uint8_t head_domain = 0x00;
inline constexpr std::uint8_t functor_domain = 0x01;

// FNV-1a 64 over (domain || payload), reduced mod C(32,3) = 4960 and unranked
// lexicographically into a 3-subset of {1..32}.
BitTriple hash_triple(std::uint8_t domain, std::string_view payload);

// Bits for the root's head, or for head absence.
std::uint32_t head_bits(const std::optional<Symbol>& head);
// Bits for a (functor, arity) pair; the arity byte precedes the functor bytes.
std::uint32_t functor_bits(Symbol functor, std::size_t arity);

Vec128 vec(const Tree& tree);

// Accepts v iff more than `lambda` of the mask bits are set in v.
struct LambdaFilter {
    Vec128 mask;
    int lambda = -1;

    static LambdaFilter everything() { return {{}, -1}; }
    static LambdaFilter nothing() { return {{}, 0}; }

    bool matches_everything() const { return lambda < 0; }
    bool matches_nothing() const { return lambda >= mask.popcount(); }

    friend bool operator==(const LambdaFilter&, const LambdaFilter&) = default;
};

inline bool lambda_check(const LambdaFilter& f, const Vec128& v) {
    return (f.mask & v).popcount() > f.lambda;
}

LambdaFilter lambda_or(const LambdaFilter& a, const LambdaFilter& b);
LambdaFilter lambda_and(const LambdaFilter& a, const LambdaFilter& b);

// Target word (0..3) for each source word, or `drop`.
struct SlotMap {
    static constexpr int drop = -1;
    std::array<int, 4> target;

    friend bool operator==(const SlotMap&, const SlotMap&) = default;
};

namespace slots {
// Where a child's vector lands inside its parent's vector.
inline constexpr SlotMap first{{1, 3, 3, 3}};
inline constexpr SlotMap last{{2, 3, 3, 3}};
inline constexpr SlotMap deep{{3, 3, 3, 3}};
inline constexpr SlotMap identity{{0, 1, 2, 3}};

// Map for child `index` of a parent with `arity` children.
SlotMap for_child(std::size_t arity, std::size_t index);
} // namespace slots

// OR-collapses each source bit onto its image. Throws std::logic_error when
// a mask bit sits in a dropped word.
Vec128 remap_vector(const Vec128& v, const SlotMap& map);

// Filter on the image vector accepting at least every image of a vector the
// source filter accepts, using the worst-case collision count.
LambdaFilter lambda_remap(const LambdaFilter& f, const SlotMap& map);

} // namespace eidsgrep
