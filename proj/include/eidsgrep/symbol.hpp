#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <string_view>

namespace eidsgrep {

namespace detail {
struct SymbolEntry {
    std::uint32_t id;
    std::string text;
};
} // namespace detail

// Interned string. Two symbols compare equal iff they were interned from the
// same text; comparison never touches the characters.
class Symbol {
public:
    std::uint32_t id() const noexcept { return entry_->id; }
    std::string_view text() const noexcept { return entry_->text; }

    friend bool operator==(Symbol a, Symbol b) noexcept { return a.entry_ == b.entry_; }
    friend bool operator!=(Symbol a, Symbol b) noexcept { return a.entry_ != b.entry_; }

private:
    friend class SymbolTable;
    explicit Symbol(const detail::SymbolEntry* e) noexcept : entry_(e) {}
    const detail::SymbolEntry* entry_;
};

// Process-wide table. Interning is serialized internally; Symbol values stay
// valid for the life of the process and may be read from any thread.
class SymbolTable {
public:
    static SymbolTable& global();

    // Throws std::invalid_argument on empty text.
    Symbol intern(std::string_view text);
    std::size_t size() const;

private:
    SymbolTable() = default;
};

inline Symbol intern(std::string_view text) { return SymbolTable::global().intern(text); }

} // namespace eidsgrep

template <>
struct std::hash<eidsgrep::Symbol> {
    std::size_t operator()(eidsgrep::Symbol s) const noexcept { return s.id(); }
};
