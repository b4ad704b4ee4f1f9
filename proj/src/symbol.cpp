#include "eidsgrep/symbol.hpp"

#include <memory>
#include <mutex>
#include <stdexcept>
#include <unordered_map>
#include <vector>

namespace eidsgrep {

namespace {

struct TableState {
    std::mutex mutex;
    std::unordered_map<std::string_view, const detail::SymbolEntry*> by_text;
    std::vector<std::unique_ptr<detail::SymbolEntry>> entries;
};

TableState& state() {
    static TableState s;
    return s;
}

} // namespace

SymbolTable& SymbolTable::global() {
    static SymbolTable table;
    return table;
}

Symbol SymbolTable::intern(std::string_view text) {
    if (text.empty())
        throw std::invalid_argument("cannot intern an empty string");
    auto& s = state();
    std::lock_guard lock(s.mutex);
    if (auto it = s.by_text.find(text); it != s.by_text.end())
        return Symbol(it->second);
    auto entry = std::make_unique<detail::SymbolEntry>(
        detail::SymbolEntry{static_cast<std::uint32_t>(s.entries.size()), std::string(text)});
    const auto* raw = entry.get();
    s.entries.push_back(std::move(entry));
    s.by_text.emplace(std::string_view(raw->text), raw);
    return Symbol(raw);
}

std::size_t SymbolTable::size() const {
    auto& s = state();
    std::lock_guard lock(s.mutex);
    return s.entries.size();
}

} // namespace eidsgrep
