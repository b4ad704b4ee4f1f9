#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "eidsgrep/tree.hpp"

namespace eidsgrep {

enum class Severity { recoverable, fatal };

struct ParseDiagnostic {
    std::size_t offset;
    std::string message;
    Severity severity;
};

// Multi-character functor spellings that normalize to a canonical functor
// when they appear, unescaped, inside functor brackets.
class AliasTable {
public:
    // lr -> ⿰, tb -> ⿱
    static AliasTable defaults();

    // Reads `spelling TAB canonical` lines; blank lines and lines starting
    // with '#' are ignored. Throws IoError or ParseError.
    static AliasTable load(const std::filesystem::path& path);

    void add(std::string spelling, std::string canonical);
    const std::string* find(std::string_view spelling) const;
    std::size_t size() const noexcept { return map_.size(); }

private:
    std::map<std::string, std::string, std::less<>> map_;
};

// Table used when none is passed explicitly. Set it once at startup, before
// any parsing threads exist.
const AliasTable& default_aliases();
void set_default_aliases(AliasTable table);

struct ParsedTree {
    Tree tree;
    std::size_t offset;  // byte span of the tree's source text
    std::size_t length;
};

struct ParseResult {
    std::vector<ParsedTree> trees;
    std::vector<ParseDiagnostic> diagnostics;

    bool has_fatal() const;
    std::vector<Tree> tree_list() const;
};

// Parses every consecutive tree. Whitespace between trees is skipped; a
// recoverable error drops the rest of the line and parsing resumes after it.
ParseResult parse_stream(std::string_view input, const AliasTable& aliases = default_aliases());

// Exactly one tree, optionally surrounded by whitespace. Throws ParseError.
Tree parse_one(std::string_view text, const AliasTable& aliases = default_aliases());

// Canonical one-line form without the trailing newline.
std::string to_eids(const Tree& tree, const AliasTable& aliases = default_aliases());

// Canonical form followed by '\n'.
std::string write_cooked(const Tree& tree, const AliasTable& aliases = default_aliases());

// Sugary functor characters: IDS operators and the single-character
// matching operators. `.` is excluded because it always opens a bracket.
bool is_sugary(char32_t cp);
std::size_t sugary_arity(char32_t cp);

} // namespace eidsgrep
