#include "eidsgrep/syntax.hpp"

#include <fstream>

#include "eidsgrep/error.hpp"
#include "eidsgrep/utf8.hpp"

namespace eidsgrep {

namespace {

constexpr char32_t lenticular_open = 0x3010;   // 【
constexpr char32_t lenticular_close = 0x3011;  // 】
constexpr std::size_t max_depth = 4096;

bool is_space(char32_t c) { return c == ' ' || c == '\t' || c == '\r' || c == '\n'; }

bool is_closer(char32_t c) {
    return c == ')' || c == ']' || c == '}' || c == '>' || c == lenticular_close;
}

// Arity for an explicit functor bracket, or -1.
int bracket_arity(char32_t c) {
    switch (c) {
    case '(': return 0;
    case '.': return 1;
    case '[': return 2;
    case '{': return 3;
    default: return -1;
    }
}

char32_t closer_for(char32_t opener) {
    switch (opener) {
    case '(': return ')';
    case '.': return '.';
    case '[': return ']';
    case '{': return '}';
    case '<': return '>';
    default: return lenticular_close;
    }
}

AliasTable& mutable_default_aliases() {
    static AliasTable table = AliasTable::defaults();
    return table;
}

struct Failure {
    std::size_t offset;
    std::string message;
    Severity severity;
};

class Parser {
public:
    Parser(std::string_view in, std::size_t pos, const AliasTable& aliases)
        : in_(in), pos_(pos), aliases_(aliases) {}

    std::size_t pos() const { return pos_; }

    Tree parse_tree(std::size_t depth = 0) {
        if (depth > max_depth)
            fail("tree nested too deeply");
        std::optional<Symbol> head;
        if (at_end())
            fail("unexpected end of input");
        auto c = peek();
        if (c.cp == '<' || c.cp == lenticular_open) {
            pos_ += c.length;
            head = intern(read_bracketed(closer_for(c.cp)).text);
            if (at_end())
                fail("unexpected end of input after head");
            c = peek();
        }

        std::string functor;
        std::size_t arity;
        if (int a = bracket_arity(c.cp); a >= 0) {
            pos_ += c.length;
            auto s = read_bracketed(closer_for(c.cp));
            functor = std::move(s.text);
            if (!s.escaped)
                if (const auto* canon = aliases_.find(functor))
                    functor = *canon;
            arity = static_cast<std::size_t>(a);
        } else if (is_sugary(c.cp)) {
            pos_ += c.length;
            functor = std::string(in_.substr(pos_ - c.length, c.length));
            arity = sugary_arity(c.cp);
        } else if (c.cp == '<' || c.cp == lenticular_open) {
            fail("a head must be followed by a functor");
        } else if (is_closer(c.cp)) {
            fail("unexpected closing bracket");
        } else if (is_space(c.cp)) {
            fail("incomplete tree");
        } else {
            if (head)
                fail("a head must be followed by a functor");
            if (c.cp == '\\') {
                pos_ += c.length;
                if (at_end())
                    fail("backslash at end of input", Severity::fatal);
                c = peek();
            }
            auto text = in_.substr(pos_, c.length);
            pos_ += c.length;
            return Tree::leaf(intern(text));
        }

        std::vector<Tree> children;
        children.reserve(arity);
        for (std::size_t i = 0; i < arity; ++i)
            children.push_back(parse_tree(depth + 1));
        return Tree(intern(functor), head, std::move(children));
    }

private:
    struct Bracketed {
        std::string text;
        bool escaped = false;
    };

    bool at_end() const { return pos_ >= in_.size(); }
    utf8::Decoded peek() const { return utf8::decode(in_, pos_); }

    [[noreturn]] void fail(std::string msg, Severity sev = Severity::recoverable) {
        throw Failure{std::min(pos_, in_.size()), std::move(msg), sev};
    }

    // Called with pos_ just past the opening bracket.
    Bracketed read_bracketed(char32_t closer) {
        Bracketed out;
        if (at_end())
            fail("unterminated bracket", Severity::fatal);
        if (auto c = peek(); c.cp == closer) {
            out.text.append(in_.substr(pos_, c.length));
            pos_ += c.length;
        }
        for (;;) {
            if (at_end())
                fail("unterminated bracket", Severity::fatal);
            auto c = peek();
            pos_ += c.length;
            if (c.cp == closer)
                break;
            if (c.cp == '\\') {
                if (at_end())
                    fail("backslash at end of input", Severity::fatal);
                c = peek();
                pos_ += c.length;
                out.escaped = true;
            }
            out.text.append(in_.substr(pos_ - c.length, c.length));
        }
        return out;
    }

    std::string_view in_;
    std::size_t pos_;
    const AliasTable& aliases_;
};

bool bare_leaf_char(char32_t c) {
    if (is_space(c) || is_sugary(c) || is_closer(c) || bracket_arity(c) >= 0)
        return false;
    return c != '<' && c != lenticular_open && c != '\\';
}

void write_bracketed(std::string& out, std::string_view text, char32_t opener,
                     char32_t closer, bool escape_first) {
    utf8::append(out, opener);
    for (std::size_t i = 0; i < text.size();) {
        auto d = utf8::decode(text, i);
        bool first = i == 0;
        if ((first && escape_first) || (!first && d.cp == closer) || d.cp == '\\')
            out += '\\';
        out.append(text.substr(i, d.length));
        i += d.length;
    }
    utf8::append(out, closer);
}

void write_tree(std::string& out, const Tree& t, const AliasTable& aliases, Symbol semicolon) {
    const auto& head = t.head();
    if (head && t.arity() == 0 && t.functor() == semicolon && utf8::is_single(head->text()) &&
        bare_leaf_char(utf8::decode(head->text(), 0).cp)) {
        out.append(head->text());
        return;
    }
    if (head)
        write_bracketed(out, head->text(), lenticular_open, lenticular_close, false);

    auto f = t.functor().text();
    if (utf8::is_single(f)) {
        auto cp = utf8::decode(f, 0).cp;
        if (is_sugary(cp) && sugary_arity(cp) == t.arity()) {
            out.append(f);
            for (const auto& c : t.children())
                write_tree(out, c, aliases, semicolon);
            return;
        }
    }
    static constexpr char32_t openers[] = {'(', '.', '[', '{'};
    const char32_t open = openers[t.arity()];
    write_bracketed(out, f, open, closer_for(open), aliases.find(f) != nullptr);
    for (const auto& c : t.children())
        write_tree(out, c, aliases, semicolon);
}

} // namespace

bool is_sugary(char32_t c) {
    if (c >= 0x2FF0 && c <= 0x2FFB)
        return true;
    switch (c) {
    case '?': case '!': case '*': case '=': case '@': case '/': case '#': case '&': case '|':
        return true;
    default:
        return false;
    }
}

std::size_t sugary_arity(char32_t c) {
    if (c == 0x2FF2 || c == 0x2FF3)
        return 3;
    if (c >= 0x2FF0 && c <= 0x2FFB)
        return 2;
    switch (c) {
    case '?': return 0;
    case '&': case '|': return 2;
    default: return 1;
    }
}

AliasTable AliasTable::defaults() {
    AliasTable t;
    t.add("lr", "⿰");
    t.add("tb", "⿱");
    return t;
}

AliasTable AliasTable::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open alias table " + path.string());
    AliasTable t;
    std::string line;
    std::size_t offset = 0;
    while (std::getline(in, line)) {
        const auto here = offset;
        offset += line.size() + 1;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty() || line[0] == '#')
            continue;
        auto tab = line.find('\t');
        if (tab == std::string::npos || tab == 0 || tab + 1 == line.size())
            throw ParseError("alias lines must be `spelling<TAB>canonical`", here);
        t.add(line.substr(0, tab), line.substr(tab + 1));
    }
    return t;
}

void AliasTable::add(std::string spelling, std::string canonical) {
    map_.insert_or_assign(std::move(spelling), std::move(canonical));
}

const std::string* AliasTable::find(std::string_view spelling) const {
    auto it = map_.find(spelling);
    return it == map_.end() ? nullptr : &it->second;
}

const AliasTable& default_aliases() { return mutable_default_aliases(); }

void set_default_aliases(AliasTable table) { mutable_default_aliases() = std::move(table); }

bool ParseResult::has_fatal() const {
    for (const auto& d : diagnostics)
        if (d.severity == Severity::fatal)
            return true;
    return false;
}

std::vector<Tree> ParseResult::tree_list() const {
    std::vector<Tree> out;
    out.reserve(trees.size());
    for (const auto& p : trees)
        out.push_back(p.tree);
    return out;
}

ParseResult parse_stream(std::string_view input, const AliasTable& aliases) {
    ParseResult result;
    std::size_t pos = 0;
    for (;;) {
        while (pos < input.size() && is_space(static_cast<unsigned char>(input[pos])))
            ++pos;
        if (pos >= input.size())
            break;
        Parser p(input, pos, aliases);
        try {
            Tree t = p.parse_tree();
            result.trees.push_back({std::move(t), pos, p.pos() - pos});
            pos = p.pos();
        } catch (const Failure& f) {
            result.diagnostics.push_back({f.offset, f.message, f.severity});
            if (f.severity == Severity::fatal)
                break;
            auto nl = input.find('\n', f.offset);
            pos = nl == std::string_view::npos ? input.size() : nl + 1;
        }
    }
    return result;
}

Tree parse_one(std::string_view text, const AliasTable& aliases) {
    auto r = parse_stream(text, aliases);
    if (!r.diagnostics.empty()) {
        const auto& d = r.diagnostics.front();
        throw ParseError(d.message + " at byte " + std::to_string(d.offset), d.offset);
    }
    if (r.trees.size() != 1)
        throw ParseError(r.trees.empty() ? "no tree in input" : "more than one tree in input",
                         r.trees.empty() ? 0 : r.trees[1].offset);
    return r.trees.front().tree;
}

std::string to_eids(const Tree& tree, const AliasTable& aliases) {
    std::string out;
    write_tree(out, tree, aliases, intern(";"));
    return out;
}

std::string write_cooked(const Tree& tree, const AliasTable& aliases) {
    auto out = to_eids(tree, aliases);
    out += '\n';
    return out;
}

} // namespace eidsgrep
