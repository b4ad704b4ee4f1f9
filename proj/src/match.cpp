#include "eidsgrep/match.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <memory>
#include <regex>
#include <string>

#include "eidsgrep/error.hpp"
#include "eidsgrep/utf8.hpp"

namespace eidsgrep {

namespace {

struct OperatorSymbols {
    Symbol question = intern("?");
    Symbol dot = intern(".");
    Symbol star = intern("*");
    Symbol bang = intern("!");
    Symbol amp = intern("&");
    Symbol bar = intern("|");
    Symbol equals = intern("=");
    Symbol at = intern("@");
    Symbol slash = intern("/");
    Symbol hash = intern("#");
};

const OperatorSymbols& ops() {
    static const OperatorSymbols s;
    return s;
}

std::wstring widen(std::string_view s) {
    std::wstring out;
    for (std::size_t i = 0; i < s.size();) {
        auto d = utf8::decode(s, i);
        out += static_cast<wchar_t>(d.cp);
        i += d.length;
    }
    return out;
}

// Children of a node, possibly permuted.
struct Kids {
    std::array<const Tree*, Tree::max_arity> at{};
    std::size_t count = 0;

    static Kids of(const Tree& t) {
        Kids k;
        for (const auto& c : t.children())
            k.at[k.count++] = &c;
        return k;
    }
};

void flatten_into(const Tree& t, Symbol f, std::size_t a, std::vector<const Tree*>& out) {
    if (t.functor() == f && t.arity() == a) {
        for (const auto& c : t.children())
            flatten_into(c, f, a, out);
    } else {
        out.push_back(&t);
    }
}

} // namespace

RegexHook default_regex_hook() {
    auto cache = std::make_shared<std::map<std::string, std::wregex, std::less<>>>();
    return [cache](std::string_view pattern, std::string_view subject) {
        auto it = cache->find(pattern);
        if (it == cache->end()) {
            try {
                it = cache->emplace(std::string(pattern), std::wregex(widen(pattern))).first;
            } catch (const std::regex_error& e) {
                throw QueryError("bad regular expression `" + std::string(pattern) + "`: " + e.what());
            }
        }
        return std::regex_search(widen(subject), it->second);
    };
}

Operator classify(Symbol f, std::size_t arity) {
    const auto& s = ops();
    switch (arity) {
    case 0:
        return f == s.question ? Operator::wildcard : Operator::none;
    case 1:
        if (f == s.dot) return Operator::anywhere;
        if (f == s.star) return Operator::unordered;
        if (f == s.bang) return Operator::negate;
        if (f == s.equals) return Operator::literal;
        if (f == s.at) return Operator::assoc;
        if (f == s.slash) return Operator::regex;
        if (f == s.hash) return Operator::predicate;
        return Operator::none;
    case 2:
        if (f == s.amp) return Operator::both;
        if (f == s.bar) return Operator::either;
        return Operator::none;
    default:
        return Operator::none;
    }
}

MatchContext::MatchContext(bool memoize, RegexHook regex)
    : memoize_(memoize), regex_(std::move(regex)) {}

class Matcher {
public:
    explicit Matcher(MatchContext& ctx) : ctx_(ctx) {}

    bool match(const Tree& n, const Tree& h) {
        if (!ctx_.memoize_) {
            ++ctx_.evaluations_;
            return eval(n, Kids::of(n), h);
        }
        const std::pair key{&n.node(), &h.node()};
        if (auto it = ctx_.memo_.find(key); it != ctx_.memo_.end())
            return it->second;
        ++ctx_.evaluations_;
        bool r = eval(n, Kids::of(n), h);
        ctx_.memo_.emplace(key, r);
        return r;
    }

    bool assoc(const Tree& p, const Tree& h) {
        if (p.arity() == 0)
            return match(p, h);
        std::vector<const Tree*> lhs, rhs;
        for (const auto& c : p.children())
            flatten_into(c, p.functor(), p.arity(), lhs);
        flatten_into(h, p.functor(), p.arity(), rhs);
        if (lhs.size() != rhs.size())
            return false;
        for (std::size_t i = 0; i < lhs.size(); ++i)
            if (!match(*lhs[i], *rhs[i]))
                return false;
        return true;
    }

private:
    bool children_match(const Kids& kids, const Tree& h) {
        for (std::size_t i = 0; i < kids.count; ++i)
            if (!match(*kids.at[i], h.child(i)))
                return false;
        return true;
    }

    bool basic(Symbol functor, const Kids& kids, const Tree& h) {
        return functor == h.functor() && kids.count == h.arity() && children_match(kids, h);
    }

    bool anywhere(const Tree& n, const Tree& h) {
        if (match(n, h))
            return true;
        for (const auto& c : h.children())
            if (anywhere(n, c))
                return true;
        return false;
    }

    bool unordered(const Tree& x, const Tree& h) {
        if (x.arity() <= 1)
            return match(x, h);
        std::array<std::size_t, Tree::max_arity> perm{0, 1, 2};
        const auto n = x.arity();
        do {
            Kids k;
            k.count = n;
            for (std::size_t i = 0; i < n; ++i)
                k.at[i] = &x.child(perm[i]);
            if (eval(x, k, h))
                return true;
        } while (std::next_permutation(perm.begin(), perm.begin() + n));
        return false;
    }

    bool regex(const Tree& x, const Tree& h) {
        if (x.head() && h.head())
            return ctx_.regex_(x.head()->text(), h.head()->text());
        return x.arity() == h.arity() && ctx_.regex_(x.functor().text(), h.functor().text()) &&
               children_match(Kids::of(x), h);
    }

    // Rules 1-3 for node `n` with (possibly permuted) children `kids`.
    bool eval(const Tree& n, const Kids& kids, const Tree& h) {
        if (n.head() && h.head())
            return *n.head() == *h.head();
        switch (classify(n.functor(), kids.count)) {
        case Operator::wildcard:
            return true;
        case Operator::anywhere:
            return anywhere(*kids.at[0], h);
        case Operator::unordered:
            return unordered(*kids.at[0], h);
        case Operator::negate:
            return !match(*kids.at[0], h);
        case Operator::both:
            return match(*kids.at[0], h) && match(*kids.at[1], h);
        case Operator::either:
            return match(*kids.at[0], h) || match(*kids.at[1], h);
        case Operator::literal: {
            const Tree& x = *kids.at[0];
            if (x.head() && h.head())
                return *x.head() == *h.head();
            return basic(x.functor(), Kids::of(x), h);
        }
        case Operator::assoc:
            return assoc(*kids.at[0], h);
        case Operator::regex:
            return regex(*kids.at[0], h);
        case Operator::predicate:
            throw UnsupportedOperator("the .#. predicate operator is not supported");
        case Operator::none:
            break;
        }
        return basic(n.functor(), kids, h);
    }

    MatchContext& ctx_;
};

bool match(const Tree& needle, const Tree& haystack, MatchContext& ctx) {
    return Matcher(ctx).match(needle, haystack);
}

bool match_assoc(const Tree& pattern, const Tree& haystack, MatchContext& ctx) {
    return Matcher(ctx).assoc(pattern, haystack);
}

std::vector<Tree> flatten(const Tree& tree, Symbol functor, std::size_t arity) {
    std::vector<const Tree*> ptrs;
    flatten_into(tree, functor, arity, ptrs);
    std::vector<Tree> out;
    out.reserve(ptrs.size());
    for (const auto* p : ptrs)
        out.push_back(*p);
    return out;
}

bool should_memoize(const Tree& needle) {
    std::size_t count = 0;
    for_each_subtree(needle, [&](const Tree& t) {
        auto op = classify(t);
        if (op == Operator::anywhere || op == Operator::unordered)
            ++count;
    });
    return count > 2;
}

} // namespace eidsgrep
