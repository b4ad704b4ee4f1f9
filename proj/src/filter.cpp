#include "eidsgrep/filter.hpp"

#include <algorithm>
#include <array>
#include <vector>

#include "eidsgrep/match.hpp"

namespace eidsgrep {

namespace {

bool headless_op(const Tree& t, Operator op) { return !t.head() && classify(t) == op; }

Tree make_op(const char* functor, std::vector<Tree> children) {
    return Tree(intern(functor), std::nullopt, std::move(children));
}

Vec128 word0(std::uint32_t bits) { return Vec128{{bits, 0, 0, 0}}; }

struct Filters {
    LambdaFilter lambda;
    BddRef bdd;
};

class Compiler {
public:
    explicit Compiler(const CompileOptions& opts) : opts_(opts) {}

    Filters build(const Tree& t) {
        Filters body = build_body(t);
        if (!t.head())
            return body;
        // A headed needle compares heads against a headed haystack and falls
        // back to its own rules against a headless one.
        return either(atom(head_bits(t.head())),
                      both(atom(head_bits(std::nullopt)), body));
    }

    CompileStats stats;
    BddStore store;

private:
    Filters everything() { return {LambdaFilter::everything(), BddStore::true_ref}; }
    Filters nothing() { return {LambdaFilter::nothing(), BddStore::false_ref}; }

    Filters atom(std::uint32_t bits) {
        return {LambdaFilter{word0(bits), 2}, store.all_of(word0(bits))};
    }

    BddRef capped(BddRef f) {
        ++stats.bdd_operations;
        stats.max_uncapped_nodes = std::max(stats.max_uncapped_nodes, store.node_count(f));
        int q = 0;
        f = store.cap(f, opts_.bdd_cap, &q);
        stats.quantified_bits += q;
        stats.max_bdd_nodes = std::max(stats.max_bdd_nodes, store.node_count(f));
        return f;
    }

    Filters both(const Filters& a, const Filters& b) {
        LambdaFilter l;
        if (a.lambda.matches_nothing() || b.lambda.matches_nothing())
            l = LambdaFilter::nothing();
        else if (a.lambda.matches_everything())
            l = b.lambda;
        else if (b.lambda.matches_everything())
            l = a.lambda;
        else
            l = lambda_and(a.lambda, b.lambda);
        return {l, capped(store.conj(a.bdd, b.bdd))};
    }

    Filters either(const Filters& a, const Filters& b) {
        LambdaFilter l;
        if (a.lambda.matches_nothing())
            l = b.lambda;
        else if (b.lambda.matches_nothing())
            l = a.lambda;
        else
            l = lambda_or(a.lambda, b.lambda);
        return {l, capped(store.disj(a.bdd, b.bdd))};
    }

    Filters remap(const Filters& f, const SlotMap& map) {
        return {lambda_remap(f.lambda, map), capped(store.remap(f.bdd, varmap_for(map)))};
    }

    // Functor, arity and children, ignoring any operator meaning.
    Filters structural(const Tree& t) {
        Filters f = atom(functor_bits(t.functor(), t.arity()));
        for (std::size_t i = 0; i < t.arity(); ++i)
            f = both(f, remap(build(t.child(i)), slots::for_child(t.arity(), i)));
        return f;
    }

    Filters build_body(const Tree& t) {
        switch (classify(t)) {
        case Operator::wildcard:
            return everything();
        case Operator::negate:
            return is_match_everything(t.child(0)) ? nothing() : everything();
        case Operator::both:
            return both(build(t.child(0)), build(t.child(1)));
        case Operator::either:
            return either(build(t.child(0)), build(t.child(1)));
        case Operator::literal: {
            const Tree& x = t.child(0);
            Filters body = structural(x);
            if (!x.head())
                return body;
            return either(atom(head_bits(x.head())), both(atom(head_bits(std::nullopt)), body));
        }
        case Operator::unordered: {
            const Tree& x = t.child(0);
            if (x.arity() <= 1)
                return build(x);
            std::array<std::size_t, Tree::max_arity> perm{0, 1, 2};
            std::optional<Filters> acc;
            do {
                std::vector<Tree> kids;
                for (std::size_t i = 0; i < x.arity(); ++i)
                    kids.push_back(x.child(perm[i]));
                Filters f = build(x.with_children(std::move(kids)));
                acc = acc ? either(*acc, f) : f;
            } while (std::next_permutation(perm.begin(), perm.begin() + x.arity()));
            return *acc;
        }
        case Operator::anywhere: {
            const Filters at_root = build(t.child(0));
            Filters f = either(at_root, remap(at_root, slots::first));
            f = either(f, remap(at_root, slots::last));
            return either(f, remap(at_root, slots::deep));
        }
        case Operator::assoc:
        case Operator::regex:
        case Operator::predicate:
            return everything();
        case Operator::none:
            break;
        }
        return structural(t);
    }

    const CompileOptions& opts_;
};

} // namespace

bool is_match_everything(const Tree& q) { return headless_op(q, Operator::wildcard); }

bool is_match_nothing(const Tree& q) {
    return headless_op(q, Operator::negate) && is_match_everything(q.child(0));
}

Tree normalize_not(const Tree& t) {
    if (headless_op(t, Operator::negate)) {
        const Tree& x = t.child(0);
        if (headless_op(x, Operator::negate))
            return normalize_not(x.child(0));
        if (headless_op(x, Operator::either) || headless_op(x, Operator::both)) {
            const char* dual = classify(x) == Operator::either ? "&" : "|";
            return make_op(dual, {normalize_not(make_op("!", {x.child(0)})),
                                  normalize_not(make_op("!", {x.child(1)}))});
        }
        return t.with_children({normalize_not(x)});
    }
    // These operators look at their child's own functor, so the child must
    // stay as written.
    switch (classify(t)) {
    case Operator::literal:
    case Operator::assoc:
    case Operator::regex:
    case Operator::predicate:
        return t;
    default:
        break;
    }
    if (t.arity() == 0)
        return t;
    std::vector<Tree> kids;
    kids.reserve(t.arity());
    for (const auto& c : t.children())
        kids.push_back(normalize_not(c));
    return t.with_children(std::move(kids));
}

CompiledQuery compile(const Tree& needle, const CompileOptions& options) {
    Compiler c(options);
    const Tree normalized = normalize_not(needle);
    Filters f = c.build(normalized);
    c.stats.max_bdd_nodes = std::max(c.stats.max_bdd_nodes, c.store.node_count(f.bdd));
    return CompiledQuery{needle, f.lambda, BddFilter(c.store, f.bdd), should_memoize(needle), c.stats};
}

} // namespace eidsgrep
