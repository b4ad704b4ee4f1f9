#include <doctest.h>

#include "eidsgrep/filter.hpp"
#include "eidsgrep/match.hpp"
#include "eidsgrep/syntax.hpp"
#include "../support/random_trees.hpp"

using namespace eidsgrep;

namespace {

std::string norm(std::string_view q) { return to_eids(normalize_not(parse_one(q))); }

bool passes(const CompiledQuery& q, const Tree& hay) {
    const auto v = vec(hay);
    return lambda_check(q.lambda, v) && q.bdd.evaluate(v);
}

std::string big_or(int n) {
    std::string q;
    for (int i = 0; i < n - 1; ++i)
        q += "|";
    for (int i = 0; i < n; ++i)
        q += "<h" + std::to_string(i) + ">(;)";
    return q;
}

} // namespace

TEST_CASE("negation push-down") {
    CHECK(norm("!!...日") == "...日");
    CHECK(norm("!|AB") == "&!A!B");
    CHECK(norm("!&AB") == "|!A!B");
    CHECK(norm("!!!|A!B") == "&!AB");
    CHECK(norm("!?") == "!?");
    CHECK(norm("⿰!!A!|BC") == "⿰A&!B!C");
    CHECK(norm("=!!A") == "=!!A");
    CHECK(norm("【x】!!A") == "【x】!!A");
    CHECK(is_match_nothing(parse_one("!?")));
    CHECK(is_match_everything(parse_one("?")));
    CHECK_FALSE(is_match_everything(parse_one("!?")));
}

TEST_CASE("trivial and unsupported operators compile to trivial filters") {
    for (auto q : {"?", "@⿰AB", "/<日>(;)", "!日", "#?", "!...日"}) {
        INFO(q);
        auto c = compile(parse_one(q));
        CHECK(c.lambda.matches_everything());
        CHECK(c.bdd.is_true());
    }
    auto nothing = compile(parse_one("!?"));
    CHECK(nothing.lambda.matches_nothing());
    CHECK(nothing.bdd.is_false());
}

TEST_CASE("head atom") {
    auto c = compile(parse_one("結"));
    Vec128 head;
    head.w[0] = head_bits(intern("結"));
    CHECK((c.lambda.mask & head) == head);
    CHECK(passes(c, parse_one("<結>⿰糸<吉>⿱士口")));
    CHECK(c.bdd.evaluate(vec(parse_one("結"))));
}

TEST_CASE("memo flag follows the needle") {
    CHECK_FALSE(compile(parse_one("...士")).memoize);
    CHECK(compile(parse_one(".........士")).memoize);
}

TEST_CASE("filters reject unrelated entries") {
    auto c = compile(parse_one("⿰糸⿱士口"));
    CHECK(passes(c, parse_one("<結>⿰糸<吉>⿱士口")));
    int rejected = 0;
    gen::Random r(4);
    for (int i = 0; i < 500; ++i)
        rejected += !passes(c, gen::ids_entry(r, 4, "字"));
    CHECK(rejected > 400);
}

TEST_CASE("BDD cap holds for a wide disjunction") {
    auto q = "⿰?⿱?" + big_or(64);
    auto c = compile(parse_one(q));
    CHECK(c.stats.max_bdd_nodes <= default_bdd_cap);
    CHECK(c.bdd.node_count() <= default_bdd_cap);
    CompileOptions small;
    small.bdd_cap = 40;
    auto tight = compile(parse_one(q), small);
    CHECK(tight.stats.max_bdd_nodes <= 40);
    CHECK(tight.stats.quantified_bits > 0);
    for (int i = 0; i < 64; i += 7) {
        auto hay = parse_one("⿰日⿱月<h" + std::to_string(i) + ">⿰ab");
        CHECK(passes(c, hay));
        CHECK(passes(tight, hay));
    }
}

TEST_CASE("soundness sweep") {
    gen::Random r(99);
    gen::MatchTreeOptions needles{10, 0.3, 0.4};
    gen::MatchTreeOptions hays{14, 0.0, 0.4};
    std::vector<Tree> corpus;
    for (int i = 0; i < 2500; ++i)
        corpus.push_back(gen::match_tree(r, hays));
    for (int i = 0; i < 2500; ++i)
        corpus.push_back(gen::ids_entry(r, 5, "字"));
    std::size_t hits = 0, lambda_rejects = 0, bdd_rejects = 0;
    for (int i = 0; i < 200; ++i) {
        auto needle = gen::match_tree(r, needles);
        auto c = compile(needle);
        MatchContext ctx(c.memoize);
        for (const auto& h : corpus) {
            const auto v = vec(h);
            const bool l = lambda_check(c.lambda, v), b = c.bdd.evaluate(v);
            lambda_rejects += !l;
            bdd_rejects += !b;
            ctx.clear_memo();
            if (match(needle, h, ctx)) {
                ++hits;
                INFO(to_eids(needle), " vs ", to_eids(h));
                REQUIRE(l);
                REQUIRE(b);
            }
        }
    }
    CHECK(hits > 0);
    CHECK(bdd_rejects > 0);
    MESSAGE("sweep: ", hits, " matches, lambda rejected ", lambda_rejects, ", bdd rejected ", bdd_rejects);
}
