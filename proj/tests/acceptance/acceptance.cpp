// Acceptance suite: one line per criterion, nonzero exit if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "eidsgrep/bench.hpp"
#include "eidsgrep/error.hpp"
#include "eidsgrep/filter.hpp"
#include "eidsgrep/index.hpp"
#include "eidsgrep/match.hpp"
#include "eidsgrep/syntax.hpp"
#include "eidsgrep/utf8.hpp"
#include "../support/oracle.hpp"
#include "../support/random_trees.hpp"

using namespace eidsgrep;

namespace {

enum class Verdict { pass, fail, skip };

struct Outcome {
    Verdict verdict;
    std::string detail;
};

Outcome fail(std::string d) { return {Verdict::fail, std::move(d)}; }
Outcome judge(bool ok, std::string d) { return {ok ? Verdict::pass : Verdict::fail, std::move(d)}; }

std::string fmt(double x, int digits = 3) {
    std::ostringstream s;
    s.precision(digits);
    s << x;
    return s.str();
}

Tree L(const char* head) { return Tree::leaf(intern(head)); }

Tree N(const char* functor, std::vector<Tree> kids, const char* head = nullptr) {
    std::optional<Symbol> h;
    if (head)
        h = intern(head);
    return Tree(intern(functor), h, std::move(kids));
}

// Engine verdict as a scan would produce it: both filter layers, then the match.
bool engine(const CompiledQuery& q, const Tree& hay) {
    const auto v = vec(hay);
    if (!lambda_check(q.lambda, v) || !q.bdd.evaluate(v))
        return false;
    MatchContext ctx(q.memoize);
    return match(q.needle, hay, ctx);
}

// ---------------------------------------------------------------------------
// Synthetic dictionary shared by the corpus criteria.

const std::vector<std::string>& components() {
    static const std::vector<std::string> c = {
        "日", "月", "木", "口", "士", "女", "米", "糸", "言", "五", "十", "一", "寸", "田",
        "力", "人", "心", "手", "水", "火", "土", "金", "山", "石", "目", "耳", "禾", "竹",
        "虫", "貝", "門", "雨", "魚", "鳥", "馬", "王", "弓", "車", "立", "示", "衣", "刀"};
    return c;
}

struct Corpus {
    std::string text;
    std::vector<std::string> heads;  // compound entries, in file order
    std::size_t entries = 0;
};

Corpus make_corpus(std::size_t n, std::uint64_t seed) {
    Corpus c;
    std::set<std::string> reserved(components().begin(), components().end());
    for (const auto& comp : components()) {
        c.text += comp + "\n";
        ++c.entries;
    }
    gen::Random r(seed);
    char32_t cp = 0x4E00;
    while (c.heads.size() < n) {
        if (cp == 0xA000)
            cp = 0x20000;
        std::string head = utf8::encode(cp++);
        if (reserved.count(head))
            continue;
        c.text += to_eids(gen::ids_entry(r, 5, head)) + "\n";
        c.heads.push_back(std::move(head));
        ++c.entries;
    }
    return c;
}

const Corpus& big_corpus() {
    static const Corpus c = make_corpus(50000, 0xC0FFEE);
    return c;
}

std::vector<std::string> run_scan(const CompiledQuery& q, const Dictionary& d, const ScanOptions& o,
                                  ScanStats* stats = nullptr) {
    std::vector<std::string> out;
    auto s = scan(q, d, o, [&](const ScanHit& h) { out.emplace_back(h.text); });
    if (stats)
        *stats = s;
    return out;
}

// ---------------------------------------------------------------------------

Outcome criterion_1() {
    std::vector<std::string> problems;
    auto expect = [&](const char* text, const Tree& want) {
        auto r = parse_stream(text);
        if (!r.diagnostics.empty() || r.trees.size() != 1 || !(r.trees[0].tree == want))
            problems.push_back(text);
    };
    expect("⿰日月", N("⿰", {L("日"), L("月")}));
    expect("[pq].x.<head of a>(a)(b)", N("pq", {N("x", {N("a", {}, "head of a")}), N("b", {})}));
    expect("<語>⿰言<吾>⿱五口", N("⿰", {L("言"), N("⿱", {L("五"), L("口")}, "吾")}, "語"));
    expect("...士", N(".", {L("士")}));
    expect("語", N(";", {}, "語"));
    expect("<語>(;)", L("語"));

    gen::Random r(1);
    std::size_t failures = 0, nodes = 0;
    const int trials = 100000;
    for (int i = 0; i < trials; ++i) {
        auto t = gen::hostile_tree(r, 6);
        nodes += t.size();
        auto back = parse_stream(write_cooked(t));
        if (!back.diagnostics.empty() || back.trees.size() != 1 || !(back.trees[0].tree == t))
            ++failures;
    }
    std::string d = "fixtures " + std::to_string(6 - problems.size()) + "/6, round trips " +
                    std::to_string(trials - failures) + "/" + std::to_string(trials) + " (mean " +
                    fmt(static_cast<double>(nodes) / trials) + " nodes)";
    for (const auto& p : problems)
        d += "; fixture failed: " + p;
    return judge(problems.empty() && failures == 0, d);
}

Outcome criterion_2() {
    const auto entry = parse_one("<結>⿰糸<吉>⿱士口");
    const char* positives[] = {"結", "⿰糸⿱士口", "...士", "&...士...口", "⿰?...士", "⿰?⿱士口"};
    const char* negatives[] = {"⿱糸⿱士口", "⿰糸⿱口士", "⿰糸⿰士口", "⿰⿱士口糸", "...木",
                               "&...士...木", "⿰?⿱士木", "⿰?...木", "吉", "⿲糸士口"};
    std::vector<std::string> wrong;
    for (auto q : positives)
        if (!engine(compile(parse_one(q)), entry))
            wrong.push_back(std::string(q) + " should match");
    for (auto q : negatives)
        if (engine(compile(parse_one(q)), entry))
            wrong.push_back(std::string(q) + " should not match");
    std::string d = std::to_string(std::size(positives)) + " positive and " +
                    std::to_string(std::size(negatives)) + " negative queries";
    for (const auto& w : wrong)
        d += "; " + w;
    return judge(wrong.empty(), d);
}

Outcome criterion_3() {
    gen::Random r(3);
    gen::MatchTreeOptions needles{12, 0.3, 0.4};
    gen::MatchTreeOptions hays{12, 0.0, 0.4};
    const int trials = 100000;
    int disagreements = 0, positives = 0;
    std::string first;
    for (int i = 0; i < trials; ++i) {
        auto n = gen::match_tree(r, needles);
        auto h = gen::match_tree(r, hays);
        const bool want = oracle::match(n, h);
        const bool got = engine(compile(n), h);
        positives += want;
        if (want != got && disagreements++ == 0)
            first = to_eids(n) + " vs " + to_eids(h);
    }
    std::string d = std::to_string(trials) + " pairs, " + std::to_string(positives) + " matches, " +
                    std::to_string(disagreements) + " disagreements";
    if (!first.empty())
        d += "; first: " + first;
    return judge(disagreements == 0 && positives > trials / 20, d);
}

// Criteria 4 and 5 share one expensive sweep.
struct Sweep {
    bool ran = false;
    std::size_t queries = 0, mismatches = 0, layer_violations = 0;
    std::uint64_t entries = 0, lambda_passes = 0, bdd_passes = 0, matches = 0;
    std::map<QueryFamily, std::size_t> per_family;
    std::string first_problem;
    double seconds = 0;
};

std::vector<std::string> seed_list(const Corpus& c) {
    std::vector<std::string> seeds(components().begin(), components().begin() + 20);
    for (std::size_t i = 0; i < 20; ++i)
        seeds.push_back(c.heads[i * (c.heads.size() / 20)]);
    return seeds;
}

const Sweep& sweep() {
    static Sweep s = [] {
        Sweep s;
        const auto start = std::chrono::steady_clock::now();
        const auto& c = big_corpus();
        auto dict = Dictionary::from_memory(c.text, build_index(c.text));
        std::string seeds;
        for (const auto& x : seed_list(c))
            seeds += x + "\n";
        const auto queries = bench_generate(c.text, seeds);
        s.queries = queries.size();
        for (const auto& bq : queries) {
            ++s.per_family[bq.family];
            const auto q = compile(bq.query);
            ScanStats none, lam, bdd, both;
            const auto base = run_scan(q, dict, {false, false, MemoMode::automatic, 1}, &none);
            const bool same = run_scan(q, dict, {true, false, MemoMode::automatic, 1}, &lam) == base &&
                              run_scan(q, dict, {false, true, MemoMode::automatic, 1}, &bdd) == base &&
                              run_scan(q, dict, {true, true, MemoMode::automatic, 1}, &both) == base;
            const bool layers = lam.lambda_passes >= lam.tree_matches && bdd.bdd_passes >= bdd.tree_matches &&
                                both.bdd_passes >= both.tree_matches;
            if (!same)
                ++s.mismatches;
            if (!layers)
                ++s.layer_violations;
            if ((!same || !layers) && s.first_problem.empty())
                s.first_problem = bq.text;
            s.entries += none.entries;
            s.matches += none.tree_matches;
            s.lambda_passes += lam.lambda_passes;
            s.bdd_passes += bdd.bdd_passes;
        }
        s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        s.ran = true;
        return s;
    }();
    return s;
}

Outcome criterion_4() {
    const auto& s = sweep();
    std::string d = std::to_string(big_corpus().entries) + " entries x " + std::to_string(s.queries) +
                    " queries (families";
    for (const auto& [f, n] : s.per_family)
        d += " " + std::to_string(static_cast<int>(f)) + ":" + std::to_string(n);
    d += "), " + std::to_string(s.matches) + " tree hits, " + std::to_string(s.mismatches) +
         " output mismatches, " + std::to_string(s.layer_violations) + " layer violations, " +
         fmt(s.seconds) + " s";
    if (!s.first_problem.empty())
        d += "; first problem: " + s.first_problem;
    return judge(s.mismatches == 0 && s.layer_violations == 0 && s.per_family.size() == 8 &&
                     big_corpus().entries >= 50000,
                 d);
}

Outcome criterion_5() {
    const auto& s = sweep();
    const double lam = static_cast<double>(s.lambda_passes) / static_cast<double>(s.entries);
    const double bdd = static_cast<double>(s.bdd_passes) / static_cast<double>(s.entries);
    const double hits = static_cast<double>(s.matches) / static_cast<double>(s.entries);
    return judge(bdd < lam && lam < 0.8 && bdd < 0.8,
                 "lambda pass rate " + fmt(100 * lam) + "%, BDD pass rate " + fmt(100 * bdd) +
                     "%, tree hit rate " + fmt(100 * hits) + "%");
}

Outcome criterion_6() {
    const auto c = make_corpus(10000, 6);
    auto dict = Dictionary::from_memory(c.text, build_index(c.text));

    // Most frequent leaf component.
    std::map<std::string, std::size_t> freq;
    for (const auto& p : parse_stream(c.text).trees)
        for_each_subtree(p.tree, [&](const Tree& t) {
            if (t.arity() == 0 && t.head() && &t != &p.tree)
                ++freq[std::string(t.head()->text())];
        });
    const auto component =
        std::max_element(freq.begin(), freq.end(), [](auto& a, auto& b) { return a.second < b.second; })->first;

    auto timed = [&](int k, MemoMode memo, std::vector<std::string>* hits) {
        std::string q = component;
        for (int i = 0; i < k; ++i)
            q = "..." + q;
        const auto compiled = compile(parse_one(q));
        double best = 1e30;
        for (int rep = 0; rep < 3; ++rep) {
            ScanStats st;
            auto out = run_scan(compiled, dict, {false, false, memo, 1}, &st);
            best = std::min(best, st.cpu_seconds);
            if (hits)
                *hits = std::move(out);
        }
        return best;
    };

    std::vector<double> on(9), off(9);
    bool identical = true;
    for (int k = 1; k <= 8; ++k) {
        std::vector<std::string> a, b;
        on[k] = timed(k, MemoMode::on, &a);
        off[k] = timed(k, MemoMode::off, &b);
        identical = identical && a == b;
    }
    bool linear = true;
    std::string ratios;
    for (int k = 1; k <= 8; ++k) {
        const double ratio = on[k] / on[1];
        linear = linear && ratio <= 3.0 * k;
        ratios += (k > 1 ? "," : "") + fmt(ratio, 2);
    }
    const double growth = off[8] / off[5];
    return judge(identical && linear && growth >= 2.0,
                 "component " + component + " on " + std::to_string(c.entries) +
                     " entries; memo on time(k)/time(1) = " + ratios + "; memo off time(8)/time(5) = " +
                     fmt(growth) + " (" + fmt(off[5]) + " s -> " + fmt(off[8]) + " s); results " +
                     (identical ? "identical" : "DIFFER"));
}

Outcome criterion_7() {
    // 64 distinct head atoms, some of them present in the corpus as leaves.
    std::vector<std::string> heads(components().begin(), components().end());
    for (std::size_t i = 0; heads.size() < 64; ++i)
        heads.push_back(big_corpus().heads[i * 97]);
    std::string disjunction;
    for (std::size_t i = 0; i + 1 < heads.size(); ++i)
        disjunction += "|";
    for (const auto& h : heads)
        disjunction += h;
    const std::string text = "⿰?⿱?" + disjunction;
    const auto q = compile(parse_one(text));

    const auto& c = big_corpus();
    auto dict = Dictionary::from_memory(c.text, build_index(c.text));
    const auto base = run_scan(q, dict, {false, false, MemoMode::automatic, 1});
    ScanStats st;
    const bool same = run_scan(q, dict, {true, true, MemoMode::automatic, 1}, &st) == base &&
                      run_scan(q, dict, {false, true, MemoMode::automatic, 1}) == base &&
                      run_scan(q, dict, {true, false, MemoMode::automatic, 1}) == base;
    const bool capped = q.stats.max_bdd_nodes <= default_bdd_cap && q.bdd.node_count() <= default_bdd_cap;
    return judge(capped && same && !base.empty(),
                 "largest retained BDD " + std::to_string(q.stats.max_bdd_nodes) + " nodes (largest before capping " +
                     std::to_string(q.stats.max_uncapped_nodes) + "), final " +
                     std::to_string(q.bdd.node_count()) + ", " + std::to_string(q.stats.quantified_bits) +
                     " bits quantified; " + std::to_string(base.size()) + " hits, BDD passes " +
                     std::to_string(st.bdd_passes) + ", filtered output " + (same ? "identical" : "DIFFERS"));
}

Outcome criterion_8() {
    const LambdaFilter a{{{0b0101, 0, 0, 0}}, 1}, b{{{0b1010, 0, 0, 0}}, 1};
    const bool example = lambda_or(a, b) == LambdaFilter{{{0b1111, 0, 0, 0}}, 1};

    gen::Random r(8);
    auto random_filter = [&] {
        Vec128 m;
        const double density = r.chance(0.5) ? 0.05 : 0.3;
        for (int bit = 1; bit <= 128; ++bit)
            if (r.chance(density))
                m.set(bit);
        const int lam = static_cast<int>(r.below(static_cast<std::size_t>(m.popcount()) + 1)) - 1;
        return LambdaFilter{m, lam};
    };
    // A vector accepted by f: lambda+1 of its mask bits plus noise.
    auto accepted_by = [&](const LambdaFilter& f, Vec128 v) {
        std::vector<int> bits;
        for (int bit = 1; bit <= 128; ++bit)
            if (f.mask.test(bit))
                bits.push_back(bit);
        std::shuffle(bits.begin(), bits.end(), r.engine());
        for (int i = 0; i <= f.lambda && i < static_cast<int>(bits.size()); ++i)
            v.set(bits[i]);
        return v;
    };
    auto noise = [&] {
        Vec128 v;
        const double density = 0.02 * static_cast<double>(r.below(10));
        for (int bit = 1; bit <= 128; ++bit)
            if (r.chance(density))
                v.set(bit);
        return v;
    };

    const int samples = 100000;
    int and_violations = 0, remap_violations = 0;
    for (int i = 0; i < samples; ++i) {
        const auto f1 = random_filter(), f2 = random_filter();
        const auto v = accepted_by(f2, accepted_by(f1, noise()));
        if (lambda_check(f1, v) && lambda_check(f2, v) && !lambda_check(lambda_and(f1, f2), v))
            ++and_violations;
    }
    const SlotMap maps[] = {slots::first, slots::last, slots::deep, slots::identity};
    for (int i = 0; i < samples; ++i) {
        const auto f = random_filter();
        const auto& map = maps[r.below(4)];
        const auto src = accepted_by(f, noise());
        if (lambda_check(f, src) && !lambda_check(lambda_remap(f, map), remap_vector(src, map)))
            ++remap_violations;
    }
    return judge(example && and_violations == 0 && remap_violations == 0,
                 std::string("OR example ") + (example ? "gives (1111,1)" : "WRONG") + "; " +
                     std::to_string(samples) + " AND samples, " + std::to_string(and_violations) +
                     " violations; " + std::to_string(samples) + " remap samples, " +
                     std::to_string(remap_violations) + " violations");
}

Outcome criterion_9() {
    const auto c = make_corpus(10000, 9);
    namespace fs = std::filesystem;
    const auto dir = fs::temp_directory_path() / "eidsgrep_acceptance_9";
    fs::create_directories(dir);
    const auto dpath = dir / "dict.txt", i1 = dir / "one.eix", i2 = dir / "two.eix";
    std::ofstream(dpath, std::ios::binary) << c.text;

    build_index(read_file(dpath)).write(i1);
    build_index(read_file(dpath)).write(i2);
    const bool identical_bytes = read_file(i1) == read_file(i2);

    auto indexed = Dictionary::open(dpath, i1);
    auto plain = Dictionary::open(dpath, std::nullopt);
    std::string seeds;
    for (std::size_t i = 0; i < 10; ++i)
        seeds += components()[i] + c.heads[i * 997] + "\n";
    std::size_t queries = 0, differ = 0;
    for (const auto& bq : bench_generate(c.text, seeds)) {
        const auto q = compile(bq.query);
        ++queries;
        if (run_scan(q, indexed, {}) != run_scan(q, plain, {}))
            ++differ;
    }

    std::ofstream(dpath, std::ios::binary | std::ios::app) << "木\n";
    bool stale = false;
    try {
        Dictionary::open(dpath, i1);
    } catch (const StaleIndexError&) {
        stale = true;
    }
    fs::remove_all(dir);
    return judge(identical_bytes && differ == 0 && stale,
                 std::to_string(queries) + " queries, " + std::to_string(differ) +
                     " indexed/unindexed differences; repeated builds " +
                     (identical_bytes ? "byte-identical" : "DIFFER") + "; modified dictionary " +
                     (stale ? "rejected as stale" : "NOT rejected"));
}

Outcome criterion_10() {
    const char* path = std::getenv("EIDSGREP_KANJIVG_DICT");
    if (!path || !*path)
        return {Verdict::skip, "set EIDSGREP_KANJIVG_DICT to a KanjiVG-derived dictionary to run"};
    auto dict = Dictionary::open(path, std::nullopt);
    const auto a = run_scan(compile(parse_one("...士")), dict, {}).size();
    const auto b = run_scan(compile(parse_one("⿰?⿱士口")), dict, {}).size();
    return judge(a == 70 && b == 6, "...士 -> " + std::to_string(a) + " hits (want 70), ⿰?⿱士口 -> " +
                                        std::to_string(b) + " hits (want 6)");
}

} // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
        {"parser fixtures and cooked round trip", criterion_1},
        {"match semantics on 結", criterion_2},
        {"engine agrees with reference matcher", criterion_3},
        {"filtering transparency on generated corpus", criterion_4},
        {"filter effectiveness", criterion_5},
        {"memoization asymptotics", criterion_6},
        {"BDD complexity cap", criterion_7},
        {"lambda calculus soundness", criterion_8},
        {"index format and staleness", criterion_9},
        {"external KanjiVG counts", criterion_10},
    };
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = fail(std::string("exception: ") + e.what());
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const char* tag = o.verdict == Verdict::pass ? "PASS" : o.verdict == Verdict::fail ? "FAIL" : "SKIP";
        failures += o.verdict == Verdict::fail;
        std::printf("[%s] criterion %zu: %s: %s (%.1f s)\n", tag, i + 1, criteria[i].first, o.detail.c_str(),
                    secs);
        std::fflush(stdout);
    }
    std::printf("%d criteria failed\n", failures);
    return failures ? 1 : 0;
}
