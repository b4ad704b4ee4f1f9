// eidsgrep command-line front end. Talks to the engine only through the C API.

#include <fstream>
#include <iostream>
#include <iterator>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "eidsgrep.h"

namespace {

constexpr int exit_match = 0;
constexpr int exit_no_match = 1;
constexpr int exit_error = 2;

int report_failure(eg_status s, const std::string& context = {}) {
    std::cerr << "eidsgrep: ";
    if (!context.empty())
        std::cerr << context << ": ";
    std::cerr << eg_status_name(s);
    if (const char* msg = eg_last_error(); msg && *msg)
        std::cerr << ": " << msg;
    std::cerr << '\n';
    return exit_error;
}

// Shared by text and diagnostic callbacks, which receive the same user pointer.
struct Sink {
    std::ostream* out;
    std::string source;
};

void write_text(void* user, const char* text, size_t len) {
    static_cast<Sink*>(user)->out->write(text, static_cast<std::streamsize>(len));
}

void write_diag(void* user, size_t offset, eg_severity sev, const char* message) {
    std::cerr << static_cast<Sink*>(user)->source << ": byte " << offset << ": "
              << (sev == EG_FATAL ? "fatal: " : "") << message << '\n';
}

struct HitSink {
    bool cooked = false;
    std::string prefix;
    uint64_t hits = 0;
};

void write_hit(void* user, const char* text, size_t len, const char* cooked, size_t cooked_len) {
    auto* sink = static_cast<HitSink*>(user);
    ++sink->hits;
    std::cout << sink->prefix;
    if (sink->cooked)
        std::cout.write(cooked, static_cast<std::streamsize>(cooked_len));
    else
        std::cout.write(text, static_cast<std::streamsize>(len));
    std::cout << '\n';
}

bool read_stream(std::istream& in, std::string& out) {
    out.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    return !in.bad();
}

bool load_aliases(const std::string& path) {
    if (path.empty())
        return true;
    if (auto s = eg_load_aliases(path.c_str()); s != EG_OK) {
        report_failure(s, path);
        return false;
    }
    return true;
}

int run_index(int argc, char** argv) {
    CLI::App app{"Build the filter index for a dictionary file", "eidsgrep index"};
    std::string dict, out, aliases;
    app.add_option("file", dict, "Dictionary file")->required();
    app.add_option("-o,--output", out, "Index path (default FILE.eix)");
    app.add_option("--aliases", aliases, "Functor alias table (TSV)");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? exit_match : exit_error;
    }
    if (!load_aliases(aliases))
        return exit_error;
    if (out.empty())
        out = dict + ".eix";
    Sink sink{&std::cerr, dict};
    uint32_t records = 0;
    if (auto s = eg_index_build(dict.c_str(), out.c_str(), write_diag, &sink, &records); s != EG_OK)
        return report_failure(s, dict);
    std::cerr << "indexed " << records << " entries into " << out << '\n';
    return exit_match;
}

int run_ingest(int argc, char** argv) {
    CLI::App app{"Convert `character<TAB>IDS` rows into a dictionary", "eidsgrep ingest"};
    std::string tsv, out, aliases;
    app.add_option("tsv", tsv, "Input TSV file")->required();
    app.add_option("-o,--output", out, "Output dictionary (default standard output)");
    app.add_option("--aliases", aliases, "Functor alias table (TSV)");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? exit_match : exit_error;
    }
    if (!load_aliases(aliases))
        return exit_error;
    std::ofstream file;
    std::ostream* dest = &std::cout;
    if (!out.empty()) {
        file.open(out, std::ios::binary);
        if (!file) {
            std::cerr << "eidsgrep: cannot write " << out << '\n';
            return exit_error;
        }
        dest = &file;
    }
    Sink sink{dest, tsv};
    if (auto s = eg_ingest_tsv(tsv.c_str(), write_text, write_diag, &sink); s != EG_OK)
        return report_failure(s, tsv);
    dest->flush();
    return *dest ? exit_match : exit_error;
}

int run_bench(int argc, char** argv) {
    CLI::App app{"Benchmark utilities", "eidsgrep bench"};
    app.require_subcommand(1);
    auto* gen = app.add_subcommand("gen", "Generate the benchmark query set");
    std::string dict, seeds, pivot = "日", aliases;
    gen->add_option("dict", dict, "Dictionary file")->required();
    gen->add_option("seedlist", seeds, "File of seed characters")->required();
    gen->add_option("--pivot", pivot, "Pivot character for the Boolean family")->capture_default_str();
    app.add_option("--aliases", aliases, "Functor alias table (TSV)");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? exit_match : exit_error;
    }
    if (!load_aliases(aliases))
        return exit_error;
    Sink sink{&std::cout, dict};
    if (auto s = eg_bench_generate(dict.c_str(), seeds.c_str(), pivot.c_str(), write_text, &sink);
        s != EG_OK)
        return report_failure(s);
    return exit_match;
}

int run_cook(int argc, char** argv) {
    CLI::App app{"Rewrite EIDS text in canonical cooked form", "eidsgrep cook"};
    std::vector<std::string> files;
    std::string aliases;
    app.add_option("files", files, "Input files (default standard input)");
    app.add_option("--aliases", aliases, "Functor alias table (TSV)");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? exit_match : exit_error;
    }
    if (!load_aliases(aliases))
        return exit_error;
    if (files.empty())
        files.push_back("-");
    int rc = exit_match;
    for (const auto& f : files) {
        std::string text;
        bool ok;
        if (f == "-") {
            ok = read_stream(std::cin, text);
        } else {
            std::ifstream in(f, std::ios::binary);
            ok = in && read_stream(in, text);
        }
        if (!ok) {
            std::cerr << "eidsgrep: cannot read " << f << '\n';
            rc = exit_error;
            continue;
        }
        Sink sink{&std::cout, f == "-" ? "(standard input)" : f};
        if (auto s = eg_cook(text.data(), text.size(), write_text, write_diag, &sink); s != EG_OK)
            rc = report_failure(s, f);
    }
    return rc;
}

struct Query {
    eg_query* q = nullptr;
    ~Query() { eg_query_free(q); }
};

struct Dict {
    eg_dict* d = nullptr;
    ~Dict() { eg_dict_free(d); }
};

void accumulate(eg_scan_stats& total, const eg_scan_stats& s) {
    total.entries += s.entries;
    total.lambda_passes += s.lambda_passes;
    total.bdd_passes += s.bdd_passes;
    total.tree_matches += s.tree_matches;
    total.cpu_seconds += s.cpu_seconds;
    total.wall_seconds += s.wall_seconds;
}

int run_search(int argc, char** argv) {
    CLI::App app{"Search EIDS dictionaries for entries matching a structural pattern", "eidsgrep"};
    app.footer("Subcommands: eidsgrep index FILE | ingest TSV | bench gen DICT SEEDS | cook [FILE...]");
    std::vector<std::string> positional, patterns;
    std::string pattern_file, index_path, aliases, memo = "auto";
    bool no_lambda = false, no_bdd = false, no_filter = false, no_index = false;
    bool stats = false, cooked = false;
    size_t bdd_cap = 1000;
    unsigned threads = 1;

    app.add_option("args", positional, "PATTERN followed by input files (default standard input)");
    app.add_option("-e,--regexp", patterns, "Pattern (repeatable; entries matching any are emitted)");
    app.add_option("-f,--file", pattern_file, "Read patterns from a file, one per line");
    app.add_flag("--no-lambda", no_lambda, "Disable the lambda filter layer");
    app.add_flag("--no-bdd", no_bdd, "Disable the BDD filter layer");
    app.add_flag("--no-filter", no_filter, "Disable both filter layers");
    app.add_flag("--no-index", no_index, "Parse the dictionary directly instead of using its index");
    app.add_option("--index", index_path, "Index path (default FILE.eix)");
    app.add_option("--memo", memo, "Match memoization")
        ->check(CLI::IsMember({"auto", "on", "off"}))
        ->capture_default_str();
    app.add_flag("--stats", stats, "Print filter statistics to standard error");
    app.add_flag("--cooked", cooked, "Print matches in canonical cooked form");
    app.add_option("--bdd-cap", bdd_cap, "Node limit for intermediate BDDs")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--threads", threads, "Scan worker threads")
        ->check(CLI::Range(1u, 256u))
        ->capture_default_str();
    app.add_option("--aliases", aliases, "Functor alias table (TSV)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? exit_match : exit_error;
    }
    if (!load_aliases(aliases))
        return exit_error;

    if (!pattern_file.empty()) {
        std::ifstream in(pattern_file, std::ios::binary);
        if (!in) {
            std::cerr << "eidsgrep: cannot read " << pattern_file << '\n';
            return exit_error;
        }
        for (std::string line; std::getline(in, line);) {
            if (!line.empty() && line.back() == '\r')
                line.pop_back();
            if (!line.empty())
                patterns.push_back(line);
        }
    }
    std::vector<std::string> files;
    if (patterns.empty() && pattern_file.empty()) {
        if (positional.empty()) {
            std::cerr << "eidsgrep: no pattern given\n" << app.help();
            return exit_error;
        }
        patterns.push_back(positional.front());
        files.assign(positional.begin() + 1, positional.end());
    } else {
        files = positional;
    }
    if (patterns.empty()) {
        std::cerr << "eidsgrep: pattern file holds no patterns\n";
        return exit_error;
    }
    if (files.empty())
        files.push_back("-");
    if (!index_path.empty() && files.size() != 1) {
        std::cerr << "eidsgrep: --index needs exactly one input file\n";
        return exit_error;
    }

    Query query;
    std::vector<const char*> ptrs;
    std::vector<size_t> lens;
    for (const auto& p : patterns) {
        ptrs.push_back(p.data());
        lens.push_back(p.size());
    }
    if (auto s = eg_query_compile_any(ptrs.data(), lens.data(), ptrs.size(), bdd_cap, &query.q);
        s != EG_OK)
        return report_failure(s, "pattern");

    eg_scan_options opt = eg_scan_options_default();
    opt.use_lambda = !(no_lambda || no_filter);
    opt.use_bdd = !(no_bdd || no_filter);
    opt.memo = memo == "on" ? EG_MEMO_ON : memo == "off" ? EG_MEMO_OFF : EG_MEMO_AUTO;
    opt.threads = threads;

    HitSink hits{cooked, {}, 0};
    eg_scan_stats total{};
    bool failed = false;
    for (const auto& f : files) {
        hits.prefix = files.size() > 1 ? f + ":" : std::string();
        eg_scan_stats s{};
        eg_status st;
        if (f == "-") {
            std::string text;
            if (!read_stream(std::cin, text)) {
                std::cerr << "eidsgrep: cannot read standard input\n";
                failed = true;
                continue;
            }
            st = eg_scan_text(text.data(), text.size(), query.q, &opt, write_hit, &hits, &s);
        } else {
            Dict dict;
            std::string idx = index_path.empty() ? f + ".eix" : index_path;
            st = eg_dict_open(f.c_str(), no_index ? nullptr : idx.c_str(), &dict.d);
            if (st == EG_OK)
                st = eg_scan(dict.d, query.q, &opt, write_hit, &hits, &s);
        }
        if (st != EG_OK) {
            report_failure(st, f);
            failed = true;
            continue;
        }
        accumulate(total, s);
    }
    std::cout.flush();

    if (stats) {
        std::cerr << "entries: " << total.entries << '\n'
                  << "lambda-hits: " << total.lambda_passes << '\n'
                  << "bdd-hits: " << total.bdd_passes << '\n'
                  << "tree-hits: " << total.tree_matches << '\n'
                  << "cpu-seconds: " << total.cpu_seconds << '\n';
    }
    if (failed)
        return exit_error;
    return hits.hits ? exit_match : exit_no_match;
}

} // namespace

int main(int argc, char** argv) {
    std::ios::sync_with_stdio(false);
    if (argc >= 2) {
        const std::string cmd = argv[1];
        if (cmd == "index")
            return run_index(argc - 1, argv + 1);
        if (cmd == "ingest")
            return run_ingest(argc - 1, argv + 1);
        if (cmd == "bench")
            return run_bench(argc - 1, argv + 1);
        if (cmd == "cook")
            return run_cook(argc - 1, argv + 1);
    }
    return run_search(argc, argv);
}
