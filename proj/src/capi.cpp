#include "eidsgrep.h"

#include <new>
#include <string>

#include "eidsgrep/bench.hpp"
#include "eidsgrep/error.hpp"
#include "eidsgrep/filter.hpp"
#include "eidsgrep/index.hpp"
#include "eidsgrep/syntax.hpp"

struct eg_query {
    eidsgrep::CompiledQuery compiled;
};

struct eg_dict {
    eidsgrep::Dictionary dict;
};

namespace {

thread_local std::string last_error;

eg_status fail(eg_status s, std::string msg) {
    last_error = std::move(msg);
    return s;
}

// Maps exceptions from the core onto status codes.
template <typename Fn>
eg_status guarded(Fn&& fn) {
    try {
        fn();
        return EG_OK;
    } catch (const eidsgrep::ParseError& e) {
        return fail(EG_ERR_PARSE, e.what());
    } catch (const eidsgrep::StaleIndexError& e) {
        return fail(EG_ERR_STALE_INDEX, e.what());
    } catch (const eidsgrep::IoError& e) {
        return fail(EG_ERR_IO, e.what());
    } catch (const eidsgrep::UnsupportedOperator& e) {
        return fail(EG_ERR_UNSUPPORTED, e.what());
    } catch (const eidsgrep::QueryError& e) {
        return fail(EG_ERR_QUERY, e.what());
    } catch (const std::invalid_argument& e) {
        return fail(EG_ERR_INVALID_ARGUMENT, e.what());
    } catch (const std::bad_alloc&) {
        return fail(EG_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(EG_ERR_INTERNAL, e.what());
    }
}

eidsgrep::ScanOptions to_options(const eg_scan_options* o) {
    eidsgrep::ScanOptions opt;
    if (!o)
        return opt;
    opt.use_lambda = o->use_lambda != 0;
    opt.use_bdd = o->use_bdd != 0;
    switch (o->memo) {
    case EG_MEMO_ON: opt.memo = eidsgrep::MemoMode::on; break;
    case EG_MEMO_OFF: opt.memo = eidsgrep::MemoMode::off; break;
    default: opt.memo = eidsgrep::MemoMode::automatic; break;
    }
    opt.threads = o->threads ? o->threads : 1;
    return opt;
}

void copy_stats(const eidsgrep::ScanStats& s, eg_scan_stats* out) {
    if (!out)
        return;
    out->entries = s.entries;
    out->lambda_passes = s.lambda_passes;
    out->bdd_passes = s.bdd_passes;
    out->tree_matches = s.tree_matches;
    out->cpu_seconds = s.cpu_seconds;
    out->wall_seconds = s.wall_seconds;
}

void report(eg_diag_fn diag, void* user, const std::vector<eidsgrep::ParseDiagnostic>& ds) {
    if (!diag)
        return;
    for (const auto& d : ds)
        diag(user, d.offset, d.severity == eidsgrep::Severity::fatal ? EG_FATAL : EG_RECOVERABLE,
             d.message.c_str());
}

eidsgrep::HitCallback hit_adapter(eg_hit_fn fn, void* user) {
    return [fn, user](const eidsgrep::ScanHit& hit) {
        if (!fn)
            return;
        const auto cooked = eidsgrep::to_eids(hit.tree);
        fn(user, hit.text.data(), hit.text.size(), cooked.data(), cooked.size());
    };
}

eidsgrep::CompileOptions compile_options(size_t bdd_cap) {
    eidsgrep::CompileOptions o;
    if (bdd_cap)
        o.bdd_cap = bdd_cap;
    return o;
}

} // namespace

extern "C" {

const char* eg_version(void) { return "0.1.0"; }

const char* eg_last_error(void) { return last_error.c_str(); }

const char* eg_status_name(eg_status s) {
    switch (s) {
    case EG_OK: return "ok";
    case EG_ERR_INVALID_ARGUMENT: return "invalid argument";
    case EG_ERR_PARSE: return "parse error";
    case EG_ERR_IO: return "I/O error";
    case EG_ERR_STALE_INDEX: return "stale index";
    case EG_ERR_UNSUPPORTED: return "unsupported operator";
    case EG_ERR_QUERY: return "query error";
    case EG_ERR_INTERNAL: return "internal error";
    }
    return "unknown status";
}

eg_status eg_load_aliases(const char* path) {
    if (!path)
        return fail(EG_ERR_INVALID_ARGUMENT, "null alias path");
    return guarded([&] { eidsgrep::set_default_aliases(eidsgrep::AliasTable::load(path)); });
}

eg_scan_options eg_scan_options_default(void) { return eg_scan_options{1, 1, EG_MEMO_AUTO, 1}; }

eg_status eg_query_compile(const char* pattern, size_t len, size_t bdd_cap, eg_query** out) {
    if (!pattern || !out)
        return fail(EG_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] {
        auto tree = eidsgrep::parse_one(std::string_view(pattern, len));
        *out = new eg_query{eidsgrep::compile(tree, compile_options(bdd_cap))};
    });
}

eg_status eg_query_compile_any(const char* const* patterns, const size_t* lens, size_t count,
                               size_t bdd_cap, eg_query** out) {
    if (!patterns || !lens || !out || count == 0)
        return fail(EG_ERR_INVALID_ARGUMENT, "need at least one pattern");
    *out = nullptr;
    return guarded([&] {
        auto acc = eidsgrep::parse_one(std::string_view(patterns[0], lens[0]));
        for (size_t i = 1; i < count; ++i) {
            if (!patterns[i])
                throw std::invalid_argument("null pattern");
            auto next = eidsgrep::parse_one(std::string_view(patterns[i], lens[i]));
            acc = eidsgrep::Tree(eidsgrep::intern("|"), std::nullopt, {acc, next});
        }
        *out = new eg_query{eidsgrep::compile(acc, compile_options(bdd_cap))};
    });
}

void eg_query_free(eg_query* q) { delete q; }

int eg_query_memoizes(const eg_query* q) { return q && q->compiled.memoize ? 1 : 0; }

eg_status eg_query_text(const eg_query* q, eg_text_fn fn, void* user) {
    if (!q || !fn)
        return fail(EG_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        auto s = eidsgrep::to_eids(q->compiled.needle);
        fn(user, s.data(), s.size());
    });
}

eg_status eg_dict_open(const char* dict_path, const char* index_path, eg_dict** out) {
    if (!dict_path || !out)
        return fail(EG_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    return guarded([&] {
        std::optional<std::filesystem::path> idx;
        if (index_path)
            idx = index_path;
        *out = new eg_dict{eidsgrep::Dictionary::open(dict_path, idx)};
    });
}

void eg_dict_free(eg_dict* d) { delete d; }

int eg_dict_indexed(const eg_dict* d) { return d && d->dict.indexed() ? 1 : 0; }

eg_status eg_scan(const eg_dict* d, const eg_query* q, const eg_scan_options* options,
                  eg_hit_fn on_hit, void* user, eg_scan_stats* stats) {
    if (!d || !q)
        return fail(EG_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        auto s = eidsgrep::scan(q->compiled, d->dict, to_options(options), hit_adapter(on_hit, user));
        copy_stats(s, stats);
    });
}

eg_status eg_scan_text(const char* text, size_t len, const eg_query* q, const eg_scan_options* options,
                       eg_hit_fn on_hit, void* user, eg_scan_stats* stats) {
    if ((!text && len) || !q)
        return fail(EG_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        auto dict = eidsgrep::Dictionary::from_memory(std::string(text ? text : "", len));
        auto s = eidsgrep::scan(q->compiled, dict, to_options(options), hit_adapter(on_hit, user));
        copy_stats(s, stats);
    });
}

eg_status eg_index_build(const char* dict_path, const char* index_path, eg_diag_fn diag, void* user,
                         uint32_t* records) {
    if (!dict_path || !index_path)
        return fail(EG_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const auto bytes = eidsgrep::read_file(dict_path);
        std::vector<eidsgrep::ParseDiagnostic> diags;
        auto idx = eidsgrep::build_index(bytes, &diags);
        report(diag, user, diags);
        idx.write(index_path);
        if (records)
            *records = static_cast<uint32_t>(idx.records.size());
    });
}

eg_status eg_ingest_tsv(const char* tsv_path, eg_text_fn out, eg_diag_fn diag, void* user) {
    if (!tsv_path || !out)
        return fail(EG_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const auto bytes = eidsgrep::read_file(tsv_path);
        std::vector<eidsgrep::ParseDiagnostic> diags;
        eidsgrep::ingest_tsv(
            bytes, [&](std::string_view line) { out(user, line.data(), line.size()); }, &diags);
        report(diag, user, diags);
    });
}

eg_status eg_cook(const char* text, size_t len, eg_text_fn out, eg_diag_fn diag, void* user) {
    if ((!text && len) || !out)
        return fail(EG_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        auto r = eidsgrep::parse_stream(std::string_view(text ? text : "", len));
        for (const auto& p : r.trees) {
            auto s = eidsgrep::write_cooked(p.tree);
            out(user, s.data(), s.size());
        }
        report(diag, user, r.diagnostics);
    });
}

eg_status eg_bench_generate(const char* dict_path, const char* seeds_path, const char* pivot,
                            eg_text_fn out, void* user) {
    if (!dict_path || !seeds_path || !out)
        return fail(EG_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        eidsgrep::BenchOptions opt;
        if (pivot && *pivot)
            opt.pivot = pivot;
        const auto dict = eidsgrep::read_file(dict_path);
        const auto seeds = eidsgrep::read_file(seeds_path);
        for (const auto& q : eidsgrep::bench_generate(dict, seeds, opt)) {
            auto line = q.text + "\n";
            out(user, line.data(), line.size());
        }
    });
}

} // extern "C"
