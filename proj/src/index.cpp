#include "eidsgrep/index.hpp"

#include <chrono>
#include <cstring>
#include <ctime>
#include <exception>
#include <fstream>
#include <iterator>
#include <thread>

#include "eidsgrep/error.hpp"
#include "eidsgrep/match.hpp"

namespace eidsgrep {

namespace {

template <typename T>
void put_le(std::string& out, T value) {
    for (std::size_t i = 0; i < sizeof(T); ++i)
        out += static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xFF);
}

template <typename T>
T get_le(std::string_view in, std::size_t pos) {
    std::uint64_t v = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i)
        v |= static_cast<std::uint64_t>(static_cast<unsigned char>(in[pos + i])) << (8 * i);
    return static_cast<T>(v);
}

MatchContext make_context(const CompiledQuery& q, MemoMode mode) {
    bool memo = mode == MemoMode::on || (mode == MemoMode::automatic && q.memoize);
    return MatchContext(memo);
}

class Worker {
public:
    Worker(const CompiledQuery& q, const ScanOptions& opt) : q_(q), opt_(opt), ctx_(make_context(q, opt.memo)) {}

    bool passes_filters(const Vec128& v) {
        ++stats.entries;
        if (opt_.use_lambda && !lambda_check(q_.lambda, v))
            return false;
        ++stats.lambda_passes;
        if (opt_.use_bdd && !q_.bdd.evaluate(v))
            return false;
        ++stats.bdd_passes;
        return true;
    }

    bool matches(const Tree& t) {
        if (ctx_.memoizing())
            ctx_.clear_memo();
        bool r = match(q_.needle, t, ctx_);
        stats.tree_matches += r;
        return r;
    }

    ScanStats stats;

private:
    const CompiledQuery& q_;
    const ScanOptions& opt_;
    MatchContext ctx_;
};

Tree parse_entry(std::string_view text) {
    auto r = parse_stream(text);
    if (r.trees.size() != 1 || !r.diagnostics.empty())
        throw IoError("index record does not delimit a single tree; rebuild the index");
    return std::move(r.trees.front().tree);
}

void accumulate(ScanStats& into, const ScanStats& from) {
    into.entries += from.entries;
    into.lambda_passes += from.lambda_passes;
    into.bdd_passes += from.bdd_passes;
    into.tree_matches += from.tree_matches;
}

// Runs `body(worker, begin, end, hits)` over [0, n) split into contiguous
// chunks, then replays hits in order.
template <typename Body, typename Emit>
ScanStats run_partitioned(const CompiledQuery& q, const ScanOptions& opt, std::size_t n,
                          Body body, Emit emit) {
    ScanStats total;
    const unsigned threads = std::max(1u, std::min<unsigned>(opt.threads, static_cast<unsigned>(n ? n : 1)));
    if (threads == 1) {
        Worker w(q, opt);
        body(w, 0, n, nullptr);
        accumulate(total, w.stats);
        return total;
    }
    std::vector<std::vector<std::size_t>> hits(threads);
    std::vector<ScanStats> stats(threads);
    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) {
        const std::size_t begin = n * t / threads, end = n * (t + 1) / threads;
        pool.emplace_back([&, t, begin, end] {
            try {
                Worker w(q, opt);
                body(w, begin, end, &hits[t]);
                stats[t] = w.stats;
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& th : pool)
        th.join();
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
    for (unsigned t = 0; t < threads; ++t) {
        accumulate(total, stats[t]);
        for (auto i : hits[t])
            emit(i);
    }
    return total;
}

} // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 14695981039346656037ull;
    for (unsigned char c : bytes)
        h = (h ^ c) * 1099511628211ull;
    return h;
}

std::string IndexFile::serialize() const {
    std::string out;
    out.reserve(header_size + records.size() * record_size);
    out.append(magic, sizeof magic);
    put_le<std::uint16_t>(out, format_version);
    put_le<std::uint64_t>(out, checksum);
    put_le<std::uint64_t>(out, dictionary_size);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(records.size()));
    for (const auto& r : records) {
        for (auto w : r.vector.w)
            put_le<std::uint32_t>(out, w);
        put_le<std::uint64_t>(out, r.offset);
        put_le<std::uint32_t>(out, r.length);
    }
    return out;
}

IndexFile IndexFile::deserialize(std::string_view in) {
    if (in.size() < header_size || std::memcmp(in.data(), magic, sizeof magic) != 0)
        throw ParseError("not an index file", 0);
    if (get_le<std::uint16_t>(in, 4) != format_version)
        throw ParseError("unsupported index format version", 4);
    IndexFile f;
    f.checksum = get_le<std::uint64_t>(in, 6);
    f.dictionary_size = get_le<std::uint64_t>(in, 14);
    const auto count = get_le<std::uint32_t>(in, 22);
    if (in.size() != header_size + std::size_t{count} * record_size)
        throw ParseError("index record count does not match file length", 22);
    f.records.resize(count);
    std::size_t pos = header_size;
    for (auto& r : f.records) {
        for (auto& w : r.vector.w) {
            w = get_le<std::uint32_t>(in, pos);
            pos += 4;
        }
        r.offset = get_le<std::uint64_t>(in, pos);
        r.length = get_le<std::uint32_t>(in, pos + 8);
        pos += 12;
        if (r.offset + r.length > f.dictionary_size)
            throw ParseError("index record points past the dictionary", pos - record_size);
    }
    return f;
}

void IndexFile::write(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot write index " + path.string());
    const auto bytes = serialize();
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw IoError("error writing index " + path.string());
}

IndexFile IndexFile::read(const std::filesystem::path& path) {
    return deserialize(read_file(path));
}

bool IndexFile::fresh_for(std::string_view dictionary) const {
    return dictionary_size == dictionary.size() && checksum == fnv1a64(dictionary);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path.string());
    std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad())
        throw IoError("error reading " + path.string());
    return s;
}

IndexFile build_index(std::string_view dictionary, std::vector<ParseDiagnostic>* diagnostics) {
    IndexFile f;
    f.checksum = fnv1a64(dictionary);
    f.dictionary_size = dictionary.size();
    auto parsed = parse_stream(dictionary);
    f.records.reserve(parsed.trees.size());
    for (const auto& p : parsed.trees)
        f.records.push_back({vec(p.tree), p.offset, static_cast<std::uint32_t>(p.length)});
    if (diagnostics)
        *diagnostics = std::move(parsed.diagnostics);
    return f;
}

Dictionary Dictionary::open(const std::filesystem::path& dictionary,
                            const std::optional<std::filesystem::path>& index) {
    std::optional<IndexFile> idx;
    if (index) {
        if (!std::filesystem::exists(*index))
            throw IoError("no index at " + index->string() + "; build one or disable indexing");
        try {
            idx = IndexFile::read(*index);
        } catch (const ParseError& e) {
            throw IoError(index->string() + ": " + e.what());
        }
    }
    return from_memory(read_file(dictionary), std::move(idx));
}

Dictionary Dictionary::from_memory(std::string bytes, std::optional<IndexFile> index) {
    if (index && !index->fresh_for(bytes))
        throw StaleIndexError("index is stale for this dictionary; rebuild it");
    Dictionary d;
    d.bytes_ = std::move(bytes);
    d.index_ = std::move(index);
    return d;
}

ScanStats scan(const CompiledQuery& query, const Dictionary& dict, const ScanOptions& options,
               const HitCallback& on_hit) {
    const auto wall_start = std::chrono::steady_clock::now();
    const std::clock_t cpu_start = std::clock();
    ScanStats stats;
    const std::string_view bytes = dict.bytes();

    if (const IndexFile* idx = dict.index()) {
        const auto& recs = idx->records;
        auto text_of = [&](std::size_t i) { return bytes.substr(recs[i].offset, recs[i].length); };
        stats = run_partitioned(
            query, options, recs.size(),
            [&](Worker& w, std::size_t begin, std::size_t end, std::vector<std::size_t>* hits) {
                for (std::size_t i = begin; i < end; ++i) {
                    if (!w.passes_filters(recs[i].vector))
                        continue;
                    const auto text = text_of(i);
                    Tree t = parse_entry(text);
                    if (!w.matches(t))
                        continue;
                    if (hits)
                        hits->push_back(i);
                    else
                        on_hit(ScanHit{text, t});
                }
            },
            [&](std::size_t i) {
                const auto text = text_of(i);
                Tree t = parse_entry(text);
                on_hit(ScanHit{text, t});
            });
    } else {
        const auto parsed = parse_stream(bytes);
        const auto& trees = parsed.trees;
        stats = run_partitioned(
            query, options, trees.size(),
            [&](Worker& w, std::size_t begin, std::size_t end, std::vector<std::size_t>* hits) {
                for (std::size_t i = begin; i < end; ++i) {
                    if (!w.passes_filters(vec(trees[i].tree)) || !w.matches(trees[i].tree))
                        continue;
                    if (hits)
                        hits->push_back(i);
                    else
                        on_hit(ScanHit{bytes.substr(trees[i].offset, trees[i].length), trees[i].tree});
                }
            },
            [&](std::size_t i) {
                on_hit(ScanHit{bytes.substr(trees[i].offset, trees[i].length), trees[i].tree});
            });
    }

    stats.cpu_seconds = static_cast<double>(std::clock() - cpu_start) / CLOCKS_PER_SEC;
    stats.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall_start).count();
    return stats;
}

void ingest_tsv(std::string_view tsv, const std::function<void(std::string_view)>& emit,
                std::vector<ParseDiagnostic>* diagnostics) {
    auto report = [&](std::size_t offset, std::string msg) {
        if (diagnostics)
            diagnostics->push_back({offset, std::move(msg), Severity::recoverable});
    };
    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos < tsv.size()) {
        auto nl = tsv.find('\n', pos);
        const std::size_t end = nl == std::string_view::npos ? tsv.size() : nl;
        std::string_view line = tsv.substr(pos, end - pos);
        const std::size_t row_offset = pos;
        pos = end + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.remove_suffix(1);
        if (line.empty() || line.front() == '#')
            continue;

        const auto where = "line " + std::to_string(line_no) + ": ";
        auto tab = line.find('\t');
        if (tab == std::string_view::npos || tab == 0) {
            report(row_offset, where + "expected `character<TAB>ids`");
            continue;
        }
        const auto head = line.substr(0, tab);
        auto ids = line.substr(tab + 1);
        if (auto t2 = ids.find('\t'); t2 != std::string_view::npos)
            ids = ids.substr(0, t2);

        auto parsed = parse_stream(ids);
        if (!parsed.diagnostics.empty()) {
            const auto& d = parsed.diagnostics.front();
            report(row_offset + tab + 1 + d.offset, where + d.message);
            continue;
        }
        if (parsed.trees.size() != 1) {
            report(row_offset + tab + 1, where + (parsed.trees.empty() ? "empty ids field" : "more than one tree in ids field"));
            continue;
        }
        emit(write_cooked(parsed.trees.front().tree.with_head(intern(head))));
    }
}

} // namespace eidsgrep
