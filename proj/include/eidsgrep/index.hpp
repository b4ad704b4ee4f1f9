#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eidsgrep/bitvec.hpp"
#include "eidsgrep/filter.hpp"
#include "eidsgrep/syntax.hpp"

namespace eidsgrep {

// One dictionary entry: its signature and the byte span of its source text.
struct IndexRecord {
    Vec128 vector;
    std::uint64_t offset = 0;
    std::uint32_t length = 0;

    friend bool operator==(const IndexRecord&, const IndexRecord&) = default;
};

// On-disk layout, all integers little-endian:
//   "EIX1" | u16 version | u64 dictionary FNV-1a | u64 dictionary size | u32 count
//   count x (4 x u32 vector words | u64 offset | u32 length)
struct IndexFile {
    static constexpr char magic[4] = {'E', 'I', 'X', '1'};
    static constexpr std::uint16_t format_version = 1;
    static constexpr std::size_t header_size = 26;
    static constexpr std::size_t record_size = 28;

    std::uint64_t checksum = 0;
    std::uint64_t dictionary_size = 0;
    std::vector<IndexRecord> records;

    std::string serialize() const;
    // Throws ParseError on a malformed image.
    static IndexFile deserialize(std::string_view bytes);

    void write(const std::filesystem::path& path) const;
    static IndexFile read(const std::filesystem::path& path);

    bool fresh_for(std::string_view dictionary) const;
};

std::uint64_t fnv1a64(std::string_view bytes);

// Throws IoError.
std::string read_file(const std::filesystem::path& path);

// One record per parsed tree, in file order. Diagnostics cover skipped spans.
IndexFile build_index(std::string_view dictionary, std::vector<ParseDiagnostic>* diagnostics = nullptr);

// Dictionary bytes plus, when indexed, a checked index.
class Dictionary {
public:
    // Throws IoError, or StaleIndexError when the index does not belong to
    // the dictionary's current contents.
    static Dictionary open(const std::filesystem::path& dictionary,
                           const std::optional<std::filesystem::path>& index);
    static Dictionary from_memory(std::string bytes, std::optional<IndexFile> index = std::nullopt);

    std::string_view bytes() const { return bytes_; }
    bool indexed() const { return index_.has_value(); }
    const IndexFile* index() const { return index_ ? &*index_ : nullptr; }

private:
    std::string bytes_;
    std::optional<IndexFile> index_;
};

enum class MemoMode { automatic, on, off };

struct ScanOptions {
    bool use_lambda = true;
    bool use_bdd = true;
    MemoMode memo = MemoMode::automatic;
    unsigned threads = 1;
};

// Pass counts for a disabled layer equal the number of entries reaching it.
struct ScanStats {
    std::uint64_t entries = 0;
    std::uint64_t lambda_passes = 0;
    std::uint64_t bdd_passes = 0;
    std::uint64_t tree_matches = 0;
    double cpu_seconds = 0;
    double wall_seconds = 0;
};

struct ScanHit {
    std::string_view text;  // original entry bytes
    const Tree& tree;
};

using HitCallback = std::function<void(const ScanHit&)>;

// Filters each entry through the enabled layers and runs the full match on
// survivors. Hits are delivered in dictionary order.
ScanStats scan(const CompiledQuery& query, const Dictionary& dictionary, const ScanOptions& options,
               const HitCallback& on_hit);

// Rows of `character TAB ids`. Each parsed IDS gets the character as its root
// head and is emitted in cooked form. Bad rows produce a diagnostic whose
// offset is the row's byte offset.
void ingest_tsv(std::string_view tsv, const std::function<void(std::string_view)>& emit,
                std::vector<ParseDiagnostic>* diagnostics = nullptr);

} // namespace eidsgrep
