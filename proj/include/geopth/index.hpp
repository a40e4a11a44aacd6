#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "geopth/binary_code.hpp"
#include "geopth/codebook.hpp"
#include "geopth/geometry.hpp"
#include "geopth/metrics.hpp"

namespace geopth {

struct IndexEntry {
    std::string id;
    std::uint32_t category_index;  // into HashIndex::categories()
    BinaryCode code;
};

/// Immutable store of hashed database codes. Entry order is ingestion order;
/// ranking ties are broken by it. The codebook fingerprint binds the index to
/// the exact codebook set that produced the codes.
class HashIndex {
public:
    HashIndex(std::vector<std::string> categories, std::vector<IndexEntry> entries,
              std::uint32_t code_length, std::uint64_t codebook_fingerprint);

    std::size_t size() const { return entries_.size(); }
    std::uint32_t code_length() const { return code_length_; }
    std::uint64_t codebook_fingerprint() const { return codebook_fingerprint_; }

    const std::vector<IndexEntry>& entries() const { return entries_; }
    const IndexEntry& entry(std::size_t i) const { return entries_[i]; }
    const std::vector<std::string>& categories() const { return categories_; }
    const std::string& category_of(std::size_t i) const {
        return categories_[entries_[i].category_index];
    }

private:
    std::vector<std::string> categories_;
    std::vector<IndexEntry> entries_;
    std::uint32_t code_length_;
    std::uint64_t codebook_fingerprint_;
};

struct RankedEntry {
    std::size_t index;  // position of the entry in its source container
    double distance;
};

/// Ranking of database entries for one query: non-decreasing distance, ties
/// by ingestion position.
struct RankedResult {
    std::string query_id;
    std::size_t requested = 0;  // n as asked; entries holds min(n, N) items
    std::vector<RankedEntry> entries;
};

/// Hashes every database trajectory into an index. Content is deterministic
/// for a fixed codebook set regardless of the worker count.
HashIndex build_index(const Dataset& db, const CodebookSet& cbs, unsigned workers = 1);

/// Top-n entries by Hamming distance, ascending, ties by ingestion position.
/// Throws InputError if the query code length differs from the index.
RankedResult query_topn(const HashIndex& idx, const BinaryCode& query_code, std::size_t n,
                        std::string query_id = {});

/// Complete ranking of all entries (query_topn with n = N).
RankedResult full_ranking(const HashIndex& idx, const BinaryCode& query_code,
                          std::string query_id = {});

/// Baseline: ranks the whole database by a traditional metric against the raw
/// query trajectory. Same tie-break rule as the Hamming rankings.
RankedResult brute_force_ranking(const Dataset& db, const Trajectory& query, Metric metric,
                                 unsigned workers = 1);

/// Throws ConfigError when the index was not built from this codebook set.
void validate_fingerprint(const HashIndex& idx, const CodebookSet& cbs);

std::vector<std::uint8_t> serialize_index(const HashIndex& idx);
HashIndex deserialize_index(const std::vector<std::uint8_t>& bytes);

void save_index(const HashIndex& idx, const std::string& path);
HashIndex load_index(const std::string& path);

}  // namespace geopth
