#include "geopth/index.hpp"

#include <algorithm>
#include <cstring>
#include <unordered_map>

#include "geopth/encoder.hpp"
#include "geopth/errors.hpp"
#include "geopth/parallel.hpp"
#include "geopth/serial.hpp"

namespace geopth {

namespace {

constexpr char kMagic[4] = {'G', 'P', 'I', 'X'};
constexpr std::uint32_t kFormatVersion = 1;

bool ranked_before(const RankedEntry& a, const RankedEntry& b) {
    if (a.distance != b.distance) {
        return a.distance < b.distance;
    }
    return a.index < b.index;
}

RankedResult rank_all(std::vector<RankedEntry> entries, std::size_t n, std::string query_id) {
    const std::size_t keep = std::min(n, entries.size());
    if (keep < entries.size()) {
        std::partial_sort(entries.begin(), entries.begin() + keep, entries.end(), ranked_before);
        entries.resize(keep);
    } else {
        std::sort(entries.begin(), entries.end(), ranked_before);
    }
    RankedResult result;
    result.query_id = std::move(query_id);
    result.requested = n;
    result.entries = std::move(entries);
    return result;
}

}  // namespace

HashIndex::HashIndex(std::vector<std::string> categories, std::vector<IndexEntry> entries,
                     std::uint32_t code_length, std::uint64_t codebook_fingerprint)
    : categories_(std::move(categories)),
      entries_(std::move(entries)),
      code_length_(code_length),
      codebook_fingerprint_(codebook_fingerprint) {
    for (const auto& e : entries_) {
        if (e.code.length() != code_length_) {
            throw InputError("index entry '" + e.id + "' has code length " +
                             std::to_string(e.code.length()) + ", expected " +
                             std::to_string(code_length_));
        }
        if (e.category_index >= categories_.size()) {
            throw InputError("index entry '" + e.id + "' references unknown category slot " +
                             std::to_string(e.category_index));
        }
    }
}

HashIndex build_index(const Dataset& db, const CodebookSet& cbs, unsigned workers) {
    const std::vector<BinaryCode> codes = hash_dataset(db, cbs, workers);

    // Intern categories in order of first appearance; deterministic.
    std::vector<std::string> categories;
    std::unordered_map<std::string, std::uint32_t> category_slot;
    std::vector<IndexEntry> entries;
    entries.reserve(db.size());
    for (std::size_t i = 0; i < db.size(); ++i) {
        const std::string& label = db[i].category();
        auto it = category_slot.find(label);
        if (it == category_slot.end()) {
            it = category_slot.emplace(label, static_cast<std::uint32_t>(categories.size())).first;
            categories.push_back(label);
        }
        entries.push_back(IndexEntry{db[i].id(), it->second, codes[i]});
    }
    return HashIndex(std::move(categories), std::move(entries), cbs.code_length(),
                     cbs.fingerprint());
}

RankedResult query_topn(const HashIndex& idx, const BinaryCode& query_code, std::size_t n,
                        std::string query_id) {
    if (query_code.length() != idx.code_length()) {
        throw InputError("query code length " + std::to_string(query_code.length()) +
                         " does not match index code length " + std::to_string(idx.code_length()));
    }
    std::vector<RankedEntry> distances;
    distances.reserve(idx.size());
    for (std::size_t i = 0; i < idx.size(); ++i) {
        distances.push_back(
            RankedEntry{i, static_cast<double>(hamming_distance(query_code, idx.entry(i).code))});
    }
    return rank_all(std::move(distances), n, std::move(query_id));
}

RankedResult full_ranking(const HashIndex& idx, const BinaryCode& query_code,
                          std::string query_id) {
    return query_topn(idx, query_code, idx.size(), std::move(query_id));
}

RankedResult brute_force_ranking(const Dataset& db, const Trajectory& query, Metric metric,
                                 unsigned workers) {
    if (query.dim() != db.dim()) {
        throw InputError("query '" + query.id() + "' has dimension " + std::to_string(query.dim()) +
                         " but the database has dimension " + std::to_string(db.dim()));
    }
    std::vector<RankedEntry> distances(db.size());
    parallel_for(db.size(), workers, [&](std::size_t i) {
        distances[i] = RankedEntry{i, point_set_distance(query.points(), db[i].points(), metric)};
    });
    return rank_all(std::move(distances), db.size(), query.id());
}

void validate_fingerprint(const HashIndex& idx, const CodebookSet& cbs) {
    if (idx.codebook_fingerprint() != cbs.fingerprint()) {
        throw ConfigError("index was built from a different codebook set (index fingerprint " +
                          std::to_string(idx.codebook_fingerprint()) + ", codebook fingerprint " +
                          std::to_string(cbs.fingerprint()) + ")");
    }
}

std::vector<std::uint8_t> serialize_index(const HashIndex& idx) {
    ByteWriter w;
    w.raw(kMagic, sizeof(kMagic));
    w.u32(kFormatVersion);
    w.u32(idx.code_length());
    w.u64(idx.codebook_fingerprint());
    w.u64(idx.size());

    const auto& categories = idx.categories();
    w.u32(static_cast<std::uint32_t>(categories.size()));
    for (const auto& c : categories) {
        w.str(c);
    }

    // Fixed-width records: ids are NUL-padded to the longest id.
    std::size_t id_width = 0;
    for (const auto& e : idx.entries()) {
        id_width = std::max(id_width, e.id.size());
    }
    w.u32(static_cast<std::uint32_t>(id_width));
    const std::size_t words = (idx.code_length() + 63) / 64;
    for (const auto& e : idx.entries()) {
        std::string padded = e.id;
        padded.resize(id_width, '\0');
        w.raw(padded.data(), id_width);
        w.u32(e.category_index);
        for (std::size_t i = 0; i < words; ++i) {
            w.u64(e.code.words()[i]);
        }
    }
    return w.take();
}

HashIndex deserialize_index(const std::vector<std::uint8_t>& bytes) {
    ByteReader r(bytes.data(), bytes.size(), "index file");
    char magic[4];
    r.raw(magic, sizeof(magic));
    if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw PersistenceError("index file: bad magic bytes");
    }
    const std::uint32_t version = r.u32();
    if (version != kFormatVersion) {
        throw PersistenceError("index file: format version " + std::to_string(version) +
                               " not supported (expected " + std::to_string(kFormatVersion) + ")");
    }
    const std::uint32_t code_length = r.u32();
    if (code_length == 0) {
        throw PersistenceError("index file: zero code length");
    }
    const std::uint64_t fingerprint = r.u64();
    const std::uint64_t n = r.u64();

    const std::uint32_t category_count = r.u32();
    std::vector<std::string> categories;
    categories.reserve(category_count);
    for (std::uint32_t i = 0; i < category_count; ++i) {
        categories.push_back(r.str());
    }

    const std::uint32_t id_width = r.u32();
    const std::size_t words = (code_length + 63) / 64;
    std::vector<IndexEntry> entries;
    entries.reserve(n);
    std::vector<char> id_buf(id_width);
    for (std::uint64_t i = 0; i < n; ++i) {
        r.raw(id_buf.data(), id_width);
        std::size_t len = id_width;
        while (len > 0 && id_buf[len - 1] == '\0') {
            --len;
        }
        std::string id(id_buf.data(), len);
        const std::uint32_t category_index = r.u32();
        BinaryCode code(code_length);
        for (std::size_t wi = 0; wi < words; ++wi) {
            const std::uint64_t word = r.u64();
            for (std::uint32_t b = 0; b < 64; ++b) {
                const std::uint32_t q = static_cast<std::uint32_t>(wi) * 64 + b;
                if (q < code_length && ((word >> (63 - b)) & 1ULL)) {
                    code.set_bit(q);
                }
            }
        }
        entries.push_back(IndexEntry{std::move(id), category_index, std::move(code)});
    }
    r.expect_end();
    return HashIndex(std::move(categories), std::move(entries), code_length, fingerprint);
}

void save_index(const HashIndex& idx, const std::string& path) {
    write_file_bytes(path, serialize_index(idx));
}

HashIndex load_index(const std::string& path) {
    return deserialize_index(read_file_bytes(path));
}

}  // namespace geopth
