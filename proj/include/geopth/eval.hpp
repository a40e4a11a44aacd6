#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "geopth/codebook.hpp"
#include "geopth/geometry.hpp"
#include "geopth/index.hpp"
#include "geopth/metrics.hpp"

namespace geopth {

enum class PartitionMode { kSmall, kLarge };

/// Query/database split. Small mode carves out a query fraction of the whole
/// dataset; large mode samples fixed query and database counts disjointly and
/// reserves (but never uses) a training pool.
struct PartitionSpec {
    PartitionMode mode = PartitionMode::kSmall;
    double query_fraction = 0.25;         // small mode
    std::size_t query_count = 1000;       // large mode
    std::size_t database_count = 10000;   // large mode
    std::size_t training_reserve = 3000;  // large mode; recorded only
    std::uint64_t seed = 0;
};

struct Partition {
    Dataset queries;
    Dataset database;
    std::size_t training_reserved = 0;
};

/// Disjoint split with exact sizes, deterministic under the seed. Both sides
/// keep the original dataset order. Throws ConfigError when the dataset is
/// too small for the requested mode.
Partition partition(const Dataset& ds, const PartitionSpec& spec);

struct ApOutcome {
    double ap = 0.0;
    bool skipped = false;  // no relevant item exists for the query
};

/// Average precision of a ranking, where relevance is keyed by ranking entry
/// index. The ranking must cover the full database. Queries without any
/// relevant item are flagged skipped, not failed.
ApOutcome average_precision(const RankedResult& ranking, const std::vector<bool>& relevance);

struct MapSummary {
    double map = 0.0;
    std::size_t included = 0;
    std::size_t skipped = 0;
};

/// Arithmetic mean of the non-skipped APs. The summation order is fixed by
/// sorting, so the value is invariant to query processing order. Throws
/// EvalError when every query was skipped.
MapSummary mean_average_precision(const std::vector<ApOutcome>& outcomes);

/// Wall-clock phase breakdown, seconds. total_s covers the whole repetition,
/// so it exceeds the sum of the named phases by partition/scoring overhead.
struct PhaseTiming {
    double codebook_build_s = 0.0;
    double hashing_s = 0.0;
    double query_s = 0.0;
    double total_s = 0.0;
};

struct ExperimentConfig {
    std::uint64_t seed = 0;
    std::size_t repetitions = 10;
    CodebookParams geopth;            // .seed is replaced by a per-repetition sub-seed
    PartitionSpec partition;          // .seed is replaced by a per-repetition sub-seed
    unsigned workers = 1;
    std::vector<Metric> baseline_metrics;  // brute-force comparison columns
    bool record_per_query = false;
    bool record_quantization_error = false;
};

struct RepetitionResult {
    std::uint64_t seed = 0;  // per-repetition master sub-seed
    double map = 0.0;
    std::size_t included_queries = 0;
    std::size_t skipped_queries = 0;
    PhaseTiming timing;
    std::vector<double> per_query_aps;             // filled when record_per_query
    std::map<std::string, double> baseline_maps;   // metric name -> mAP
    std::map<std::string, double> baseline_seconds;
    double mean_quantization_error = 0.0;          // filled when requested
};

struct Aggregate {
    double mean = 0.0;
    double two_se = 0.0;  // 2 * standard error across repetitions
};

struct EvalReport {
    ExperimentConfig config;
    std::size_t query_count = 0;
    std::size_t database_count = 0;
    std::size_t training_reserved = 0;
    std::vector<RepetitionResult> repetitions;
    Aggregate map;
    std::map<std::string, Aggregate> baseline_map;
    PhaseTiming mean_timing;
};

/// Full protocol: per repetition draw a fresh sub-seed, partition, build
/// codebooks on the database side, hash database and queries, rank, score
/// mAP over the full ranking, optionally score brute-force baselines on the
/// same partition. Aggregates mean and 2*SE across repetitions.
EvalReport run_experiment(const Dataset& ds, const ExperimentConfig& cfg);

/// Grid axes for the parameter sweep. Codebook count per cell is chosen as
/// round(target_code_length / omega), clamped to at least 1, so the code
/// length stays as close as possible to the target across the psi axis.
struct SweepGrid {
    std::vector<std::uint32_t> omegas = {1, 2, 3, 4, 5, 6};  // psi = 2^omega
    std::vector<std::uint32_t> prototype_sizes = {1, 5, 10, 15, 20};
    std::uint32_t target_code_length = 64;
};

struct SweepCell {
    std::size_t psi = 0;
    std::uint32_t prototype_size = 0;
    EvalReport report;
};

/// One run_experiment per grid cell, same master seed everywhere. Cell order
/// is omega-major then k, matching the CSV row order.
std::vector<SweepCell> parameter_sweep(const Dataset& ds, const ExperimentConfig& base,
                                       const SweepGrid& grid);

/// Plot-ready matrix: header psi,k,map,se,seconds.
std::string sweep_to_csv(const std::vector<SweepCell>& cells);

/// Reruns the identical experiment once per metric (same master seed, so
/// partitions and prototype draws pair up exactly); only the quantization
/// metric differs.
std::map<std::string, EvalReport> ablation_metrics(const Dataset& ds, const ExperimentConfig& base,
                                                   const std::vector<Metric>& metrics);

/// JSON text of a report. Every wall-clock value lives under a key named
/// "timing", so stripping those subtrees yields a byte-stable payload for a
/// fixed seed.
std::string report_to_json(const EvalReport& report, int indent = 2);

struct HammingBenchmark {
    std::size_t code_count = 0;
    std::uint32_t code_length = 0;
    std::size_t comparisons = 0;
    double seconds = 0.0;
    double comparisons_per_second = 0.0;
    std::uint64_t checksum = 0;  // defeats dead-code elimination of the scan
};

/// Single-threaded scan benchmark: repeated full-database Hamming scans over
/// random codes.
HammingBenchmark benchmark_hamming_throughput(std::uint32_t code_length, std::size_t code_count,
                                              std::size_t scans, std::uint64_t seed);

}  // namespace geopth
