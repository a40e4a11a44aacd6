#include "geopth/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <unordered_map>

#include <json.hpp>

#include "geopth/encoder.hpp"
#include "geopth/errors.hpp"
#include "geopth/parallel.hpp"
#include "geopth/rng.hpp"

namespace geopth {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

Aggregate aggregate_of(const std::vector<double>& xs) {
    Aggregate a;
    if (xs.empty()) {
        return a;
    }
    a.mean = std::accumulate(xs.begin(), xs.end(), 0.0) / double(xs.size());
    if (xs.size() > 1) {
        double ss = 0.0;
        for (const double x : xs) {
            ss += (x - a.mean) * (x - a.mean);
        }
        const double variance = ss / double(xs.size() - 1);
        a.two_se = 2.0 * std::sqrt(variance / double(xs.size()));
    }
    return a;
}

std::string format_double(double v, int precision) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", precision, v);
    return buf;
}

}  // namespace

Partition partition(const Dataset& ds, const PartitionSpec& spec) {
    const std::size_t n = ds.size();
    std::size_t query_n = 0;
    std::size_t db_n = 0;
    std::size_t train_n = 0;
    if (spec.mode == PartitionMode::kSmall) {
        if (n < 2) {
            throw ConfigError("small-mode partition needs at least 2 trajectories, got " +
                              std::to_string(n));
        }
        if (spec.query_fraction <= 0.0 || spec.query_fraction >= 1.0) {
            throw ConfigError("query fraction must lie in (0, 1), got " +
                              std::to_string(spec.query_fraction));
        }
        query_n = static_cast<std::size_t>(std::llround(spec.query_fraction * double(n)));
        query_n = std::clamp<std::size_t>(query_n, 1, n - 1);
        db_n = n - query_n;
    } else {
        if (spec.query_count == 0 || spec.database_count == 0) {
            throw ConfigError("large-mode partition needs positive query and database counts");
        }
        if (n < spec.query_count + spec.database_count) {
            throw ConfigError("large-mode partition needs " +
                              std::to_string(spec.query_count + spec.database_count) +
                              " trajectories (" + std::to_string(spec.query_count) + " queries + " +
                              std::to_string(spec.database_count) + " database), dataset has " +
                              std::to_string(n));
        }
        query_n = spec.query_count;
        db_n = spec.database_count;
        train_n = std::min(spec.training_reserve, n - query_n - db_n);
    }

    // Partial Fisher-Yates draw of query_n + db_n + train_n distinct positions.
    Rng rng = make_rng(spec.seed);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t(0));
    const std::size_t draws = query_n + db_n + train_n;
    for (std::size_t i = 0; i < draws; ++i) {
        const std::size_t j = i + uniform_index(rng, n - i);
        std::swap(order[i], order[j]);
    }

    // Both sides keep the original dataset order, so downstream tie-breaking
    // by ingestion position is stable across seeds.
    std::vector<std::size_t> query_idx(order.begin(), order.begin() + query_n);
    std::vector<std::size_t> db_idx(order.begin() + query_n, order.begin() + query_n + db_n);
    std::sort(query_idx.begin(), query_idx.end());
    std::sort(db_idx.begin(), db_idx.end());

    std::vector<Trajectory> queries;
    queries.reserve(query_n);
    for (const std::size_t i : query_idx) {
        queries.push_back(ds[i]);
    }
    std::vector<Trajectory> database;
    database.reserve(db_n);
    for (const std::size_t i : db_idx) {
        database.push_back(ds[i]);
    }
    Partition part{Dataset(std::move(queries)), Dataset(std::move(database)), train_n};
    return part;
}

ApOutcome average_precision(const RankedResult& ranking, const std::vector<bool>& relevance) {
    std::size_t relevant_total = 0;
    for (const auto& e : ranking.entries) {
        if (e.index >= relevance.size()) {
            throw InputError("ranking entry index " + std::to_string(e.index) +
                             " outside the relevance universe of size " +
                             std::to_string(relevance.size()));
        }
        if (relevance[e.index]) {
            ++relevant_total;
        }
    }
    if (relevant_total == 0) {
        return ApOutcome{0.0, true};
    }
    double sum = 0.0;
    std::size_t hits = 0;
    for (std::size_t n = 0; n < ranking.entries.size(); ++n) {
        if (relevance[ranking.entries[n].index]) {
            ++hits;
            sum += double(hits) / double(n + 1);  // precision at cut-off n+1
        }
    }
    return ApOutcome{sum / double(relevant_total), false};
}

MapSummary mean_average_precision(const std::vector<ApOutcome>& outcomes) {
    std::vector<double> included;
    included.reserve(outcomes.size());
    std::size_t skipped = 0;
    for (const auto& o : outcomes) {
        if (o.skipped) {
            ++skipped;
        } else {
            included.push_back(o.ap);
        }
    }
    if (included.empty()) {
        throw EvalError("every query was skipped (no relevant items anywhere)");
    }
    // Sorted summation makes the mean independent of query processing order.
    std::sort(included.begin(), included.end());
    const double sum = std::accumulate(included.begin(), included.end(), 0.0);
    return MapSummary{sum / double(included.size()), included.size(), skipped};
}

namespace {

// Relevance of every database entry for a query category, by entry position.
std::vector<bool> relevance_for(const HashIndex& idx, const std::string& category) {
    std::vector<bool> rel(idx.size(), false);
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (idx.category_of(i) == category) {
            rel[i] = true;
        }
    }
    return rel;
}

struct PartitionSizes {
    std::size_t queries = 0;
    std::size_t database = 0;
    std::size_t training_reserved = 0;
};

RepetitionResult run_repetition(const Dataset& ds, const ExperimentConfig& cfg,
                                std::size_t rep_index, PartitionSizes* sizes_out) {
    RepetitionResult rep;
    rep.seed = derive_seed(cfg.seed, rep_index);
    const auto rep_start = Clock::now();

    PartitionSpec pspec = cfg.partition;
    pspec.seed = derive_seed(rep.seed, 0);
    Partition part = partition(ds, pspec);
    if (sizes_out != nullptr) {
        *sizes_out = PartitionSizes{part.queries.size(), part.database.size(),
                                    part.training_reserved};
    }

    CodebookParams params = cfg.geopth;
    params.seed = derive_seed(rep.seed, 1);
    auto t = Clock::now();
    const CodebookSet cbs = build_codebook_set(part.database, params);
    rep.timing.codebook_build_s = seconds_since(t);

    t = Clock::now();
    const HashIndex index = build_index(part.database, cbs, cfg.workers);
    const std::vector<BinaryCode> query_codes = hash_dataset(part.queries, cbs, cfg.workers);
    rep.timing.hashing_s = seconds_since(t);

    t = Clock::now();
    std::vector<ApOutcome> outcomes(part.queries.size());
    parallel_for(part.queries.size(), cfg.workers, [&](std::size_t q) {
        const RankedResult ranking = full_ranking(index, query_codes[q], part.queries[q].id());
        outcomes[q] = average_precision(ranking, relevance_for(index, part.queries[q].category()));
    });
    rep.timing.query_s = seconds_since(t);

    const MapSummary summary = mean_average_precision(outcomes);
    rep.map = summary.map;
    rep.included_queries = summary.included;
    rep.skipped_queries = summary.skipped;
    if (cfg.record_per_query) {
        rep.per_query_aps.reserve(outcomes.size());
        for (const auto& o : outcomes) {
            rep.per_query_aps.push_back(o.skipped ? -1.0 : o.ap);
        }
    }
    if (cfg.record_quantization_error) {
        rep.mean_quantization_error = mean_quantization_error(part.database, cbs, cfg.workers);
    }

    // Brute-force baselines share the partition; parallelism is across
    // queries, each ranking single-threaded.
    for (const Metric metric : cfg.baseline_metrics) {
        const auto bt = Clock::now();
        std::vector<ApOutcome> base_outcomes(part.queries.size());
        parallel_for(part.queries.size(), cfg.workers, [&](std::size_t q) {
            const RankedResult ranking =
                brute_force_ranking(part.database, part.queries[q], metric, 1);
            std::vector<bool> rel(part.database.size(), false);
            for (std::size_t i = 0; i < part.database.size(); ++i) {
                rel[i] = part.database[i].category() == part.queries[q].category();
            }
            base_outcomes[q] = average_precision(ranking, rel);
        });
        const MapSummary base_summary = mean_average_precision(base_outcomes);
        rep.baseline_maps[metric_name(metric)] = base_summary.map;
        rep.baseline_seconds[metric_name(metric)] = seconds_since(bt);
    }

    rep.timing.total_s = seconds_since(rep_start);
    return rep;
}

}  // namespace

EvalReport run_experiment(const Dataset& ds, const ExperimentConfig& cfg) {
    if (cfg.repetitions == 0) {
        throw ConfigError("experiment needs at least one repetition");
    }
    if (ds.category_count() < 2 || ds.category_count() >= ds.size()) {
        throw ConfigError("evaluation needs 2 <= categories < trajectories, dataset has " +
                          std::to_string(ds.category_count()) + " categories over " +
                          std::to_string(ds.size()) + " trajectories");
    }

    EvalReport report;
    report.config = cfg;
    std::vector<double> maps;
    maps.reserve(cfg.repetitions);
    std::map<std::string, std::vector<double>> baseline_maps;
    for (std::size_t r = 0; r < cfg.repetitions; ++r) {
        PartitionSizes sizes;
        RepetitionResult rep = run_repetition(ds, cfg, r, &sizes);
        if (r == 0) {
            report.query_count = sizes.queries;
            report.database_count = sizes.database;
            report.training_reserved = sizes.training_reserved;
        }
        maps.push_back(rep.map);
        for (const auto& [name, value] : rep.baseline_maps) {
            baseline_maps[name].push_back(value);
        }
        report.mean_timing.codebook_build_s += rep.timing.codebook_build_s;
        report.mean_timing.hashing_s += rep.timing.hashing_s;
        report.mean_timing.query_s += rep.timing.query_s;
        report.mean_timing.total_s += rep.timing.total_s;
        report.repetitions.push_back(std::move(rep));
    }
    const double r = double(cfg.repetitions);
    report.mean_timing.codebook_build_s /= r;
    report.mean_timing.hashing_s /= r;
    report.mean_timing.query_s /= r;
    report.mean_timing.total_s /= r;
    report.map = aggregate_of(maps);
    for (const auto& [name, values] : baseline_maps) {
        report.baseline_map[name] = aggregate_of(values);
    }
    return report;
}

std::vector<SweepCell> parameter_sweep(const Dataset& ds, const ExperimentConfig& base,
                                       const SweepGrid& grid) {
    if (grid.omegas.empty() || grid.prototype_sizes.empty()) {
        throw ConfigError("sweep grids must be non-empty");
    }
    std::vector<SweepCell> cells;
    cells.reserve(grid.omegas.size() * grid.prototype_sizes.size());
    for (const std::uint32_t omega : grid.omegas) {
        const std::uint32_t m = std::max<std::uint32_t>(
            1, static_cast<std::uint32_t>(
                   std::llround(double(grid.target_code_length) / double(omega))));
        for (const std::uint32_t k : grid.prototype_sizes) {
            ExperimentConfig cfg = base;
            cfg.geopth.bits_per_codebook = omega;
            cfg.geopth.num_codebooks = m;
            cfg.geopth.prototype_size = k;
            SweepCell cell;
            cell.psi = std::size_t(1) << omega;
            cell.prototype_size = k;
            cell.report = run_experiment(ds, cfg);
            cells.push_back(std::move(cell));
        }
    }
    return cells;
}

std::string sweep_to_csv(const std::vector<SweepCell>& cells) {
    std::string csv = "psi,k,map,se,seconds\n";
    for (const auto& cell : cells) {
        csv += std::to_string(cell.psi);
        csv += ',';
        csv += std::to_string(cell.prototype_size);
        csv += ',';
        csv += format_double(cell.report.map.mean, 6);
        csv += ',';
        csv += format_double(cell.report.map.two_se / 2.0, 6);
        csv += ',';
        csv += format_double(cell.report.mean_timing.total_s, 4);
        csv += '\n';
    }
    return csv;
}

std::map<std::string, EvalReport> ablation_metrics(const Dataset& ds, const ExperimentConfig& base,
                                                   const std::vector<Metric>& metrics) {
    std::map<std::string, EvalReport> out;
    for (const Metric metric : metrics) {
        ExperimentConfig cfg = base;
        cfg.geopth.metric = metric;
        out[metric_name(metric)] = run_experiment(ds, cfg);
    }
    return out;
}

namespace {

nlohmann::ordered_json timing_json(const PhaseTiming& t) {
    return nlohmann::ordered_json{{"codebook_build_s", t.codebook_build_s},
                                  {"hashing_s", t.hashing_s},
                                  {"query_s", t.query_s},
                                  {"total_s", t.total_s}};
}

}  // namespace

std::string report_to_json(const EvalReport& report, int indent) {
    using json = nlohmann::ordered_json;
    const ExperimentConfig& cfg = report.config;

    json config;
    config["seed"] = cfg.seed;
    config["repetitions"] = cfg.repetitions;
    config["workers"] = cfg.workers;
    config["geopth"] = json{{"num_codebooks", cfg.geopth.num_codebooks},
                            {"bits_per_codebook", cfg.geopth.bits_per_codebook},
                            {"code_length", cfg.geopth.code_length()},
                            {"codebook_size", cfg.geopth.codebook_size()},
                            {"prototype_size", cfg.geopth.prototype_size},
                            {"metric", metric_name(cfg.geopth.metric)}};
    json pj;
    pj["mode"] = cfg.partition.mode == PartitionMode::kSmall ? "small" : "large";
    if (cfg.partition.mode == PartitionMode::kSmall) {
        pj["query_fraction"] = cfg.partition.query_fraction;
    } else {
        pj["query_count"] = cfg.partition.query_count;
        pj["database_count"] = cfg.partition.database_count;
        pj["training_reserve"] = cfg.partition.training_reserve;
    }
    config["partition"] = pj;
    if (!cfg.baseline_metrics.empty()) {
        json names = json::array();
        for (const Metric m : cfg.baseline_metrics) {
            names.push_back(metric_name(m));
        }
        config["baselines"] = names;
    }

    json root;
    root["config"] = config;
    root["partition"] = json{{"query_count", report.query_count},
                             {"database_count", report.database_count},
                             {"training_reserved", report.training_reserved}};
    root["map"] = json{{"mean", report.map.mean}, {"two_se", report.map.two_se}};
    if (!report.baseline_map.empty()) {
        json bj;
        for (const auto& [name, agg] : report.baseline_map) {
            bj[name] = json{{"mean", agg.mean}, {"two_se", agg.two_se}};
        }
        root["baselines"] = bj;
    }

    json reps = json::array();
    for (const auto& rep : report.repetitions) {
        json rj;
        rj["seed"] = rep.seed;
        rj["map"] = rep.map;
        rj["included_queries"] = rep.included_queries;
        rj["skipped_queries"] = rep.skipped_queries;
        if (!rep.baseline_maps.empty()) {
            rj["baselines"] = rep.baseline_maps;
        }
        if (report.config.record_quantization_error) {
            rj["mean_quantization_error"] = rep.mean_quantization_error;
        }
        if (report.config.record_per_query) {
            rj["per_query_aps"] = rep.per_query_aps;  // -1 marks a skipped query
        }
        json tj = timing_json(rep.timing);
        for (const auto& [name, secs] : rep.baseline_seconds) {
            tj["baseline_" + name + "_s"] = secs;
        }
        rj["timing"] = tj;
        reps.push_back(std::move(rj));
    }
    root["repetitions"] = reps;
    root["timing"] = timing_json(report.mean_timing);
    return root.dump(indent) + "\n";
}

HammingBenchmark benchmark_hamming_throughput(std::uint32_t code_length, std::size_t code_count,
                                              std::size_t scans, std::uint64_t seed) {
    if (code_length == 0 || code_count == 0 || scans == 0) {
        throw ConfigError("hamming benchmark needs positive code length, count and scans");
    }
    Rng rng = make_rng(seed);
    auto random_code = [&]() {
        BinaryCode code(code_length);
        for (std::uint32_t q = 0; q < code_length; ++q) {
            if (rng() & 1ULL) {
                code.set_bit(q);
            }
        }
        return code;
    };
    std::vector<BinaryCode> codes;
    codes.reserve(code_count);
    for (std::size_t i = 0; i < code_count; ++i) {
        codes.push_back(random_code());
    }
    std::vector<BinaryCode> queries;
    queries.reserve(scans);
    for (std::size_t s = 0; s < scans; ++s) {
        queries.push_back(random_code());
    }

    HammingBenchmark bench;
    bench.code_count = code_count;
    bench.code_length = code_length;
    const auto t0 = Clock::now();
    std::uint64_t checksum = 0;
    for (std::size_t s = 0; s < scans; ++s) {
        for (std::size_t i = 0; i < code_count; ++i) {
            checksum += hamming_distance(queries[s], codes[i]);
        }
    }
    bench.seconds = seconds_since(t0);
    bench.comparisons = scans * code_count;
    bench.checksum = checksum;
    bench.comparisons_per_second =
        bench.seconds > 0.0 ? double(bench.comparisons) / bench.seconds : 0.0;
    return bench;
}

}  // namespace geopth
