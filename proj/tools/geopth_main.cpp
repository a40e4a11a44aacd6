// geopth: prototype-based trajectory hashing, Hamming retrieval and the
// evaluation harness behind one command-line tool.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "geopth/codebook.hpp"
#include "geopth/dataset_io.hpp"
#include "geopth/encoder.hpp"
#include "geopth/errors.hpp"
#include "geopth/eval.hpp"
#include "geopth/index.hpp"
#include "geopth/parallel.hpp"
#include "geopth/synthetic.hpp"

namespace {

using namespace geopth;

struct CommonOpts {
    std::string data;
    std::uint64_t seed = 0;
    unsigned workers = 0;  // 0 -> GEOPTH_WORKERS env var -> 16
    std::string metric = "hausdorff";
    std::uint32_t omega = 4;
    std::uint32_t k = 10;
    std::optional<std::uint32_t> m;
    std::optional<std::uint32_t> code_length;
};

struct SyntheticOpts {
    bool enabled = false;
    std::size_t categories = 5;
    std::size_t per_class = 100;
    std::size_t template_length = 100;
    double sigma = 0.5;
    double spacing = 10.0;
    std::string export_path;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_params) {
    cmd->add_option("--data", opts.data, "Trajectory CSV (traj_id,category,seq,x,y[,...])");
    cmd->add_option("--seed", opts.seed, "Master seed; fixes every non-timing output byte");
    cmd->add_option("--workers", opts.workers,
                    "Worker threads (default: GEOPTH_WORKERS env var, else 16)");
    if (with_params) {
        cmd->add_option("--metric", opts.metric, "Quantization metric: hausdorff|dtw|frechet")
            ->check(CLI::IsMember({"hausdorff", "dtw", "frechet"}));
        cmd->add_option("--omega", opts.omega, "Bits per codebook (codebook size = 2^omega)")
            ->check(CLI::Range(1u, 30u));
        cmd->add_option("--k", opts.k, "Points per prototype")->check(CLI::PositiveNumber);
        cmd->add_option("--m", opts.m, "Number of codebooks (code length = m * omega)");
        cmd->add_option("--l", opts.code_length,
                        "Code length in bits; must be a multiple of omega when --m is absent");
    }
}

void add_synthetic(CLI::App* cmd, SyntheticOpts& opts) {
    cmd->add_flag("--synthetic", opts.enabled,
                  "Generate labeled synthetic data instead of reading --data");
    cmd->add_option("--synthetic-categories", opts.categories, "Synthetic: category count");
    cmd->add_option("--synthetic-per-class", opts.per_class, "Synthetic: members per category");
    cmd->add_option("--synthetic-template-length", opts.template_length,
                    "Synthetic: template point count");
    cmd->add_option("--synthetic-sigma", opts.sigma, "Synthetic: per-point noise sigma");
    cmd->add_option("--synthetic-spacing", opts.spacing, "Synthetic: template center spacing");
    cmd->add_option("--export-synthetic", opts.export_path,
                    "Write the generated synthetic data to this CSV");
}

CodebookParams resolve_params(const CommonOpts& opts) {
    CodebookParams params;
    params.bits_per_codebook = opts.omega;
    params.prototype_size = opts.k;
    params.metric = parse_metric(opts.metric);
    params.seed = opts.seed;
    if (opts.m && opts.code_length) {
        if (*opts.m * opts.omega != *opts.code_length) {
            throw ConfigError("--m " + std::to_string(*opts.m) + " times --omega " +
                              std::to_string(opts.omega) + " is " +
                              std::to_string(*opts.m * opts.omega) + ", but --l says " +
                              std::to_string(*opts.code_length));
        }
        params.num_codebooks = *opts.m;
    } else if (opts.m) {
        params.num_codebooks = *opts.m;
    } else if (opts.code_length) {
        if (*opts.code_length % opts.omega != 0) {
            throw ConfigError("--l " + std::to_string(*opts.code_length) +
                              " is not a multiple of --omega " + std::to_string(opts.omega) +
                              "; give --m explicitly");
        }
        params.num_codebooks = *opts.code_length / opts.omega;
    } else {
        params.num_codebooks = 64 / opts.omega;  // default L = 64
        if (params.num_codebooks == 0) {
            params.num_codebooks = 1;
        }
    }
    return params;
}

Dataset resolve_dataset(const CommonOpts& common, const SyntheticOpts& synth) {
    if (synth.enabled) {
        SyntheticSpec spec;
        spec.categories = synth.categories;
        spec.per_class = synth.per_class;
        spec.template_length = synth.template_length;
        spec.noise_sigma = synth.sigma;
        spec.center_spacing = synth.spacing;
        spec.seed = derive_seed(common.seed, 0x5f3759df);
        Dataset ds = generate_synthetic(spec);
        if (!synth.export_path.empty()) {
            save_dataset(ds, synth.export_path);
            std::cout << "synthetic data written to " << synth.export_path << "\n";
        }
        return ds;
    }
    if (common.data.empty()) {
        throw ConfigError("either --data or --synthetic is required");
    }
    return load_dataset(common.data);
}

void write_text(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::trunc);
    if (!out) {
        throw PersistenceError("cannot open file for writing: " + path);
    }
    out << text;
}

ExperimentConfig make_experiment_config(const CommonOpts& common, const std::string& mode,
                                        std::size_t reps,
                                        const std::vector<std::string>& baselines, bool per_query,
                                        bool record_qe) {
    ExperimentConfig cfg;
    cfg.seed = common.seed;
    cfg.repetitions = reps;
    cfg.geopth = resolve_params(common);
    cfg.partition.mode = (mode == "large") ? PartitionMode::kLarge : PartitionMode::kSmall;
    cfg.workers = resolve_workers(common.workers);
    cfg.record_per_query = per_query;
    cfg.record_quantization_error = record_qe;
    for (const auto& name : baselines) {
        cfg.baseline_metrics.push_back(parse_metric(name));
    }
    return cfg;
}

void require_data(const CommonOpts& common) {
    if (common.data.empty()) {
        throw ConfigError("--data is required");
    }
}

int cmd_build(const CommonOpts& common, const std::string& out_path) {
    require_data(common);
    const Dataset db = load_dataset(common.data);
    const CodebookParams params = resolve_params(common);
    const CodebookSet cbs = build_codebook_set(db, params);
    save_codebook_set(cbs, out_path);
    std::cout << "codebooks: M=" << params.num_codebooks << " omega=" << params.bits_per_codebook
              << " psi=" << params.codebook_size() << " k=" << params.prototype_size
              << " metric=" << metric_name(params.metric) << " L=" << params.code_length()
              << " seed=" << params.seed << "\n"
              << "fingerprint: " << cbs.fingerprint() << "\n"
              << "written to " << out_path << "\n";
    return 0;
}

int cmd_hash(const CommonOpts& common, const std::string& codebooks_path,
             const std::string& out_path, const std::string& dump_path) {
    require_data(common);
    const Dataset db = load_dataset(common.data);
    const CodebookSet cbs = load_codebook_set(codebooks_path);
    const HashIndex index = build_index(db, cbs, resolve_workers(common.workers));
    save_index(index, out_path);
    std::cout << "indexed " << index.size() << " trajectories, L=" << index.code_length()
              << ", written to " << out_path << "\n";
    if (!dump_path.empty()) {
        std::string dump;
        for (std::size_t i = 0; i < index.size(); ++i) {
            const IndexEntry& e = index.entry(i);
            dump += e.id;
            dump += ',';
            dump += std::to_string(index.code_length());
            dump += ',';
            dump += e.code.to_hex();
            dump += '\n';
        }
        write_text(dump_path, dump);
        std::cout << "code dump written to " << dump_path << "\n";
    }
    return 0;
}

int cmd_query(const CommonOpts& common, const std::string& index_path,
              const std::string& codebooks_path, std::size_t n, const std::string& out_path) {
    require_data(common);
    const Dataset queries = load_dataset(common.data);
    const CodebookSet cbs = load_codebook_set(codebooks_path);
    const HashIndex index = load_index(index_path);
    validate_fingerprint(index, cbs);

    const unsigned workers = resolve_workers(common.workers);
    const std::vector<BinaryCode> codes = hash_dataset(queries, cbs, workers);
    std::string out = "query_id,rank,id,distance\n";
    for (std::size_t q = 0; q < queries.size(); ++q) {
        const RankedResult result = query_topn(index, codes[q], n, queries[q].id());
        for (std::size_t r = 0; r < result.entries.size(); ++r) {
            out += result.query_id;
            out += ',';
            out += std::to_string(r + 1);
            out += ',';
            out += index.entry(result.entries[r].index).id;
            out += ',';
            out += std::to_string(static_cast<long long>(result.entries[r].distance));
            out += '\n';
        }
    }
    write_text(out_path, out);
    return 0;
}

int cmd_eval(const CommonOpts& common, const SyntheticOpts& synth, const std::string& mode,
             std::size_t reps, const std::vector<std::string>& baselines, bool per_query,
             bool record_qe, const std::string& out_path) {
    const Dataset ds = resolve_dataset(common, synth);
    const ExperimentConfig cfg =
        make_experiment_config(common, mode, reps, baselines, per_query, record_qe);
    const EvalReport report = run_experiment(ds, cfg);
    write_text(out_path, report_to_json(report));
    std::fprintf(stderr, "mAP %.4f +/- %.4f (%zu repetitions)\n", report.map.mean,
                 report.map.two_se, report.repetitions.size());
    return 0;
}

int cmd_sweep(const CommonOpts& common, const SyntheticOpts& synth, const std::string& mode,
              std::size_t reps, std::vector<std::uint32_t> omegas, std::vector<std::uint32_t> ks,
              std::uint32_t target_l, const std::string& out_path) {
    const Dataset ds = resolve_dataset(common, synth);
    const ExperimentConfig cfg = make_experiment_config(common, mode, reps, {}, false, false);
    SweepGrid grid;
    if (!omegas.empty()) {
        grid.omegas = std::move(omegas);
    }
    if (!ks.empty()) {
        grid.prototype_sizes = std::move(ks);
    }
    grid.target_code_length = target_l;
    const std::vector<SweepCell> cells = parameter_sweep(ds, cfg, grid);
    write_text(out_path, sweep_to_csv(cells));
    return 0;
}

int cmd_bench(const CommonOpts& common, const SyntheticOpts& synth, const std::string& mode,
              std::size_t reps, std::size_t bench_codes, std::size_t bench_scans,
              const std::string& out_path) {
    const Dataset ds = resolve_dataset(common, synth);
    const ExperimentConfig cfg = make_experiment_config(common, mode, reps, {}, false, false);
    const EvalReport report = run_experiment(ds, cfg);
    const HammingBenchmark hb = benchmark_hamming_throughput(cfg.geopth.code_length(), bench_codes,
                                                             bench_scans, common.seed);
    char buf[512];
    std::snprintf(buf, sizeof(buf),
                  "{\n"
                  "  \"timing\": {\n"
                  "    \"codebook_build_s\": %.6f,\n"
                  "    \"hashing_s\": %.6f,\n"
                  "    \"query_s\": %.6f,\n"
                  "    \"total_s\": %.6f,\n"
                  "    \"hamming_comparisons_per_second\": %.0f\n"
                  "  },\n"
                  "  \"hamming_benchmark\": {\"codes\": %zu, \"code_length\": %u, "
                  "\"comparisons\": %zu},\n"
                  "  \"map_mean\": %.6f\n"
                  "}\n",
                  report.mean_timing.codebook_build_s, report.mean_timing.hashing_s,
                  report.mean_timing.query_s, report.mean_timing.total_s,
                  hb.comparisons_per_second, hb.code_count, hb.code_length, hb.comparisons,
                  report.map.mean);
    write_text(out_path, buf);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"GeoPTH: geometric prototype trajectory hashing and Hamming retrieval"};
    app.require_subcommand(1);
    app.set_config("--config", "", "Key-value config file; command-line flags take precedence");

    CommonOpts common;
    SyntheticOpts synth;
    std::string out_path;
    std::string codebooks_path;
    std::string index_path;
    std::string dump_path;
    std::string mode = "small";
    std::size_t n = 10;
    std::size_t reps = 10;
    std::vector<std::string> baselines;
    bool per_query = false;
    bool record_qe = false;
    std::vector<std::uint32_t> omegas;
    std::vector<std::uint32_t> ks;
    std::uint32_t target_l = 64;
    std::size_t bench_codes = 10000;
    std::size_t bench_scans = 200;

    CLI::App* build = app.add_subcommand("build", "Build prototype codebooks from a dataset");
    add_common(build, common, true);
    build->add_option("--out", out_path, "Codebook file to write")->required();

    CLI::App* hash = app.add_subcommand("hash", "Hash a dataset into a binary-code index");
    add_common(hash, common, false);
    hash->add_option("--codebooks", codebooks_path, "Codebook file")->required();
    hash->add_option("--out", out_path, "Index file to write")->required();
    hash->add_option("--dump", dump_path, "Also write a text code dump (id,L,hex per line)");

    CLI::App* query = app.add_subcommand("query", "Rank index entries for query trajectories");
    add_common(query, common, false);
    query->add_option("--index", index_path, "Index file")->required();
    query->add_option("--codebooks", codebooks_path, "Codebook file (hashes the queries)")
        ->required();
    query->add_option("--n", n, "Results per query");
    query->add_option("--out", out_path, "Output CSV (default stdout)");

    CLI::App* eval = app.add_subcommand("eval", "Run the retrieval evaluation protocol");
    add_common(eval, common, true);
    add_synthetic(eval, synth);
    eval->add_option("--mode", mode, "Partition mode")->check(CLI::IsMember({"small", "large"}));
    eval->add_option("--reps", reps, "Repetitions (fresh sub-seed each)");
    eval->add_option("--baselines", baselines,
                     "Brute-force baseline metrics (hausdorff, dtw, frechet)");
    eval->add_flag("--per-query", per_query, "Record per-query APs in the report");
    eval->add_flag("--record-qe", record_qe, "Record the mean quantization error per repetition");
    eval->add_option("--out", out_path, "Report JSON path (default stdout)");

    CLI::App* sweep = app.add_subcommand("sweep", "Grid sweep over codebook and prototype size");
    add_common(sweep, common, true);
    add_synthetic(sweep, synth);
    sweep->add_option("--mode", mode, "Partition mode")->check(CLI::IsMember({"small", "large"}));
    sweep->add_option("--reps", reps, "Repetitions per cell");
    sweep->add_option("--omegas", omegas, "Omega grid (psi = 2^omega); default 1..6");
    sweep->add_option("--ks", ks, "Prototype size grid; default 1,5,10,15,20");
    sweep->add_option("--target-l", target_l, "Target code length held across the grid");
    sweep->add_option("--out", out_path, "Sweep CSV path (default stdout)");

    CLI::App* bench = app.add_subcommand("bench", "Measure phase timings and Hamming throughput");
    add_common(bench, common, true);
    add_synthetic(bench, synth);
    bench->add_option("--mode", mode, "Partition mode")->check(CLI::IsMember({"small", "large"}));
    bench->add_option("--reps", reps, "Repetitions to average timings over");
    bench->add_option("--bench-codes", bench_codes, "Codes in the Hamming throughput scan");
    bench->add_option("--bench-scans", bench_scans, "Full scans in the Hamming throughput run");
    bench->add_option("--out", out_path, "Timing JSON path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (build->parsed()) {
            return cmd_build(common, out_path);
        }
        if (hash->parsed()) {
            return cmd_hash(common, codebooks_path, out_path, dump_path);
        }
        if (query->parsed()) {
            return cmd_query(common, index_path, codebooks_path, n, out_path);
        }
        if (eval->parsed()) {
            return cmd_eval(common, synth, mode, reps, baselines, per_query, record_qe, out_path);
        }
        if (sweep->parsed()) {
            return cmd_sweep(common, synth, mode, reps, omegas, ks, target_l, out_path);
        }
        if (bench->parsed()) {
            return cmd_bench(common, synth, mode, reps, bench_codes, bench_scans, out_path);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
