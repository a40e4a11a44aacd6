// End-to-end tests that drive the installed CLI binary. The path comes from
// the GEOPTH_BIN environment variable, set by the ctest registration.

#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "geopth/dataset_io.hpp"
#include "geopth/serial.hpp"
#include "geopth/synthetic.hpp"

using namespace geopth;

namespace {

std::string cli_path() {
    if (const char* env = std::getenv("GEOPTH_BIN")) {
        return env;
    }
    for (const char* candidate : {"./tools/geopth", "../tools/geopth", "./geopth"}) {
        if (std::ifstream(candidate).good()) {
            return candidate;
        }
    }
    return "";
}

int run_cli(const std::string& args) {
    const std::string cmd = cli_path() + " " + args + " >/dev/null 2>&1";
    return std::system(cmd.c_str());
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream out;
    out << in.rdbuf();
    return out.str();
}

void strip_timing(nlohmann::ordered_json& node) {
    if (node.is_object()) {
        node.erase("timing");
        for (auto& [key, value] : node.items()) {
            strip_timing(value);
        }
    } else if (node.is_array()) {
        for (auto& value : node) {
            strip_timing(value);
        }
    }
}

void write_fixture_dataset(const std::string& path) {
    SyntheticSpec spec;
    spec.categories = 3;
    spec.per_class = 12;
    spec.template_length = 16;
    spec.noise_sigma = 0.3;
    spec.seed = 1234;
    save_dataset(generate_synthetic(spec), path);
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("build, hash and query round trip") {
    REQUIRE(!cli_path().empty());
    write_fixture_dataset("cli_data.csv");

    CHECK(run_cli("build --data cli_data.csv --m 4 --omega 3 --k 5 --seed 9 "
                  "--out cli_cb.bin") == 0);
    CHECK(run_cli("hash --data cli_data.csv --codebooks cli_cb.bin --workers 2 "
                  "--out cli_idx.bin --dump cli_codes.txt") == 0);
    CHECK(run_cli("query --data cli_data.csv --index cli_idx.bin --codebooks cli_cb.bin "
                  "--n 36 --out cli_rank.csv") == 0);

    // The dump has one id,L,hex record per trajectory.
    std::ifstream dump("cli_codes.txt");
    std::string line;
    std::size_t dump_lines = 0;
    while (std::getline(dump, line)) {
        ++dump_lines;
        CHECK(line.find(",12,") != std::string::npos);
    }
    CHECK(dump_lines == 36);

    // Every database id appears in the ranking of the first query.
    const std::string ranking = slurp("cli_rank.csv");
    const Dataset ds = load_dataset("cli_data.csv");
    for (const auto& t : ds.trajectories()) {
        CHECK(ranking.find("," + t.id() + ",") != std::string::npos);
    }

    for (const char* f : {"cli_data.csv", "cli_cb.bin", "cli_idx.bin", "cli_codes.txt",
                          "cli_rank.csv"}) {
        std::remove(f);
    }
}

TEST_CASE("artifacts are byte identical across runs and worker counts") {
    REQUIRE(!cli_path().empty());
    write_fixture_dataset("cli_det.csv");

    CHECK(run_cli("build --data cli_det.csv --m 6 --omega 2 --k 4 --seed 42 --out det_a.bin") ==
          0);
    CHECK(run_cli("build --data cli_det.csv --m 6 --omega 2 --k 4 --seed 42 --out det_b.bin") ==
          0);
    CHECK(slurp("det_a.bin") == slurp("det_b.bin"));

    CHECK(run_cli("hash --data cli_det.csv --codebooks det_a.bin --workers 1 --out idx_1.bin") ==
          0);
    CHECK(run_cli("hash --data cli_det.csv --codebooks det_a.bin --workers 8 --out idx_8.bin") ==
          0);
    CHECK(slurp("idx_1.bin") == slurp("idx_8.bin"));

    for (const char* f : {"cli_det.csv", "det_a.bin", "det_b.bin", "idx_1.bin", "idx_8.bin"}) {
        std::remove(f);
    }
}

TEST_CASE("eval produces a stable report with a map field") {
    REQUIRE(!cli_path().empty());
    const std::string args =
        "eval --synthetic --synthetic-categories 3 --synthetic-per-class 10 "
        "--synthetic-template-length 12 --reps 2 --seed 5 --workers 2 --out ";
    CHECK(run_cli(args + "rep_a.json") == 0);
    CHECK(run_cli(args + "rep_b.json") == 0);

    auto a = nlohmann::ordered_json::parse(slurp("rep_a.json"));
    auto b = nlohmann::ordered_json::parse(slurp("rep_b.json"));
    CHECK(a.contains("map"));
    CHECK(a["map"].contains("mean"));
    CHECK(a["map"]["mean"].get<double>() >= 0.0);
    CHECK(a["map"]["mean"].get<double>() <= 1.0);

    strip_timing(a);
    strip_timing(b);
    CHECK(a.dump() == b.dump());

    std::remove("rep_a.json");
    std::remove("rep_b.json");
}

TEST_CASE("sweep csv is stable excluding the seconds column") {
    REQUIRE(!cli_path().empty());
    const std::string args =
        "sweep --synthetic --synthetic-categories 3 --synthetic-per-class 8 "
        "--synthetic-template-length 10 --reps 1 --seed 5 --workers 2 "
        "--omegas 1 --omegas 2 --ks 3 --target-l 8 --out ";
    CHECK(run_cli(args + "sweep_a.csv") == 0);
    CHECK(run_cli(args + "sweep_b.csv") == 0);

    auto strip_seconds = [](const std::string& csv) {
        std::istringstream in(csv);
        std::string line;
        std::string out;
        while (std::getline(in, line)) {
            out += line.substr(0, line.rfind(','));
            out += '\n';
        }
        return out;
    };
    const std::string a = slurp("sweep_a.csv");
    CHECK(a.rfind("psi,k,map,se,seconds\n", 0) == 0);
    CHECK(strip_seconds(a) == strip_seconds(slurp("sweep_b.csv")));

    std::remove("sweep_a.csv");
    std::remove("sweep_b.csv");
}

TEST_CASE("bench reports throughput") {
    REQUIRE(!cli_path().empty());
    CHECK(run_cli("bench --synthetic --synthetic-categories 2 --synthetic-per-class 8 "
                  "--synthetic-template-length 10 --reps 1 --seed 5 --workers 2 "
                  "--omega 2 --m 8 --bench-codes 1000 --bench-scans 10 --out bench.json") == 0);
    auto j = nlohmann::ordered_json::parse(slurp("bench.json"));
    CHECK(j["timing"].contains("hamming_comparisons_per_second"));
    CHECK(j["timing"]["hamming_comparisons_per_second"].get<double>() > 0.0);
    std::remove("bench.json");
}

TEST_CASE("missing files and bad parameters exit nonzero") {
    REQUIRE(!cli_path().empty());
    CHECK(run_cli("build --data does_not_exist.csv --out x.bin") != 0);
    CHECK(run_cli("hash --data does_not_exist.csv --codebooks nope.bin --out x.bin") != 0);
    CHECK(run_cli("eval") != 0);  // neither --data nor --synthetic

    // psi larger than the dataset.
    write_fixture_dataset("cli_tiny.csv");
    CHECK(run_cli("build --data cli_tiny.csv --m 2 --omega 10 --out x.bin") != 0);
    std::remove("cli_tiny.csv");
}

TEST_CASE("codebook and index files reject tampering") {
    REQUIRE(!cli_path().empty());
    write_fixture_dataset("cli_tamper.csv");
    CHECK(run_cli("build --data cli_tamper.csv --m 2 --omega 2 --k 3 --seed 1 --out cb_t.bin") ==
          0);
    CHECK(run_cli("hash --data cli_tamper.csv --codebooks cb_t.bin --out idx_t.bin") == 0);

    // Rebuild codebooks with another seed: the index fingerprint must fail.
    CHECK(run_cli("build --data cli_tamper.csv --m 2 --omega 2 --k 3 --seed 2 --out cb_u.bin") ==
          0);
    CHECK(run_cli("query --data cli_tamper.csv --index idx_t.bin --codebooks cb_u.bin --n 3") !=
          0);

    for (const char* f : {"cli_tamper.csv", "cb_t.bin", "cb_u.bin", "idx_t.bin"}) {
        std::remove(f);
    }
}

}  // TEST_SUITE
