#include <doctest.h>

#include <map>
#include <vector>

#include "geopth/encoder.hpp"
#include "geopth/errors.hpp"
#include "test_util.hpp"

using namespace geopth;
using testutil::make_traj;

namespace {

Codebook two_prototype_codebook() {
    std::vector<Prototype> protos;
    protos.emplace_back("p0", std::vector<double>{0.0, 0.0}, 2);
    protos.emplace_back("p1", std::vector<double>{10.0, 10.0}, 2);
    return Codebook(std::move(protos));
}

// Reference encoder: per-bit vector, naive metric, no packing.
std::vector<int> naive_hash_bits(const Trajectory& t, const CodebookSet& cbs) {
    const std::uint32_t omega = cbs.params().bits_per_codebook;
    std::vector<int> bits;
    for (std::size_t m = 0; m < cbs.size(); ++m) {
        std::size_t best = 0;
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < cbs[m].size(); ++j) {
            const double d = testutil::naive_hausdorff(t.points(), cbs[m][j].points());
            if (d < best_dist) {
                best_dist = d;
                best = j;
            }
        }
        for (std::uint32_t b = 0; b < omega; ++b) {
            bits.push_back(static_cast<int>((best >> (omega - 1 - b)) & 1));
        }
    }
    return bits;
}

}  // namespace

TEST_SUITE("encoder") {

TEST_CASE("quantize picks the nearest prototype") {
    const Codebook cb = two_prototype_codebook();
    const Trajectory t = make_traj("t", "c", {{1, 1}});
    CHECK(quantize(t.points(), cb, Metric::kHausdorff) == 0);
    CHECK(quantization_error(t.points(), cb, Metric::kHausdorff) ==
          doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("quantize breaks ties toward the smaller index") {
    const Codebook cb = two_prototype_codebook();
    const Trajectory t = make_traj("t", "c", {{5, 5}});
    CHECK(quantize(t.points(), cb, Metric::kHausdorff) == 0);
}

TEST_CASE("quantize of a prototype's own points has zero error") {
    const Codebook cb = two_prototype_codebook();
    const Trajectory t = make_traj("t", "c", {{10, 10}});
    CHECK(quantize(t.points(), cb, Metric::kHausdorff) == 1);
    CHECK(quantization_error(t.points(), cb, Metric::kHausdorff) == 0.0);
}

TEST_CASE("mean quantization error is bounded by the data diameter") {
    Rng rng = make_rng(31);
    const Dataset db = testutil::random_dataset(rng, 40, 2, 10, 0.0, 10.0);
    CodebookParams params;
    params.num_codebooks = 4;
    params.bits_per_codebook = 3;
    params.prototype_size = 4;
    const CodebookSet cbs = build_codebook_set(db, params);
    const double mean_err = mean_quantization_error(db, cbs, 2);

    // Diameter of the point cloud = max pairwise point distance.
    double diameter = 0.0;
    for (const auto& a : db.trajectories()) {
        for (const auto& b : db.trajectories()) {
            for (std::size_t i = 0; i < a.size(); ++i) {
                for (std::size_t j = 0; j < b.size(); ++j) {
                    diameter = std::max(diameter,
                                        testutil::naive_point_distance(a.point(i), b.point(j)));
                }
            }
        }
    }
    CHECK(mean_err >= 0.0);
    CHECK(mean_err <= diameter);
}

TEST_CASE("encode_index produces big-endian blocks") {
    CHECK(encode_index(0, 2) == 0b00);
    CHECK(encode_index(2, 2) == 0b10);  // third prototype
    CHECK(encode_index(7, 3) == 0b111);
    CHECK_THROWS_AS((void)encode_index(4, 2), InternalError);
    CHECK_THROWS_AS((void)encode_index(0, 0), InternalError);
}

TEST_CASE("binary code bit layout and hex dump") {
    BinaryCode code(4);
    code.set_bit(1);
    code.set_bit(3);  // 0101
    CHECK(code.to_hex() == "5");
    CHECK(code.bit(0) == false);
    CHECK(code.bit(1) == true);

    BinaryCode long_code(6);
    long_code.set_block(0, 6, 0b010111);
    CHECK(long_code.to_hex() == "5c");  // 0101 11(00 padding)

    BinaryCode wide(130);
    wide.set_bit(0);
    wide.set_bit(129);
    CHECK(wide.to_hex().size() == 33);
    CHECK(wide.to_hex().front() == '8');
    CHECK_THROWS_AS(wide.set_bit(130), InputError);
}

TEST_CASE("hash concatenates sub-codes most significant first") {
    // Two codebooks of two single-point prototypes; omega = 1.
    std::vector<Codebook> books;
    {
        std::vector<Prototype> protos;
        protos.emplace_back("a", std::vector<double>{0.0, 0.0}, 2);
        protos.emplace_back("b", std::vector<double>{10.0, 10.0}, 2);
        books.emplace_back(std::move(protos));
    }
    {
        std::vector<Prototype> protos;
        protos.emplace_back("c", std::vector<double>{9.0, 9.0}, 2);
        protos.emplace_back("d", std::vector<double>{-5.0, -5.0}, 2);
        books.emplace_back(std::move(protos));
    }
    CodebookParams params;
    params.num_codebooks = 2;
    params.bits_per_codebook = 1;
    params.prototype_size = 1;
    const CodebookSet cbs(params, 2, std::move(books));

    // Near (10,10): first quantizer picks index 1, second picks index 0.
    const Trajectory t = make_traj("t", "c", {{9.5, 9.5}});
    const BinaryCode code = hash_trajectory(t, cbs);
    CHECK(code.length() == 2);
    CHECK(code.bit(0) == true);
    CHECK(code.bit(1) == false);

    CHECK(hash_trajectory(t, cbs) == code);  // determinism
}

TEST_CASE("hash rejects dimension mismatch") {
    Rng rng = make_rng(37);
    const Dataset db = testutil::random_dataset(rng, 8, 2, 5);
    CodebookParams params;
    params.num_codebooks = 1;
    params.bits_per_codebook = 2;
    const CodebookSet cbs = build_codebook_set(db, params);
    const Trajectory t3("t3", "c", {1.0, 2.0, 3.0}, 3);
    CHECK_THROWS_AS((void)hash_trajectory(t3, cbs), InputError);
}

TEST_CASE("self match oracle with full prototypes") {
    // Separated single-cluster trajectories; k covers every point and psi
    // covers the whole database, so each trajectory matches its own prototype
    // at distance zero in every codebook.
    std::vector<Trajectory> trajectories;
    for (int i = 0; i < 4; ++i) {
        const double base = 10.0 * i;
        trajectories.push_back(make_traj("t" + std::to_string(i), "c",
                                         {{base, base}, {base + 1.0, base}, {base, base + 1.0}}));
    }
    const Dataset db(std::move(trajectories));
    CodebookParams params;
    params.num_codebooks = 3;
    params.bits_per_codebook = 2;  // psi = 4 = N
    params.prototype_size = 3;     // k = trajectory length
    params.seed = 4242;
    const CodebookSet cbs = build_codebook_set(db, params);

    for (std::size_t i = 0; i < db.size(); ++i) {
        const BinaryCode code = hash_trajectory(db[i], cbs);
        for (std::size_t m = 0; m < cbs.size(); ++m) {
            std::size_t expected = 0;
            bool found = false;
            for (std::size_t j = 0; j < cbs[m].size(); ++j) {
                if (cbs[m][j].source_id() == db[i].id()) {
                    expected = j;
                    found = true;
                }
            }
            REQUIRE(found);
            CHECK(quantize(db[i].points(), cbs[m], Metric::kHausdorff) == expected);
            CHECK(quantization_error(db[i].points(), cbs[m], Metric::kHausdorff) == 0.0);
            const std::uint32_t omega = params.bits_per_codebook;
            for (std::uint32_t b = 0; b < omega; ++b) {
                CHECK(code.bit(m * omega + b) ==
                      (((expected >> (omega - 1 - b)) & 1) != 0));
            }
        }
    }
}

TEST_CASE("hamming distance and similarity hand values") {
    BinaryCode a(4);
    a.set_block(0, 4, 0b0101);
    BinaryCode b(4);
    b.set_block(0, 4, 0b0110);
    CHECK(hamming_distance(a, a) == 0);
    CHECK(hamming_distance(a, b) == 2);
    CHECK(hamming_similarity(a, a) == 1.0);
    CHECK(hamming_similarity(a, b) == 0.5);

    BinaryCode zeros(8);
    BinaryCode ones(8);
    ones.set_block(0, 8, 0xFF);
    CHECK(hamming_distance(zeros, ones) == 8);
    CHECK(hamming_similarity(zeros, ones) == 0.0);

    BinaryCode longer(5);
    CHECK_THROWS_AS((void)hamming_distance(a, longer), InputError);
}

TEST_CASE("hamming distance is a metric, exhaustively up to eight bits") {
    for (std::uint32_t length = 1; length <= 8; ++length) {
        const unsigned count = 1u << length;
        std::vector<BinaryCode> codes;
        codes.reserve(count);
        for (unsigned v = 0; v < count; ++v) {
            BinaryCode code(length);
            code.set_block(0, length, v);
            codes.push_back(std::move(code));
        }
        std::vector<std::vector<unsigned>> dist(count, std::vector<unsigned>(count));
        for (unsigned x = 0; x < count; ++x) {
            for (unsigned y = 0; y < count; ++y) {
                dist[x][y] = hamming_distance(codes[x], codes[y]);
            }
        }
        int symmetry_or_identity_failures = 0;
        for (unsigned x = 0; x < count; ++x) {
            if (dist[x][x] != 0) {
                ++symmetry_or_identity_failures;
            }
            for (unsigned y = 0; y < count; ++y) {
                if (x != y && dist[x][y] == 0) {
                    ++symmetry_or_identity_failures;
                }
                if (dist[x][y] != dist[y][x]) {
                    ++symmetry_or_identity_failures;
                }
            }
        }
        CHECK(symmetry_or_identity_failures == 0);
        int triangle_violations = 0;
        for (unsigned x = 0; x < count; ++x) {
            for (unsigned y = 0; y < count; ++y) {
                for (unsigned z = 0; z < count; ++z) {
                    if (dist[x][z] > dist[x][y] + dist[y][z]) {
                        ++triangle_violations;
                    }
                }
            }
        }
        CHECK(triangle_violations == 0);
    }
}

TEST_CASE("hamming triangle inequality on random long codes") {
    Rng rng = make_rng(41);
    auto random_code = [&rng]() {
        BinaryCode code(130);
        for (std::uint32_t q = 0; q < 130; ++q) {
            if (rng() & 1) {
                code.set_bit(q);
            }
        }
        return code;
    };
    for (int iter = 0; iter < 10000; ++iter) {
        const BinaryCode a = random_code();
        const BinaryCode b = random_code();
        const BinaryCode c = random_code();
        CHECK(hamming_distance(a, c) <= hamming_distance(a, b) + hamming_distance(b, c));
        CHECK(hamming_similarity(a, b) ==
              1.0 - double(hamming_distance(a, b)) / 130.0);
    }
}

TEST_CASE("same bucket bound under hausdorff quantization") {
    Rng rng = make_rng(43);
    const Dataset db = testutil::random_dataset(rng, 300, 3, 12, 0.0, 50.0);
    CodebookParams params;
    params.num_codebooks = 2;
    params.bits_per_codebook = 2;  // coarse buckets, many collisions
    params.prototype_size = 5;
    params.seed = 99;
    const CodebookSet cbs = build_codebook_set(db, params);

    const double eps = 1e-9 * 50.0;
    std::size_t pairs = 0;
    for (std::size_t m = 0; m < cbs.size() && pairs < 1000; ++m) {
        std::map<std::size_t, std::vector<std::size_t>> buckets;
        for (std::size_t i = 0; i < db.size(); ++i) {
            buckets[quantize(db[i].points(), cbs[m], Metric::kHausdorff)].push_back(i);
        }
        for (const auto& [bucket, members] : buckets) {
            for (std::size_t a = 0; a + 1 < members.size() && pairs < 1000; ++a) {
                const std::size_t i = members[a];
                const std::size_t j = members[a + 1];
                const double direct = hausdorff(db[i].points(), db[j].points());
                const double bound = quantization_error(db[i].points(), cbs[m], Metric::kHausdorff) +
                                     quantization_error(db[j].points(), cbs[m], Metric::kHausdorff);
                CHECK(direct <= bound + eps);
                ++pairs;
            }
        }
    }
    CHECK(pairs >= 500);  // enough same-bucket pairs actually exercised
}

TEST_CASE("quantize is invariant under global scaling") {
    Rng rng = make_rng(47);
    const Dataset db = testutil::random_dataset(rng, 32, 2, 10);
    CodebookParams params;
    params.num_codebooks = 1;
    params.bits_per_codebook = 4;
    params.prototype_size = 4;
    const CodebookSet cbs = build_codebook_set(db, params);

    for (const double s : {0.5, 3.7, 1000.0}) {
        // Scale every prototype and the query by s.
        std::vector<Prototype> scaled_protos;
        for (const auto& proto : cbs[0].prototypes()) {
            std::vector<double> coords = proto.coords();
            for (double& c : coords) {
                c *= s;
            }
            scaled_protos.emplace_back(proto.source_id(), std::move(coords), proto.dim());
        }
        const Codebook scaled_cb(std::move(scaled_protos));
        for (int iter = 0; iter < 50; ++iter) {
            const auto q = testutil::random_points(rng, 8, 2);
            auto qs = q;
            for (double& c : qs.coords) {
                c *= s;
            }
            for (const Metric metric : {Metric::kHausdorff, Metric::kDiscreteFrechet}) {
                CHECK(quantize(q.span(), cbs[0], metric) == quantize(qs.span(), scaled_cb, metric));
            }
        }
    }
}

TEST_CASE("pipeline oracle equivalence against an unpacked reference") {
    Rng rng = make_rng(53);
    const Dataset db = testutil::random_dataset(rng, 40, 2, 10);
    CodebookParams params;
    params.num_codebooks = 4;
    params.bits_per_codebook = 3;
    params.prototype_size = 5;
    params.seed = 7;
    const CodebookSet cbs = build_codebook_set(db, params);

    for (int iter = 0; iter < 1000; ++iter) {
        const Trajectory t = testutil::random_traj(rng, "q", "c", 10);
        const BinaryCode code = hash_trajectory(t, cbs);
        const std::vector<int> expected = naive_hash_bits(t, cbs);
        REQUIRE(code.length() == expected.size());
        for (std::size_t q = 0; q < expected.size(); ++q) {
            CHECK(code.bit(static_cast<std::uint32_t>(q)) == (expected[q] == 1));
        }
    }
}

}  // TEST_SUITE
