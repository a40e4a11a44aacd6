#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "geopth/geometry.hpp"
#include "geopth/metrics.hpp"
#include "geopth/rng.hpp"

namespace geopth {

/// Unordered set of up to k points sampled from one reference trajectory.
/// One codebook entry. The stored point order is the sampling draw order; it
/// carries no sequence semantics, but order-sensitive metrics treat it as the
/// sequence by convention.
class Prototype {
public:
    Prototype(std::string source_id, std::vector<double> coords, std::size_t dim);

    const std::string& source_id() const { return source_id_; }
    std::size_t size() const { return coords_.size() / dim_; }
    std::size_t dim() const { return dim_; }
    PointSpan points() const { return PointSpan(coords_.data(), size(), dim_); }
    const std::vector<double>& coords() const { return coords_; }

private:
    std::string source_id_;
    std::vector<double> coords_;
    std::size_t dim_;
};

/// Ordered list of exactly psi = 2^omega prototypes; one omega-bit quantizer.
/// Prototype j is addressed by its 0-based position, which is the draw order.
class Codebook {
public:
    explicit Codebook(std::vector<Prototype> prototypes) : prototypes_(std::move(prototypes)) {}

    std::size_t size() const { return prototypes_.size(); }
    const Prototype& operator[](std::size_t j) const { return prototypes_[j]; }
    const std::vector<Prototype>& prototypes() const { return prototypes_; }

private:
    std::vector<Prototype> prototypes_;
};

/// Hash-function parameters. Code length L = num_codebooks * bits_per_codebook
/// and codebook size psi = 2^bits_per_codebook are derived.
struct CodebookParams {
    std::uint32_t num_codebooks = 16;      // M
    std::uint32_t bits_per_codebook = 4;   // omega
    std::uint32_t prototype_size = 10;     // k
    Metric metric = Metric::kHausdorff;    // quantization metric
    std::uint64_t seed = 0;

    std::uint32_t code_length() const { return num_codebooks * bits_per_codebook; }
    std::size_t codebook_size() const { return std::size_t(1) << bits_per_codebook; }
};

/// M codebooks plus the parameters that built them: the complete hash
/// function. Immutable once built; a fingerprint over the serialized form
/// binds downstream artifacts to this exact instance.
class CodebookSet {
public:
    CodebookSet(CodebookParams params, std::size_t dim, std::vector<Codebook> codebooks);

    const CodebookParams& params() const { return params_; }
    std::size_t dim() const { return dim_; }
    std::size_t size() const { return codebooks_.size(); }
    const Codebook& operator[](std::size_t m) const { return codebooks_[m]; }
    std::uint32_t code_length() const { return params_.code_length(); }

    /// FNV-1a digest of the serialized bytes.
    std::uint64_t fingerprint() const { return fingerprint_; }

private:
    CodebookParams params_;
    std::size_t dim_;
    std::vector<Codebook> codebooks_;
    std::uint64_t fingerprint_;
};

/// Draws `count` distinct trajectory indices uniformly without replacement,
/// in draw order. Throws ConfigError if count exceeds the database size.
std::vector<std::size_t> sample_reference_trajectories(const Dataset& db, std::size_t count,
                                                       Rng& rng);

/// Samples min(k, trajectory length) distinct points uniformly without
/// replacement. Trajectories no longer than k contribute all their points in
/// original order. Throws ConfigError if k is zero.
Prototype build_prototype(const Trajectory& t, std::size_t k, Rng& rng);

/// Builds the full hash function: M codebooks of psi prototypes each, every
/// codebook drawn from its own sub-stream of params.seed so the build replays
/// from one integer. Throws ConfigError when psi = 2^omega exceeds the
/// database size.
CodebookSet build_codebook_set(const Dataset& db, const CodebookParams& params);

std::vector<std::uint8_t> serialize_codebook_set(const CodebookSet& cbs);
CodebookSet deserialize_codebook_set(const std::vector<std::uint8_t>& bytes);

void save_codebook_set(const CodebookSet& cbs, const std::string& path);
CodebookSet load_codebook_set(const std::string& path);

}  // namespace geopth
