#include "geopth/codebook.hpp"

#include <algorithm>
#include <numeric>

#include "geopth/errors.hpp"
#include "geopth/serial.hpp"

namespace geopth {

namespace {

constexpr char kMagic[4] = {'G', 'P', 'C', 'B'};
constexpr std::uint32_t kFormatVersion = 1;
constexpr std::uint32_t kMaxOmega = 30;

}  // namespace

Prototype::Prototype(std::string source_id, std::vector<double> coords, std::size_t dim)
    : source_id_(std::move(source_id)), coords_(std::move(coords)), dim_(dim) {
    if (dim_ == 0 || coords_.empty() || coords_.size() % dim_ != 0) {
        throw InputError("prototype from '" + source_id_ + "': malformed coordinate block");
    }
}

CodebookSet::CodebookSet(CodebookParams params, std::size_t dim, std::vector<Codebook> codebooks)
    : params_(params), dim_(dim), codebooks_(std::move(codebooks)) {
    if (codebooks_.size() != params_.num_codebooks) {
        throw InternalError("codebook count " + std::to_string(codebooks_.size()) +
                            " does not match M=" + std::to_string(params_.num_codebooks));
    }
    for (const auto& cb : codebooks_) {
        if (cb.size() != params_.codebook_size()) {
            throw InternalError("codebook size " + std::to_string(cb.size()) +
                                " does not match psi=" + std::to_string(params_.codebook_size()));
        }
    }
    fingerprint_ = fnv1a64(serialize_codebook_set(*this));
}

std::vector<std::size_t> sample_reference_trajectories(const Dataset& db, std::size_t count,
                                                       Rng& rng) {
    const std::size_t n = db.size();
    if (count > n) {
        throw ConfigError("cannot sample " + std::to_string(count) +
                          " distinct reference trajectories from a database of " +
                          std::to_string(n));
    }
    // Partial Fisher-Yates: uniform without replacement, order as drawn.
    std::vector<std::size_t> indices(n);
    std::iota(indices.begin(), indices.end(), std::size_t(0));
    for (std::size_t i = 0; i < count; ++i) {
        const std::size_t j = i + uniform_index(rng, n - i);
        std::swap(indices[i], indices[j]);
    }
    indices.resize(count);
    return indices;
}

Prototype build_prototype(const Trajectory& t, std::size_t k, Rng& rng) {
    if (k == 0) {
        throw ConfigError("prototype size k must be positive");
    }
    const std::size_t mu = t.size();
    const std::size_t dim = t.dim();
    std::vector<double> coords;
    if (mu <= k) {
        // Short trajectory: keep every point, original order.
        coords = t.coords();
    } else {
        std::vector<std::size_t> indices(mu);
        std::iota(indices.begin(), indices.end(), std::size_t(0));
        coords.reserve(k * dim);
        for (std::size_t i = 0; i < k; ++i) {
            const std::size_t j = i + uniform_index(rng, mu - i);
            std::swap(indices[i], indices[j]);
            const PointView p = t.point(indices[i]);
            coords.insert(coords.end(), p.begin(), p.end());
        }
    }
    return Prototype(t.id(), std::move(coords), dim);
}

CodebookSet build_codebook_set(const Dataset& db, const CodebookParams& params) {
    if (params.num_codebooks == 0) {
        throw ConfigError("number of codebooks M must be positive");
    }
    if (params.bits_per_codebook == 0 || params.bits_per_codebook > kMaxOmega) {
        throw ConfigError("bits per codebook omega must be in [1, " + std::to_string(kMaxOmega) +
                          "], got " + std::to_string(params.bits_per_codebook));
    }
    if (params.prototype_size == 0) {
        throw ConfigError("prototype size k must be positive");
    }
    const std::size_t psi = params.codebook_size();
    if (psi > db.size()) {
        throw ConfigError("codebook size psi=2^" + std::to_string(params.bits_per_codebook) + "=" +
                          std::to_string(psi) + " exceeds database size N=" +
                          std::to_string(db.size()));
    }

    std::vector<Codebook> codebooks;
    codebooks.reserve(params.num_codebooks);
    for (std::uint32_t m = 0; m < params.num_codebooks; ++m) {
        // One independent stream per quantizer; trajectory and point draws
        // share it in a fixed consumption order.
        Rng rng = make_rng(derive_seed(params.seed, m));
        const auto refs = sample_reference_trajectories(db, psi, rng);
        std::vector<Prototype> prototypes;
        prototypes.reserve(psi);
        for (const std::size_t idx : refs) {
            prototypes.push_back(build_prototype(db[idx], params.prototype_size, rng));
        }
        codebooks.emplace_back(std::move(prototypes));
    }
    return CodebookSet(params, db.dim(), std::move(codebooks));
}

std::vector<std::uint8_t> serialize_codebook_set(const CodebookSet& cbs) {
    ByteWriter w;
    w.raw(kMagic, sizeof(kMagic));
    w.u32(kFormatVersion);
    const CodebookParams& p = cbs.params();
    w.u32(p.num_codebooks);
    w.u32(p.bits_per_codebook);
    w.u32(p.prototype_size);
    w.u32(static_cast<std::uint32_t>(p.metric));
    w.u64(p.seed);
    w.u32(static_cast<std::uint32_t>(cbs.dim()));
    for (std::size_t m = 0; m < cbs.size(); ++m) {
        for (const Prototype& proto : cbs[m].prototypes()) {
            w.str(proto.source_id());
            w.u32(static_cast<std::uint32_t>(proto.size()));
            for (const double c : proto.coords()) {
                w.f64(c);
            }
        }
    }
    return w.take();
}

CodebookSet deserialize_codebook_set(const std::vector<std::uint8_t>& bytes) {
    ByteReader r(bytes.data(), bytes.size(), "codebook file");
    char magic[4];
    r.raw(magic, sizeof(magic));
    if (std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
        throw PersistenceError("codebook file: bad magic bytes");
    }
    const std::uint32_t version = r.u32();
    if (version != kFormatVersion) {
        throw PersistenceError("codebook file: format version " + std::to_string(version) +
                               " not supported (expected " + std::to_string(kFormatVersion) + ")");
    }
    CodebookParams p;
    p.num_codebooks = r.u32();
    p.bits_per_codebook = r.u32();
    p.prototype_size = r.u32();
    const std::uint32_t metric_id = r.u32();
    if (metric_id > static_cast<std::uint32_t>(Metric::kDiscreteFrechet)) {
        throw PersistenceError("codebook file: unknown metric id " + std::to_string(metric_id));
    }
    p.metric = static_cast<Metric>(metric_id);
    p.seed = r.u64();
    const std::uint32_t dim = r.u32();
    if (p.num_codebooks == 0 || p.bits_per_codebook == 0 || p.bits_per_codebook > kMaxOmega ||
        dim == 0) {
        throw PersistenceError("codebook file: invalid parameter block");
    }
    const std::size_t psi = p.codebook_size();

    std::vector<Codebook> codebooks;
    codebooks.reserve(p.num_codebooks);
    for (std::uint32_t m = 0; m < p.num_codebooks; ++m) {
        std::vector<Prototype> prototypes;
        prototypes.reserve(psi);
        for (std::size_t j = 0; j < psi; ++j) {
            std::string source_id = r.str();
            const std::uint32_t n_points = r.u32();
            if (n_points == 0) {
                throw PersistenceError("codebook file: empty prototype record");
            }
            std::vector<double> coords(static_cast<std::size_t>(n_points) * dim);
            for (double& c : coords) {
                c = r.f64();
            }
            prototypes.emplace_back(std::move(source_id), std::move(coords), dim);
        }
        codebooks.emplace_back(std::move(prototypes));
    }
    r.expect_end();
    return CodebookSet(p, dim, std::move(codebooks));
}

void save_codebook_set(const CodebookSet& cbs, const std::string& path) {
    write_file_bytes(path, serialize_codebook_set(cbs));
}

CodebookSet load_codebook_set(const std::string& path) {
    return deserialize_codebook_set(read_file_bytes(path));
}

}  // namespace geopth
