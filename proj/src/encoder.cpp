#include "geopth/encoder.hpp"

#include <limits>

#include "geopth/errors.hpp"
#include "geopth/parallel.hpp"

namespace geopth {

std::size_t quantize(PointSpan points, const Codebook& cb, Metric metric) {
    std::size_t best = 0;
    double best_dist = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < cb.size(); ++j) {
        const double d = point_set_distance(points, cb[j].points(), metric);
        if (d < best_dist) {
            best_dist = d;
            best = j;
        }
    }
    return best;
}

double quantization_error(PointSpan points, const Codebook& cb, Metric metric) {
    const std::size_t j = quantize(points, cb, metric);
    return point_set_distance(points, cb[j].points(), metric);
}

std::uint64_t encode_index(std::size_t index, std::uint32_t omega) {
    if (omega == 0 || omega > 63 || index >= (std::uint64_t(1) << omega)) {
        throw InternalError("prototype index " + std::to_string(index) +
                            " does not fit in an omega=" + std::to_string(omega) + " bit block");
    }
    return static_cast<std::uint64_t>(index);
}

BinaryCode hash_trajectory(const Trajectory& t, const CodebookSet& cbs) {
    if (t.dim() != cbs.dim()) {
        throw InputError("hash_trajectory: trajectory '" + t.id() + "' has dimension " +
                         std::to_string(t.dim()) + " but the codebook set expects " +
                         std::to_string(cbs.dim()));
    }
    const std::uint32_t omega = cbs.params().bits_per_codebook;
    const Metric metric = cbs.params().metric;
    BinaryCode code(cbs.code_length());
    for (std::size_t m = 0; m < cbs.size(); ++m) {
        const std::size_t j = quantize(t.points(), cbs[m], metric);
        code.set_block(static_cast<std::uint32_t>(m) * omega, omega, encode_index(j, omega));
    }
    return code;
}

std::vector<BinaryCode> hash_dataset(const Dataset& db, const CodebookSet& cbs, unsigned workers) {
    std::vector<BinaryCode> codes(db.size());
    parallel_for(db.size(), workers, [&](std::size_t i) { codes[i] = hash_trajectory(db[i], cbs); });
    return codes;
}

double mean_quantization_error(const Dataset& db, const CodebookSet& cbs, unsigned workers) {
    const Metric metric = cbs.params().metric;
    std::vector<double> per_trajectory(db.size(), 0.0);
    parallel_for(db.size(), workers, [&](std::size_t i) {
        double sum = 0.0;
        for (std::size_t m = 0; m < cbs.size(); ++m) {
            sum += quantization_error(db[i].points(), cbs[m], metric);
        }
        per_trajectory[i] = sum;
    });
    // Fixed summation order keeps the value independent of the worker count.
    double total = 0.0;
    for (const double v : per_trajectory) {
        total += v;
    }
    return total / (static_cast<double>(db.size()) * static_cast<double>(cbs.size()));
}

}  // namespace geopth
