#pragma once

#include <cstdint>
#include <vector>

#include "geopth/binary_code.hpp"
#include "geopth/codebook.hpp"
#include "geopth/geometry.hpp"
#include "geopth/metrics.hpp"

namespace geopth {

/// 0-based index of the prototype nearest to the point set under the metric.
/// Ties break to the smallest index, so codes are reproducible.
std::size_t quantize(PointSpan points, const Codebook& cb, Metric metric);

/// Distance between the point set and its assigned prototype. Diagnostic for
/// the expected quantization error of one quantizer.
double quantization_error(PointSpan points, const Codebook& cb, Metric metric);

/// omega-bit block holding `index` (big-endian within the block). Throws
/// InternalError if the index does not fit, which indicates a corrupted
/// codebook.
std::uint64_t encode_index(std::size_t index, std::uint32_t omega);

/// Full hash: quantizes against each codebook in order and concatenates the
/// omega-bit blocks, quantizer 0 in the most significant block. Deterministic
/// for a fixed codebook set. Throws InputError on dimension mismatch.
BinaryCode hash_trajectory(const Trajectory& t, const CodebookSet& cbs);

/// Hashes every trajectory, parallel across trajectories. Output order and
/// content are independent of the worker count.
std::vector<BinaryCode> hash_dataset(const Dataset& db, const CodebookSet& cbs,
                                     unsigned workers = 1);

/// Mean quantization error over all (trajectory, codebook) pairs: a sampled
/// estimate of the expected quantization error of the whole hash function.
double mean_quantization_error(const Dataset& db, const CodebookSet& cbs, unsigned workers = 1);

}  // namespace geopth
