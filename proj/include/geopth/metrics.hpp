#pragma once

#include <cstdint>
#include <string>

#include "geopth/geometry.hpp"

namespace geopth {

/// Point-set / sequence distance used for quantization and brute-force
/// ranking. Hausdorff is the default; DTW and discrete Frechet are the
/// swappable alternatives.
enum class Metric : std::uint32_t {
    kHausdorff = 0,
    kDtw = 1,
    kDiscreteFrechet = 2,
};

std::string metric_name(Metric metric);

/// Accepts "hausdorff", "dtw", "frechet" (and "discrete_frechet").
Metric parse_metric(const std::string& name);

/// L2 norm of a - b. Throws InputError on dimension mismatch.
double euclidean_distance(PointView a, PointView b);

/// max over p in a of the distance from p to its nearest point of b.
/// Not symmetric. Zero iff a is a subset of b. Throws InputError on empty
/// input or dimension mismatch.
double directed_hausdorff(PointSpan a, PointSpan b);

/// max(directed_hausdorff(a, b), directed_hausdorff(b, a)). Symmetric, and a
/// true metric on point sets, so it satisfies the triangle inequality.
double hausdorff(PointSpan a, PointSpan b);

/// Dynamic time warping: minimal total cost over monotone warping paths,
/// full alignment (no window), Euclidean local cost, sum aggregation.
/// Order-sensitive.
double dtw(PointSpan a, PointSpan b);

/// Discrete Frechet distance: minimal over monotone couplings of the maximal
/// coupled-pair distance. Order-sensitive.
double discrete_frechet(PointSpan a, PointSpan b);

/// Dispatch on the metric selector.
double point_set_distance(PointSpan a, PointSpan b, Metric metric);

}  // namespace geopth
