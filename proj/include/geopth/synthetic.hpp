#pragma once

#include <cstdint>
#include <vector>

#include "geopth/geometry.hpp"

namespace geopth {

/// Desk-scale labeled data: C smooth template curves placed on well-separated
/// centers; class members are noisy subsamples of their template. The ratio
/// of center_spacing to noise_sigma controls retrieval difficulty.
struct SyntheticSpec {
    std::size_t categories = 5;        // C, at least 2
    std::size_t per_class = 100;
    std::size_t template_length = 100;
    double noise_sigma = 0.5;          // per-coordinate Gaussian noise
    std::uint64_t seed = 0;
    double center_spacing = 10.0;      // distance between adjacent template centers
    double template_extent = 1.0;      // max template radius around its center
};

/// The C noiseless template trajectories (category label per template).
/// Deterministic in (categories, template_length, seed); members generated by
/// generate_synthetic are derived from these exact templates.
std::vector<Trajectory> synthetic_templates(const SyntheticSpec& spec);

/// categories * per_class labeled trajectories, 2-D. Each member subsamples
/// its template (at least half the points, order preserved) and perturbs each
/// coordinate with N(0, noise_sigma^2). With noise_sigma = 0 members equal
/// their template up to subsampling.
Dataset generate_synthetic(const SyntheticSpec& spec);

}  // namespace geopth
