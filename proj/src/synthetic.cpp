#include "geopth/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "geopth/errors.hpp"
#include "geopth/rng.hpp"

namespace geopth {

namespace {

constexpr std::size_t kDim = 2;

void validate(const SyntheticSpec& spec) {
    if (spec.categories < 2) {
        throw ConfigError("synthetic data needs at least 2 categories, got " +
                          std::to_string(spec.categories));
    }
    if (spec.per_class == 0 || spec.template_length == 0) {
        throw ConfigError("synthetic per_class and template_length must be positive");
    }
    if (spec.noise_sigma < 0.0 || spec.center_spacing <= 0.0 || spec.template_extent <= 0.0) {
        throw ConfigError("synthetic noise_sigma must be >= 0, spacing and extent positive");
    }
}

// Template centers sit on a circle whose adjacent chord length equals the
// requested spacing, so the minimum center distance is exactly that spacing.
void class_center(const SyntheticSpec& spec, std::size_t c, double& cx, double& cy) {
    const double pi = std::numbers::pi;
    const double radius = spec.center_spacing / (2.0 * std::sin(pi / double(spec.categories)));
    const double angle = 2.0 * pi * double(c) / double(spec.categories);
    cx = radius * std::cos(angle);
    cy = radius * std::sin(angle);
}

// A rotated sine arc bounded by template_extent around the class center.
std::vector<double> make_template_coords(const SyntheticSpec& spec, std::size_t c, Rng& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double pi = std::numbers::pi;
    const double theta = 2.0 * pi * unit(rng);
    const double frequency = 1.0 + std::floor(3.0 * unit(rng));  // 1..3 half-waves
    const double phase = 2.0 * pi * unit(rng);
    const double amplitude = (0.3 + 0.2 * unit(rng)) * spec.template_extent;
    const double half_span = 0.85 * spec.template_extent;

    double cx = 0.0;
    double cy = 0.0;
    class_center(spec, c, cx, cy);

    const std::size_t len = spec.template_length;
    std::vector<double> coords;
    coords.reserve(len * kDim);
    for (std::size_t i = 0; i < len; ++i) {
        const double t = (len == 1) ? 0.5 : double(i) / double(len - 1);
        const double u = (2.0 * t - 1.0) * half_span;
        const double v = amplitude * std::sin(2.0 * pi * frequency * t + phase);
        coords.push_back(cx + std::cos(theta) * u - std::sin(theta) * v);
        coords.push_back(cy + std::sin(theta) * u + std::cos(theta) * v);
    }
    return coords;
}

}  // namespace

std::vector<Trajectory> synthetic_templates(const SyntheticSpec& spec) {
    validate(spec);
    std::vector<Trajectory> templates;
    templates.reserve(spec.categories);
    for (std::size_t c = 0; c < spec.categories; ++c) {
        // Stream 0 of each class draws the template; member streams follow.
        Rng rng = make_rng(derive_seed(derive_seed(spec.seed, c), 0));
        templates.emplace_back("template_c" + std::to_string(c), "c" + std::to_string(c),
                               make_template_coords(spec, c, rng), kDim);
    }
    return templates;
}

Dataset generate_synthetic(const SyntheticSpec& spec) {
    const std::vector<Trajectory> templates = synthetic_templates(spec);

    std::vector<Trajectory> trajectories;
    trajectories.reserve(spec.categories * spec.per_class);
    for (std::size_t c = 0; c < spec.categories; ++c) {
        const Trajectory& tmpl = templates[c];
        const std::size_t len = tmpl.size();
        for (std::size_t member = 0; member < spec.per_class; ++member) {
            Rng rng = make_rng(derive_seed(derive_seed(spec.seed, c), 1 + member));

            // Keep a random subsequence of at least half the template points.
            const std::size_t min_len = std::max<std::size_t>(1, (len + 1) / 2);
            const std::size_t mu =
                std::uniform_int_distribution<std::size_t>(min_len, len)(rng);
            std::vector<std::size_t> indices(len);
            std::iota(indices.begin(), indices.end(), std::size_t(0));
            for (std::size_t i = 0; i < mu; ++i) {
                const std::size_t j = i + uniform_index(rng, len - i);
                std::swap(indices[i], indices[j]);
            }
            indices.resize(mu);
            std::sort(indices.begin(), indices.end());

            std::normal_distribution<double> noise(0.0, spec.noise_sigma);
            std::vector<double> coords;
            coords.reserve(mu * kDim);
            for (const std::size_t pi : indices) {
                const PointView p = tmpl.point(pi);
                for (const double x : p) {
                    coords.push_back(spec.noise_sigma > 0.0 ? x + noise(rng) : x);
                }
            }
            trajectories.emplace_back("c" + std::to_string(c) + "_t" + std::to_string(member),
                                      tmpl.category(), std::move(coords), kDim);
        }
    }
    return Dataset(std::move(trajectories));
}

}  // namespace geopth
