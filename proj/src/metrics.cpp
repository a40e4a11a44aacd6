#include "geopth/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "geopth/errors.hpp"

namespace geopth {

namespace {

void check_pair(PointSpan a, PointSpan b, const char* op) {
    if (a.empty() || b.empty()) {
        throw InputError(std::string(op) + ": inputs must be non-empty");
    }
    if (a.dim() != b.dim()) {
        throw InputError(std::string(op) + ": dimension mismatch (" + std::to_string(a.dim()) +
                         " vs " + std::to_string(b.dim()) + ")");
    }
}

inline double squared_distance(const double* a, const double* b, std::size_t dim) {
    double s = 0.0;
    for (std::size_t i = 0; i < dim; ++i) {
        const double diff = a[i] - b[i];
        s += diff * diff;
    }
    return s;
}

// max over a of min over b, on squared distances. The early break skips the
// rest of a row once some pair falls below the running max; such a row cannot
// raise the max, so the result is exact.
double directed_hausdorff_sq(PointSpan a, PointSpan b) {
    const std::size_t dim = a.dim();
    double cmax = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double* pa = a.data() + i * dim;
        double cmin = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < b.size(); ++j) {
            const double d = squared_distance(pa, b.data() + j * dim, dim);
            if (d < cmax) {
                cmin = d;
                break;
            }
            if (d < cmin) {
                cmin = d;
            }
        }
        if (cmin > cmax) {
            cmax = cmin;
        }
    }
    return cmax;
}

}  // namespace

std::string metric_name(Metric metric) {
    switch (metric) {
        case Metric::kHausdorff:
            return "hausdorff";
        case Metric::kDtw:
            return "dtw";
        case Metric::kDiscreteFrechet:
            return "frechet";
    }
    throw InternalError("unknown metric id " + std::to_string(static_cast<std::uint32_t>(metric)));
}

Metric parse_metric(const std::string& name) {
    if (name == "hausdorff") {
        return Metric::kHausdorff;
    }
    if (name == "dtw") {
        return Metric::kDtw;
    }
    if (name == "frechet" || name == "discrete_frechet") {
        return Metric::kDiscreteFrechet;
    }
    throw ConfigError("unknown metric '" + name + "' (expected hausdorff, dtw or frechet)");
}

double euclidean_distance(PointView a, PointView b) {
    if (a.size() != b.size()) {
        throw InputError("euclidean_distance: dimension mismatch (" + std::to_string(a.size()) +
                         " vs " + std::to_string(b.size()) + ")");
    }
    return std::sqrt(squared_distance(a.data(), b.data(), a.size()));
}

double directed_hausdorff(PointSpan a, PointSpan b) {
    check_pair(a, b, "directed_hausdorff");
    return std::sqrt(directed_hausdorff_sq(a, b));
}

double hausdorff(PointSpan a, PointSpan b) {
    check_pair(a, b, "hausdorff");
    return std::sqrt(std::max(directed_hausdorff_sq(a, b), directed_hausdorff_sq(b, a)));
}

double dtw(PointSpan a, PointSpan b) {
    check_pair(a, b, "dtw");
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    const std::size_t dim = a.dim();
    const double inf = std::numeric_limits<double>::infinity();

    // Rolling rows of the cumulative-cost table.
    std::vector<double> prev(m + 1, inf);
    std::vector<double> curr(m + 1, inf);
    prev[0] = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        const double* pa = a.data() + (i - 1) * dim;
        curr[0] = inf;
        for (std::size_t j = 1; j <= m; ++j) {
            const double cost = std::sqrt(squared_distance(pa, b.data() + (j - 1) * dim, dim));
            curr[j] = cost + std::min({prev[j], curr[j - 1], prev[j - 1]});
        }
        std::swap(prev, curr);
    }
    return prev[m];
}

double discrete_frechet(PointSpan a, PointSpan b) {
    check_pair(a, b, "discrete_frechet");
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    const std::size_t dim = a.dim();
    const double inf = std::numeric_limits<double>::infinity();

    std::vector<double> prev(m, inf);
    std::vector<double> curr(m, inf);
    for (std::size_t i = 0; i < n; ++i) {
        const double* pa = a.data() + i * dim;
        for (std::size_t j = 0; j < m; ++j) {
            const double d = std::sqrt(squared_distance(pa, b.data() + j * dim, dim));
            double reach;
            if (i == 0 && j == 0) {
                reach = d;
            } else if (i == 0) {
                reach = std::max(curr[j - 1], d);
            } else if (j == 0) {
                reach = std::max(prev[0], d);
            } else {
                reach = std::max(std::min({prev[j], prev[j - 1], curr[j - 1]}), d);
            }
            curr[j] = reach;
        }
        std::swap(prev, curr);
    }
    return prev[m - 1];
}

double point_set_distance(PointSpan a, PointSpan b, Metric metric) {
    switch (metric) {
        case Metric::kHausdorff:
            return hausdorff(a, b);
        case Metric::kDtw:
            return dtw(a, b);
        case Metric::kDiscreteFrechet:
            return discrete_frechet(a, b);
    }
    throw InternalError("unknown metric id " + std::to_string(static_cast<std::uint32_t>(metric)));
}

}  // namespace geopth
