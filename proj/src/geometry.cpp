#include "geopth/geometry.hpp"

#include <cmath>
#include <unordered_set>

#include "geopth/errors.hpp"

namespace geopth {

Trajectory::Trajectory(std::string id, std::string category, std::vector<double> coords,
                       std::size_t dim)
    : id_(std::move(id)), category_(std::move(category)), coords_(std::move(coords)), dim_(dim) {
    if (dim_ == 0) {
        throw InputError("trajectory '" + id_ + "': dimension must be positive");
    }
    if (coords_.empty()) {
        throw InputError("trajectory '" + id_ + "': must contain at least one point");
    }
    if (coords_.size() % dim_ != 0) {
        throw InputError("trajectory '" + id_ + "': coordinate count " +
                         std::to_string(coords_.size()) + " is not a multiple of dimension " +
                         std::to_string(dim_));
    }
    for (std::size_t i = 0; i < coords_.size(); ++i) {
        if (!std::isfinite(coords_[i])) {
            throw InputError("trajectory '" + id_ + "': non-finite coordinate at point " +
                             std::to_string(i / dim_));
        }
    }
}

Dataset::Dataset(std::vector<Trajectory> trajectories) : trajectories_(std::move(trajectories)) {
    if (trajectories_.empty()) {
        throw InputError("dataset must contain at least one trajectory");
    }
    dim_ = trajectories_.front().dim();
    std::unordered_set<std::string> seen;
    seen.reserve(trajectories_.size());
    for (const auto& t : trajectories_) {
        if (t.dim() != dim_) {
            throw InputError("trajectory '" + t.id() + "': dimension " + std::to_string(t.dim()) +
                             " differs from dataset dimension " + std::to_string(dim_));
        }
        if (!seen.insert(t.id()).second) {
            throw InputError("duplicate trajectory id '" + t.id() + "'");
        }
        ++category_counts_[t.category()];
    }
}

}  // namespace geopth
