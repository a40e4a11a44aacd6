#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace geopth {

/// One d-dimensional point, viewed as a span of coordinates.
using PointView = std::span<const double>;

/// Non-owning view of a collection of d-dimensional points stored row-major.
/// Both trajectories (ordered) and prototypes (unordered) expose this view,
/// so the point-set metrics operate on either.
class PointSpan {
public:
    PointSpan(const double* data, std::size_t count, std::size_t dim)
        : data_(data), count_(count), dim_(dim) {}

    std::size_t size() const { return count_; }
    std::size_t dim() const { return dim_; }
    bool empty() const { return count_ == 0; }
    const double* data() const { return data_; }

    PointView operator[](std::size_t i) const { return PointView(data_ + i * dim_, dim_); }

private:
    const double* data_;
    std::size_t count_;
    std::size_t dim_;
};

/// Time-ordered point sequence with an id and a category label. Point order
/// is preserved exactly as ingested. All coordinates are finite and every
/// point has the same dimension; both are checked at construction.
class Trajectory {
public:
    /// coords is row-major, length = point count * dim. Throws InputError on
    /// empty input, non-finite coordinates, or a length not divisible by dim.
    Trajectory(std::string id, std::string category, std::vector<double> coords, std::size_t dim);

    const std::string& id() const { return id_; }
    const std::string& category() const { return category_; }
    std::size_t size() const { return coords_.size() / dim_; }
    std::size_t dim() const { return dim_; }

    PointView point(std::size_t i) const { return PointView(coords_.data() + i * dim_, dim_); }
    PointSpan points() const { return PointSpan(coords_.data(), size(), dim_); }
    const std::vector<double>& coords() const { return coords_; }

private:
    std::string id_;
    std::string category_;
    std::vector<double> coords_;
    std::size_t dim_;
};

/// Immutable collection of trajectories sharing one dimension, with unique
/// ids and a category inventory. Trajectory order is ingestion order and is
/// load-bearing: ranking ties are broken by it.
class Dataset {
public:
    /// Throws InputError on an empty list, mixed dimensions, or duplicate ids.
    explicit Dataset(std::vector<Trajectory> trajectories);

    std::size_t size() const { return trajectories_.size(); }
    std::size_t dim() const { return dim_; }
    const Trajectory& operator[](std::size_t i) const { return trajectories_[i]; }
    const std::vector<Trajectory>& trajectories() const { return trajectories_; }

    /// Distinct category labels with their trajectory counts, sorted by label.
    const std::map<std::string, std::size_t>& category_counts() const { return category_counts_; }
    std::size_t category_count() const { return category_counts_.size(); }

private:
    std::vector<Trajectory> trajectories_;
    std::map<std::string, std::size_t> category_counts_;
    std::size_t dim_;
};

}  // namespace geopth
