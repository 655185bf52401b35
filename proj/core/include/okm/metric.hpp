#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace okm {

// Dense, zero-based identifier of a point; stable for the lifetime of a run.
using PointId = std::uint32_t;
inline constexpr PointId kNoPoint = static_cast<PointId>(-1);

// Point storage and distance evaluation.
//
// Two modes:
//  - euclidean: per-point coordinate vectors; distance is the scaled L2 norm.
//    Points can be appended (single writer; appends must not overlap queries).
//  - explicit: a full symmetric matrix with zero diagonal, for small test
//    metrics that are not realizable by coordinates.
//
// Every distance is multiplied by `scale`, so fixtures can realize exact
// integer metrics while datasets keep their native units.
class MetricSpace {
public:
    static MetricSpace euclidean(std::vector<std::vector<double>> coords,
                                 double scale = 1.0);
    static MetricSpace explicit_matrix(std::vector<std::vector<double>> matrix,
                                       double scale = 1.0);

    bool is_euclidean() const { return euclidean_; }
    std::size_t size() const { return size_; }
    std::size_t dimension() const;  // euclidean mode only
    double scale() const { return scale_; }

    // Euclidean mode only. Returns the id of the new point.
    PointId append(const std::vector<double>& point);

    double distance(PointId u, PointId v) const;

    // min(distance(u, v), p); the metric truncated at penalty p.
    double truncated(PointId u, PointId v, double p) const;

    // Smallest strictly positive pairwise distance and largest pairwise
    // distance over `ids` (full scan, |ids| >= 2). Reporting only; the result
    // for the most recent id set is memoized.
    std::pair<double, double> diameter_bounds(std::span<const PointId> ids) const;

private:
    MetricSpace() = default;

    const double* coords_of(PointId u) const;
    void check_id(PointId u) const;

    bool euclidean_ = true;
    std::size_t size_ = 0;
    std::size_t dim_ = 0;
    double scale_ = 1.0;
    std::vector<double> data_;  // coords (size*dim) or matrix (size*size)

    mutable std::vector<PointId> bounds_key_;
    mutable std::pair<double, double> bounds_value_{0.0, 0.0};
};

}  // namespace okm
