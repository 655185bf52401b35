#include "okm/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace okm {

namespace {

void check_scale(double scale) {
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw std::invalid_argument("MetricSpace: scale must be a positive finite real");
    }
}

}  // namespace

MetricSpace MetricSpace::euclidean(std::vector<std::vector<double>> coords, double scale) {
    check_scale(scale);
    MetricSpace s;
    s.euclidean_ = true;
    s.scale_ = scale;
    s.dim_ = coords.empty() ? 0 : coords.front().size();
    for (const auto& c : coords) {
        if (s.dim_ == 0) s.dim_ = c.size();
        if (c.size() != s.dim_ || c.empty()) {
            throw std::invalid_argument("MetricSpace: inconsistent or empty coordinate vectors");
        }
        for (double x : c) {
            if (!std::isfinite(x)) throw std::invalid_argument("MetricSpace: non-finite coordinate");
        }
        s.data_.insert(s.data_.end(), c.begin(), c.end());
    }
    s.size_ = coords.size();
    return s;
}

MetricSpace MetricSpace::explicit_matrix(std::vector<std::vector<double>> matrix, double scale) {
    check_scale(scale);
    MetricSpace s;
    s.euclidean_ = false;
    s.scale_ = scale;
    const std::size_t n = matrix.size();
    s.size_ = n;
    s.data_.resize(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        if (matrix[i].size() != n) {
            throw std::invalid_argument("MetricSpace: distance matrix must be square");
        }
        for (std::size_t j = 0; j < n; ++j) {
            const double d = matrix[i][j];
            if (!std::isfinite(d) || d < 0.0) {
                throw std::invalid_argument("MetricSpace: distances must be finite and >= 0");
            }
            if (i == j && d != 0.0) {
                throw std::invalid_argument("MetricSpace: diagonal of distance matrix must be zero");
            }
            if (j < i && matrix[j][i] != d) {
                throw std::invalid_argument("MetricSpace: distance matrix must be symmetric");
            }
            s.data_[i * n + j] = d;
        }
    }
    return s;
}

std::size_t MetricSpace::dimension() const {
    if (!euclidean_) throw std::logic_error("MetricSpace: dimension() requires euclidean mode");
    return dim_;
}

PointId MetricSpace::append(const std::vector<double>& point) {
    if (!euclidean_) throw std::logic_error("MetricSpace: append() requires euclidean mode");
    if (size_ == 0 && dim_ == 0) dim_ = point.size();
    if (point.size() != dim_ || point.empty()) {
        throw std::invalid_argument("MetricSpace: appended point has wrong dimension");
    }
    for (double x : point) {
        if (!std::isfinite(x)) throw std::invalid_argument("MetricSpace: non-finite coordinate");
    }
    data_.insert(data_.end(), point.begin(), point.end());
    bounds_key_.clear();
    return static_cast<PointId>(size_++);
}

void MetricSpace::check_id(PointId u) const {
    if (u >= size_) {
        throw std::out_of_range("MetricSpace: point id " + std::to_string(u) +
                                " out of range (size " + std::to_string(size_) + ")");
    }
}

const double* MetricSpace::coords_of(PointId u) const {
    return data_.data() + static_cast<std::size_t>(u) * dim_;
}

double MetricSpace::distance(PointId u, PointId v) const {
    check_id(u);
    check_id(v);
    if (!euclidean_) return scale_ * data_[static_cast<std::size_t>(u) * size_ + v];
    if (u == v) return 0.0;
    const double* a = coords_of(u);
    const double* b = coords_of(v);
    double sq = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
        const double diff = a[i] - b[i];
        sq += diff * diff;
    }
    return scale_ * std::sqrt(sq);
}

double MetricSpace::truncated(PointId u, PointId v, double p) const {
    if (p < 0.0) throw std::invalid_argument("MetricSpace: penalty must be >= 0");
    return std::min(distance(u, v), p);
}

std::pair<double, double> MetricSpace::diameter_bounds(std::span<const PointId> ids) const {
    if (ids.size() < 2) {
        throw std::invalid_argument("MetricSpace: diameter_bounds needs at least 2 ids");
    }
    if (bounds_key_.size() == ids.size() &&
        std::equal(bounds_key_.begin(), bounds_key_.end(), ids.begin())) {
        return bounds_value_;
    }
    double min_pos = std::numeric_limits<double>::infinity();
    double max_d = 0.0;
    for (std::size_t i = 0; i < ids.size(); ++i) {
        for (std::size_t j = i + 1; j < ids.size(); ++j) {
            const double d = distance(ids[i], ids[j]);
            if (d > 0.0 && d < min_pos) min_pos = d;
            if (d > max_d) max_d = d;
        }
    }
    if (!std::isfinite(min_pos)) min_pos = 0.0;  // all pairs coincide
    bounds_key_.assign(ids.begin(), ids.end());
    bounds_value_ = {min_pos, max_d};
    return bounds_value_;
}

}  // namespace okm
