#pragma once

#include <algorithm>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <vector>

namespace lwos {

/// Finite sorted list of nonnegative points.
class PointSample {
 public:
  PointSample() = default;
  explicit PointSample(std::vector<double> points) : points_(std::move(points)) {
    std::sort(points_.begin(), points_.end());
    if (!points_.empty() && !(points_.front() >= 0.0)) throw std::invalid_argument("PointSample: negative point");
  }

  const std::vector<double>& points() const noexcept { return points_; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }
  double operator[](std::size_t k) const { return points_[k]; }

  /// Smallest point, or +inf when empty.
  double first() const noexcept { return points_.empty() ? std::numeric_limits<double>::infinity() : points_.front(); }
  /// Largest point, or 0 when empty.
  double last() const noexcept { return points_.empty() ? 0.0 : points_.back(); }

  /// Number of points <= v.
  std::size_t count_le(double v) const {
    return static_cast<std::size_t>(std::upper_bound(points_.begin(), points_.end(), v) - points_.begin());
  }

  /// Spacings from 0: p_1 - 0, p_2 - p_1, ...
  std::vector<double> spacings() const {
    std::vector<double> out(points_.size());
    double prev = 0.0;
    for (std::size_t k = 0; k < points_.size(); ++k) {
      out[k] = points_[k] - prev;
      prev = points_[k];
    }
    return out;
  }

 private:
  std::vector<double> points_;
};

}  // namespace lwos
