#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

namespace nqd {

/// Static 2-d tree over points in the complex plane. Nearest-neighbour
/// queries only; the point set is fixed at construction.
class KdTree {
 public:
  struct Hit {
    std::size_t index = 0;
    double distance = std::numeric_limits<double>::infinity();
  };

  KdTree() = default;

  explicit KdTree(std::vector<std::complex<double>> points) : points_(std::move(points)) {
    order_.resize(points_.size());
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    if (!points_.empty()) build(0, order_.size(), 0);
  }

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const std::complex<double>& point(std::size_t i) const { return points_[i]; }

  Hit nearest(std::complex<double> q) const {
    Hit best;
    if (points_.empty()) return best;
    double best_sq = std::numeric_limits<double>::infinity();
    search(0, order_.size(), 0, q, best, best_sq);
    best.distance = std::sqrt(best_sq);
    return best;
  }

 private:
  static double coord(const std::complex<double>& z, int axis) { return axis == 0 ? z.real() : z.imag(); }

  // Median split; the node for range [lo, hi) sits at mid = (lo + hi) / 2.
  void build(std::size_t lo, std::size_t hi, int axis) {
    if (hi - lo <= 1) return;
    const std::size_t mid = (lo + hi) / 2;
    std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(lo),
                     order_.begin() + static_cast<std::ptrdiff_t>(mid),
                     order_.begin() + static_cast<std::ptrdiff_t>(hi),
                     [&](std::size_t a, std::size_t b) { return coord(points_[a], axis) < coord(points_[b], axis); });
    build(lo, mid, 1 - axis);
    build(mid + 1, hi, 1 - axis);
  }

  void search(std::size_t lo, std::size_t hi, int axis, std::complex<double> q, Hit& best, double& best_sq) const {
    if (lo >= hi) return;
    const std::size_t mid = (lo + hi) / 2;
    const auto& p = points_[order_[mid]];
    const double d_sq = std::norm(p - q);
    if (d_sq < best_sq) {
      best_sq = d_sq;
      best.index = order_[mid];
    }
    const double diff = coord(q, axis) - coord(p, axis);
    const bool left_first = diff < 0.0;
    if (left_first) {
      search(lo, mid, 1 - axis, q, best, best_sq);
      if (diff * diff < best_sq) search(mid + 1, hi, 1 - axis, q, best, best_sq);
    } else {
      search(mid + 1, hi, 1 - axis, q, best, best_sq);
      if (diff * diff < best_sq) search(lo, mid, 1 - axis, q, best, best_sq);
    }
  }

  std::vector<std::complex<double>> points_;
  std::vector<std::size_t> order_;
};

}  // namespace nqd
