#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "nqd/errors.hpp"
#include "nqd/kdtree.hpp"

namespace nqd {

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
inline constexpr cplx kI{0.0, 1.0};

/// Speeds |z'(t)| at or below this are treated as a degenerate parameterization.
inline constexpr double kDegenerateSpeed = 1e-12;

enum class CurveKind { Closed, Unbounded };

/// Parameterization of a boundary curve together with its first two derivatives.
struct CurveParam {
  std::function<cplx(double)> z;
  std::function<cplx(double)> dz;
  std::function<cplx(double)> d2z;
};

/// One smooth oriented boundary curve of a domain. Closed curves are
/// parameterized over [0, 2pi) periodically; unbounded curves over the real
/// line, truncated to [-t_max, t_max] for numerical work, with the limits
/// c_minus / c_plus of the conjugate unit tangent at the two ends.
class CurveComponent {
 public:
  static CurveComponent closed(std::string label, CurveParam param) {
    CurveComponent c(CurveKind::Closed, std::move(label), std::move(param));
    c.t_max_ = kPi;
    return c;
  }

  /// Asymptotic conjugate-tangent values are estimated from the ends of the
  /// window when not supplied.
  static CurveComponent unbounded(std::string label, CurveParam param, double t_max,
                                  std::optional<cplx> c_minus = std::nullopt,
                                  std::optional<cplx> c_plus = std::nullopt) {
    if (!(t_max > 0.0) || !std::isfinite(t_max)) throw DomainError("unbounded component '" + label + "': t_max must be positive");
    CurveComponent c(CurveKind::Unbounded, std::move(label), std::move(param));
    c.t_max_ = t_max;
    c.c_minus_ = c_minus ? unit(*c_minus) : c.tail_average(-1);
    c.c_plus_ = c_plus ? unit(*c_plus) : c.tail_average(+1);
    c.asymptotic_threshold_ = c.compute_threshold();
    return c;
  }

  CurveKind kind() const { return kind_; }
  bool is_closed() const { return kind_ == CurveKind::Closed; }
  const std::string& label() const { return label_; }

  cplx point(double t) const { return param_.z(t); }
  cplx deriv(double t) const { return param_.dz(t); }
  cplx deriv2(double t) const { return param_.d2z(t); }

  /// Parameter window used for sampling: [0, 2pi] for closed curves.
  double t_lo() const { return is_closed() ? 0.0 : -t_max_; }
  double t_hi() const { return is_closed() ? kTwoPi : t_max_; }
  double t_max() const { return t_max_; }

  cplx c_minus() const { return c_minus_; }
  cplx c_plus() const { return c_plus_; }

  /// |t| beyond which |conj T(t) - c_{+/-}| is nonincreasing on the window.
  double asymptotic_threshold() const { return asymptotic_threshold_; }

  CurveComponent reversed() const {
    CurveComponent c = *this;
    auto p = param_;
    c.param_.z = [p](double t) { return p.z(-t); };
    c.param_.dz = [p](double t) { return -p.dz(-t); };
    c.param_.d2z = [p](double t) { return p.d2z(-t); };
    if (!is_closed()) {
      c.c_minus_ = -c_plus_;
      c.c_plus_ = -c_minus_;
    }
    return c;
  }

  /// Image under z -> rotation * z + shift, |rotation| = 1.
  CurveComponent mapped(cplx rotation, cplx shift) const {
    CurveComponent c = *this;
    auto p = param_;
    c.param_.z = [p, rotation, shift](double t) { return rotation * p.z(t) + shift; };
    c.param_.dz = [p, rotation](double t) { return rotation * p.dz(t); };
    c.param_.d2z = [p, rotation](double t) { return rotation * p.d2z(t); };
    c.c_minus_ = std::conj(rotation) * c_minus_;
    c.c_plus_ = std::conj(rotation) * c_plus_;
    return c;
  }

 private:
  CurveComponent(CurveKind kind, std::string label, CurveParam param)
      : kind_(kind), label_(std::move(label)), param_(std::move(param)) {
    if (!param_.z || !param_.dz || !param_.d2z) throw MalformedCurve("component '" + label_ + "': missing parameterization");
  }

  static cplx unit(cplx c) {
    const double r = std::abs(c);
    if (!(r > 0.0)) throw DomainError("asymptotic tangent value must be nonzero");
    return c / r;
  }

  cplx conj_tangent(double t) const { return std::conj(param_.dz(t) / std::abs(param_.dz(t))); }

  cplx tail_average(int end) const {
    cplx acc{0.0, 0.0};
    constexpr int kSamples = 16;
    for (int k = 0; k < kSamples; ++k) {
      const double t = end * t_max_ * (0.95 + 0.05 * k / (kSamples - 1));
      acc += conj_tangent(t);
    }
    return unit(acc);
  }

  double compute_threshold() const {
    constexpr int kSamples = 256;
    double threshold = 0.0;
    for (int end : {-1, +1}) {
      const cplx limit = end < 0 ? c_minus_ : c_plus_;
      double prev = std::abs(conj_tangent(end * t_max_) - limit);
      double end_threshold = t_max_;
      // Walk inward from the end of the window while the deviation keeps
      // growing (i.e. decreases monotonically towards the end).
      for (int k = kSamples - 1; k >= 0; --k) {
        const double t = end * t_max_ * static_cast<double>(k) / kSamples;
        const double dev = std::abs(conj_tangent(t) - limit);
        if (dev + 1e-14 < prev) break;
        end_threshold = std::abs(t);
        prev = dev;
      }
      threshold = std::max(threshold, end_threshold);
    }
    return threshold;
  }

  CurveKind kind_;
  std::string label_;
  CurveParam param_;
  double t_max_ = 0.0;
  cplx c_minus_{1.0, 0.0};
  cplx c_plus_{1.0, 0.0};
  double asymptotic_threshold_ = 0.0;
};

/// Unit tangent z'(t) / |z'(t)|.
inline cplx tangent_at(const CurveComponent& c, double t) {
  const cplx d = c.deriv(t);
  const double speed = std::abs(d);
  if (!(speed > kDegenerateSpeed) || !std::isfinite(speed))
    throw MalformedCurve("component '" + c.label() + "': degenerate derivative at t = " + std::to_string(t));
  return d / speed;
}

/// i T: points into the domain under the Omega-on-the-left convention.
inline cplx inward_normal_at(const CurveComponent& c, double t) { return kI * tangent_at(c, t); }

/// Signed curvature Im(conj(z') z'') / |z'|^3.
inline double curvature_at(const CurveComponent& c, double t) {
  const cplx d = c.deriv(t);
  const double speed = std::abs(d);
  if (!(speed > kDegenerateSpeed)) throw MalformedCurve("component '" + c.label() + "': degenerate derivative");
  return std::imag(std::conj(d) * c.deriv2(t)) / (speed * speed * speed);
}

/// d/dt of the conjugate unit tangent.
inline cplx conj_tangent_derivative(const CurveComponent& c, double t) {
  const cplx d = c.deriv(t);
  const double speed2 = std::norm(d);
  const cplx tangent = tangent_at(c, t);
  const cplx dT = kI * tangent * (std::imag(std::conj(d) * c.deriv2(t)) / speed2);
  return std::conj(dT);
}

struct BoundaryPoint {
  std::size_t component = 0;
  double t = 0.0;
  cplx point{};
  double distance = std::numeric_limits<double>::infinity();
};

struct DomainOptions {
  double boundary_tol = 1e-10;
  int closed_samples = 2048;
  int unbounded_samples = 4096;
};

namespace detail {

inline double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

// Proper or touching intersection of segments [p1, p2] and [q1, q2].
inline bool segments_intersect(cplx p1, cplx p2, cplx q1, cplx q2) {
  // Bounding boxes first: far-apart collinear pieces otherwise hinge on round-off in the signs below.
  if (std::max(p1.real(), p2.real()) < std::min(q1.real(), q2.real()) ||
      std::max(q1.real(), q2.real()) < std::min(p1.real(), p2.real()) ||
      std::max(p1.imag(), p2.imag()) < std::min(q1.imag(), q2.imag()) ||
      std::max(q1.imag(), q2.imag()) < std::min(p1.imag(), p2.imag()))
    return false;
  const double d1 = cross(q2 - q1, p1 - q1);
  const double d2 = cross(q2 - q1, p2 - q1);
  const double d3 = cross(p2 - p1, q1 - p1);
  const double d4 = cross(p2 - p1, q2 - p1);
  return ((d1 > 0) != (d2 > 0)) && ((d3 > 0) != (d4 > 0)) && d1 != 0 && d2 != 0 && d3 != 0 && d4 != 0;
}

// Sample parameters: equispaced for closed curves, sinh-clustered for
// unbounded ones so that both the core and the far tails are represented.
inline std::vector<double> sample_parameters(const CurveComponent& c, int n) {
  std::vector<double> t(static_cast<std::size_t>(n));
  if (c.is_closed()) {
    for (int j = 0; j < n; ++j) t[static_cast<std::size_t>(j)] = kTwoPi * j / n;
  } else {
    const double s_max = std::asinh(c.t_max());
    for (int j = 0; j < n; ++j) t[static_cast<std::size_t>(j)] = std::sinh(-s_max + 2.0 * s_max * j / (n - 1));
    t.front() = -c.t_max();
    t.back() = c.t_max();
  }
  return t;
}

}  // namespace detail

/// A domain with finitely many smooth boundary components, each oriented so
/// that the domain lies on its left, and a fixed basepoint.
class Domain {
 public:
  Domain(std::vector<CurveComponent> components, cplx basepoint, std::string name = {}, DomainOptions options = {})
      : components_(std::move(components)), basepoint_(basepoint), name_(std::move(name)), options_(options) {
    if (components_.empty()) throw DomainError("domain needs at least one boundary component");
    if (!(options_.boundary_tol > 0.0)) throw ConfigError("boundary tolerance must be positive");
    build_samples();
    validate();
  }

  const std::vector<CurveComponent>& components() const { return components_; }
  const CurveComponent& component(std::size_t i) const { return components_.at(i); }
  std::size_t size() const { return components_.size(); }
  cplx basepoint() const { return basepoint_; }
  const std::string& name() const { return name_; }
  const DomainOptions& options() const { return options_; }

  bool has_unbounded() const {
    return std::any_of(components_.begin(), components_.end(), [](const auto& c) { return !c.is_closed(); });
  }

  /// Nearest boundary point on component i (sample search + local refinement).
  BoundaryPoint nearest_on(std::size_t i, cplx p) const {
    const auto& s = samples_[i];
    const auto hit = s.tree.nearest(p);
    const std::size_t n = s.t.size();
    const auto& c = components_[i];
    double lo, hi;
    if (c.is_closed()) {
      const double dt = kTwoPi / static_cast<double>(n);
      lo = s.t[hit.index] - dt;
      hi = s.t[hit.index] + dt;
    } else {
      lo = s.t[hit.index == 0 ? 0 : hit.index - 1];
      hi = s.t[std::min(hit.index + 1, n - 1)];
    }
    auto dist2 = [&](double t) { return std::norm(c.point(t) - p); };
    BoundaryPoint best{i, s.t[hit.index], s.z[hit.index], hit.distance};
    if (hi > lo) {
      auto [t_min, d2_min] = boost::math::tools::brent_find_minima(dist2, lo, hi, 52);
      // Brent locates t only to ~sqrt(eps) on the flat minimum; Newton on Re(conj(z - p) z') = 0 finishes it.
      for (int k = 0; k < 3; ++k) {
        const cplx e = c.point(t_min) - p, d1 = c.deriv(t_min);
        const double g = (std::conj(e) * d1).real();
        const double gp = std::norm(d1) + (std::conj(e) * c.deriv2(t_min)).real();
        if (!(gp > 0.0)) break;
        const double t_new = std::clamp(t_min - g / gp, lo, hi);
        const double d2_new = dist2(t_new);
        if (!(d2_new <= d2_min)) break;
        t_min = t_new;
        d2_min = d2_new;
      }
      if (d2_min < best.distance * best.distance) {
        double t = t_min;
        if (c.is_closed()) t = std::fmod(std::fmod(t, kTwoPi) + kTwoPi, kTwoPi);
        best = BoundaryPoint{i, t, c.point(t_min), std::sqrt(d2_min)};
      }
    }
    return best;
  }

  BoundaryPoint nearest(cplx p) const {
    BoundaryPoint best;
    for (std::size_t i = 0; i < components_.size(); ++i) {
      const auto bp = nearest_on(i, p);
      if (bp.distance < best.distance) best = bp;
    }
    return best;
  }

  double distance(cplx p) const { return nearest(p).distance; }

  /// Sample-based distance (no refinement); off by at most the sampling sagitta.
  double coarse_distance(cplx p) const {
    double d = std::numeric_limits<double>::infinity();
    for (const auto& s : samples_) d = std::min(d, s.tree.nearest(p).distance);
    return d;
  }

  /// Membership without throwing: nullopt when p lies within the boundary tolerance.
  std::optional<bool> classify(cplx p) const {
    if (!std::isfinite(p.real()) || !std::isfinite(p.imag())) return false;
    bool inside = true;
    for (std::size_t i = 0; i < components_.size(); ++i) {
      const auto bp = nearest_on(i, p);
      if (bp.distance < options_.boundary_tol) return std::nullopt;
      if (!left_of(i, bp, p)) inside = false;
    }
    return inside;
  }

  /// Point membership; throws AmbiguousPoint within the boundary tolerance.
  bool contains(cplx p) const {
    const auto r = classify(p);
    if (!r) throw AmbiguousPoint("point lies within the boundary tolerance", p);
    return *r;
  }

  /// min(radius of curvature, half the distance to other components).
  double local_feature_size(std::size_t i, double t) const {
    const auto& c = components_.at(i);
    const double kappa = std::abs(curvature_at(c, t));
    double lfs = kappa > 0 ? 1.0 / kappa : std::numeric_limits<double>::infinity();
    const cplx z = c.point(t);
    for (std::size_t j = 0; j < components_.size(); ++j) {
      if (j == i) continue;
      lfs = std::min(lfs, 0.5 * samples_[j].tree.nearest(z).distance);
    }
    return std::min(lfs, 1e3);
  }

  Domain mapped(cplx rotation, cplx shift) const {
    if (std::abs(std::abs(rotation) - 1.0) > 1e-14) throw DomainError("rotation factor must be unimodular");
    std::vector<CurveComponent> comps;
    comps.reserve(components_.size());
    for (const auto& c : components_) comps.push_back(c.mapped(rotation, shift));
    return Domain(std::move(comps), rotation * basepoint_ + shift, name_, options_);
  }

  /// Sample parameters and points used for membership and distance queries.
  const std::vector<double>& sample_t(std::size_t i) const { return samples_.at(i).t; }
  const std::vector<cplx>& sample_z(std::size_t i) const { return samples_.at(i).z; }

 private:
  struct Samples {
    std::vector<double> t;
    std::vector<cplx> z;
    KdTree tree;
  };

  bool left_of(std::size_t i, const BoundaryPoint& bp, cplx p) const {
    const cplx normal = inward_normal_at(components_[i], bp.t);
    return std::real(std::conj(normal) * (p - bp.point)) > 0.0;
  }

  void build_samples() {
    samples_.clear();
    for (const auto& c : components_) {
      Samples s;
      s.t = detail::sample_parameters(c, c.is_closed() ? options_.closed_samples : options_.unbounded_samples);
      s.z.reserve(s.t.size());
      for (double t : s.t) {
        const cplx z = c.point(t);
        if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
          throw MalformedCurve("component '" + c.label() + "': non-finite point at t = " + std::to_string(t));
        (void)tangent_at(c, t);
        s.z.push_back(z);
      }
      s.tree = KdTree(s.z);
      samples_.push_back(std::move(s));
    }
  }

  // Coarse polyline used for intersection checks.
  std::vector<cplx> coarse_polyline(std::size_t i) const {
    const auto& c = components_[i];
    const auto t = detail::sample_parameters(c, 512);
    std::vector<cplx> z;
    z.reserve(t.size());
    for (double s : t) z.push_back(c.point(s));
    return z;
  }

  void validate() const {
    std::vector<std::vector<cplx>> polylines;
    for (std::size_t i = 0; i < components_.size(); ++i) {
      const auto& c = components_[i];
      const auto& z = samples_[i].z;
      if (c.is_closed()) {
        double area2 = 0.0;
        for (std::size_t j = 0; j < z.size(); ++j) area2 += detail::cross(z[j], z[(j + 1) % z.size()]);
        if (area2 >= 0.0)
          throw DomainError("closed component '" + c.label() +
                            "' encloses the domain (counterclockwise): the domain would be bounded");
      }
      polylines.push_back(coarse_polyline(i));
      const auto& poly = polylines.back();
      const std::size_t n = poly.size();
      const std::size_t segs = c.is_closed() ? n : n - 1;
      for (std::size_t a = 0; a < segs; ++a) {
        for (std::size_t b = a + 2; b < segs; ++b) {
          if (c.is_closed() && a == 0 && b == segs - 1) continue;
          if (detail::segments_intersect(poly[a], poly[(a + 1) % n], poly[b], poly[(b + 1) % n]))
            throw MalformedCurve("component '" + c.label() + "' self-intersects");
        }
      }
    }
    for (std::size_t i = 0; i < components_.size(); ++i) {
      for (std::size_t j = i + 1; j < components_.size(); ++j) {
        for (const auto& z : samples_[i].z) {
          if (samples_[j].tree.nearest(z).distance < options_.boundary_tol)
            throw DomainError("components '" + components_[i].label() + "' and '" + components_[j].label() + "' touch");
        }
        const auto& p = polylines[i];
        const auto& q = polylines[j];
        const std::size_t ps = components_[i].is_closed() ? p.size() : p.size() - 1;
        const std::size_t qs = components_[j].is_closed() ? q.size() : q.size() - 1;
        for (std::size_t a = 0; a < ps; ++a)
          for (std::size_t b = 0; b < qs; ++b)
            if (detail::segments_intersect(p[a], p[(a + 1) % p.size()], q[b], q[(b + 1) % q.size()]))
              throw DomainError("components '" + components_[i].label() + "' and '" + components_[j].label() +
                                "' intersect");
      }
    }
    const auto inside = classify(basepoint_);
    if (!inside || !*inside) throw DomainError("basepoint is not an interior point of the domain");
  }

  std::vector<CurveComponent> components_;
  cplx basepoint_;
  std::string name_;
  DomainOptions options_;
  std::vector<Samples> samples_;
};

}  // namespace nqd
