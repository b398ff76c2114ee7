#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <sstream>
#include <vector>

#include <boost/math/quadrature/gauss.hpp>

#include "nqd/errors.hpp"
#include "nqd/geometry.hpp"

namespace nqd {

/// Quadrature settings (config keys quadrature.N, quadrature.T_schedule, quadrature.tol).
struct QuadratureConfig {
  int n_closed = 256;
  int n_unbounded = 512;
  std::vector<double> t_schedule{25.0, 50.0, 100.0, 200.0};
  double tol = 1e-10;
  int n_max = 16384;
  /// Continue unbounded components past the window along their end tangents.
  bool tails = true;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
template <unsigned N>
struct GaussLegendre {
  std::vector<double> x;
  std::vector<double> w;

  GaussLegendre() {
    using G = boost::math::quadrature::gauss<double, N>;
    const auto& a = G::abscissa();
    const auto& wt = G::weights();
    for (std::size_t i = 0; i < a.size(); ++i) {
      if (a[i] == 0.0) {
        x.push_back(0.0);
        w.push_back(wt[i]);
        continue;
      }
      x.push_back(a[i]);
      w.push_back(wt[i]);
      x.push_back(-a[i]);
      w.push_back(wt[i]);
    }
  }

  static const GaussLegendre& get() {
    static const GaussLegendre rule;
    return rule;
  }
};

struct QuadratureNode {
  std::size_t component = 0;
  double t = 0.0;
  cplx z{};
  cplx dz{};
  /// Weight in the curve parameter t (substitution Jacobian and end corrections included).
  double weight = 0.0;
  /// Local arclength spacing between neighbouring nodes.
  double spacing = 0.0;
};

/// A node on the straight continuation of an unbounded component beyond its
/// window; the oriented line element there is direction * weight.
struct TailNode {
  std::size_t component = 0;
  int end = +1;
  cplx z{};
  cplx direction{};
  double weight = 0.0;
};

/// Nodes for every component of a domain. Closed components use the periodic
/// trapezoidal rule; unbounded components use t = sinh(s) with equispaced s on
/// the truncated window and third-order Gregory end weights.
class QuadratureRule {
 public:
  struct ComponentRange {
    std::size_t begin = 0;
    std::size_t end = 0;
    double truncation = 0.0;
  };

  static QuadratureRule build(const Domain& d, int n_closed, int n_unbounded, double truncation, bool tails = true) {
    return build(d.components(), d.basepoint(), n_closed, n_unbounded, truncation, tails);
  }

  /// `reference` sets the length scale of the tail substitution.
  static QuadratureRule build(const std::vector<CurveComponent>& comps, cplx reference, int n_closed, int n_unbounded,
                              double truncation, bool tails = true) {
    if (n_closed < 8 || n_unbounded < 8) throw ConfigError("quadrature needs at least 8 nodes per component");
    if (!(truncation > 0.0)) throw ConfigError("truncation must be positive");
    QuadratureRule r;
    r.n_closed_ = n_closed;
    r.n_unbounded_ = n_unbounded;
    r.truncation_ = truncation;
    for (std::size_t ci = 0; ci < comps.size(); ++ci) {
      const auto& c = comps[ci];
      ComponentRange range;
      range.begin = r.nodes_.size();
      if (c.is_closed()) {
        const double h = kTwoPi / n_closed;
        for (int j = 0; j < n_closed; ++j) {
          const double t = h * j;
          const cplx dz = c.deriv(t);
          r.nodes_.push_back({ci, t, c.point(t), dz, h, std::abs(dz) * h});
        }
        range.truncation = kPi;
      } else {
        const double window = std::min(truncation, c.t_max());
        const double s_max = std::asinh(window);
        const int n = n_unbounded;
        const double h = 2.0 * s_max / (n - 1);
        for (int j = 0; j < n; ++j) {
          const double s = -s_max + h * j;
          const double t = (j == 0) ? -window : (j == n - 1 ? window : std::sinh(s));
          const double jac = std::cosh(s);
          const cplx dz = c.deriv(t);
          r.nodes_.push_back({ci, t, c.point(t), dz, h * jac * gregory(j, n), std::abs(dz) * h * jac});
        }
        range.truncation = window;
        if (tails) r.add_tails(c, ci, window, reference);
      }
      range.end = r.nodes_.size();
      r.ranges_.push_back(range);
    }
    return r;
  }

  const std::vector<QuadratureNode>& nodes() const { return nodes_; }
  const std::vector<TailNode>& tails() const { return tails_; }
  const std::vector<ComponentRange>& ranges() const { return ranges_; }
  int n_closed() const { return n_closed_; }
  int n_unbounded() const { return n_unbounded_; }
  double truncation() const { return truncation_; }

  /// Gregory end-corrected trapezoid weights (relative to the step).
  static double gregory(int j, int n) {
    static constexpr double kEnd[3] = {3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0};
    if (j < 3) return kEnd[j];
    if (j > n - 4) return kEnd[n - 1 - j];
    return 1.0;
  }

 private:
  void add_tails(const CurveComponent& c, std::size_t ci, double window, cplx reference) {
    const auto& gl = GaussLegendre<32>::get();
    for (int end : {-1, +1}) {
      const double t_end = end * window;
      const cplx z_end = c.point(t_end);
      const cplx tangent = tangent_at(c, t_end);
      const cplx outward = end > 0 ? tangent : -tangent;
      const double scale = std::max(1.0, std::abs(z_end - reference));
      for (std::size_t k = 0; k < gl.x.size(); ++k) {
        const double u = 0.5 * (gl.x[k] + 1.0);
        const double tau = scale * u / (1.0 - u);
        const double jac = 0.5 * gl.w[k] * scale / ((1.0 - u) * (1.0 - u));
        tails_.push_back({ci, end, z_end + tau * outward, tangent, jac});
      }
    }
  }

  int n_closed_ = 0;
  int n_unbounded_ = 0;
  double truncation_ = 0.0;
  std::vector<QuadratureNode> nodes_;
  std::vector<TailNode> tails_;
  std::vector<ComponentRange> ranges_;
};

using BoundaryFunction = std::function<cplx(cplx)>;

namespace quad_detail {

inline cplx checked(cplx v, cplx z) {
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
    std::ostringstream os;
    os << "non-finite integrand at boundary node (" << z.real() << ", " << z.imag() << ")";
    throw EvaluationError(os.str(), z);
  }
  return v;
}

}  // namespace quad_detail

/// Sum over nodes of f(z) |z'| w: the arclength integral over the boundary.
inline cplx integrate_ds(const BoundaryFunction& f, const QuadratureRule& rule) {
  cplx acc{0.0, 0.0};
  for (const auto& n : rule.nodes()) acc += quad_detail::checked(f(n.z), n.z) * (std::abs(n.dz) * n.weight);
  for (const auto& n : rule.tails()) acc += quad_detail::checked(f(n.z), n.z) * n.weight;
  return acc;
}

inline cplx integrate_ds(const Domain&, const BoundaryFunction& f, const QuadratureRule& rule) {
  return integrate_ds(f, rule);
}

/// Sum over nodes of f(z) z' w: the oriented contour integral.
inline cplx integrate_dz(const BoundaryFunction& f, const QuadratureRule& rule) {
  cplx acc{0.0, 0.0};
  for (const auto& n : rule.nodes()) acc += quad_detail::checked(f(n.z), n.z) * n.dz * n.weight;
  for (const auto& n : rule.tails()) acc += quad_detail::checked(f(n.z), n.z) * n.direction * n.weight;
  return acc;
}

struct IntegralResult {
  cplx value{};
  double error_estimate = 0.0;
  bool converged = false;
  int n_closed = 0;
  int n_unbounded = 0;
  double truncation = 0.0;
  int levels = 0;
};

inline cplx integrate_dz(const Domain&, const BoundaryFunction& f, const QuadratureRule& rule) {
  return integrate_dz(f, rule);
}

using IntegralTask = std::function<cplx(const QuadratureRule&)>;

/// Double the node counts and advance the truncation schedule until two
/// successive values differ by less than tol. On domains with unbounded
/// components, convergence is only declared on a step that moved the
/// truncation window (or once every window sits at its component's cap);
/// otherwise an exhausted schedule ends unconverged.
inline IntegralResult refine_until(const Domain& d, const IntegralTask& task, double tol, const QuadratureConfig& cfg) {
  if (!(tol > 0.0)) throw ConfigError("refinement tolerance must be positive");
  if (cfg.t_schedule.empty()) throw ConfigError("empty truncation schedule");
  const bool unbounded = d.has_unbounded();
  auto effective = [&](double t) {
    std::vector<double> w;
    for (const auto& c : d.components())
      if (!c.is_closed()) w.push_back(std::min(t, c.t_max()));
    return w;
  };
  auto at_cap = [&](double t) {
    for (const auto& c : d.components())
      if (!c.is_closed() && t < c.t_max()) return false;
    return true;
  };

  IntegralResult res;
  int nc = cfg.n_closed;
  int nu = cfg.n_unbounded;
  std::size_t level = 0;
  double prev_t = cfg.t_schedule.front();
  bool have_prev = false;
  cplx prev{};
  double window_diff = 0.0;
  while (std::max(nc, nu) <= cfg.n_max || !have_prev) {
    const double t = cfg.t_schedule[std::min(level, cfg.t_schedule.size() - 1)];
    const auto rule = QuadratureRule::build(d, nc, nu, t, cfg.tails);
    const cplx v = task(rule);
    res.value = v;
    res.n_closed = nc;
    res.n_unbounded = nu;
    res.truncation = t;
    res.levels = static_cast<int>(level) + 1;
    if (have_prev) {
      const double diff = std::abs(v - prev);
      res.error_estimate = diff;
      const bool window_moved = effective(t) != effective(prev_t);
      if (window_moved) window_diff = diff;
      const bool truncation_ok = !unbounded || window_moved || at_cap(t);
      if (diff < tol && truncation_ok) {
        res.converged = true;
        return res;
      }
      if (unbounded && !window_moved && !at_cap(t)) {
        res.error_estimate = std::max(diff, window_diff);
        return res;
      }
    }
    have_prev = true;
    prev = v;
    prev_t = t;
    ++level;
    nc *= 2;
    nu *= 2;
  }
  return res;
}

}  // namespace nqd
