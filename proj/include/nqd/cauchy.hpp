#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <sstream>
#include <vector>

#include "nqd/errors.hpp"
#include "nqd/geometry.hpp"
#include "nqd/kdtree.hpp"
#include "nqd/quadrature.hpp"

namespace nqd {

/// Factor between the near-boundary collar width and the local node spacing.
inline constexpr double kCollarFactor = 5.0;

/// Arc at infinity joining the outgoing end of one unbounded component to the
/// incoming end of the next one (counterclockwise). It carries the constant
/// density `value`, the common asymptotic conjugate tangent of the two ends.
struct ClosureArc {
  std::size_t from_component = 0;
  std::size_t to_component = 0;
  cplx from{};
  cplx to{};
  cplx value{};
  /// |c_+ of the outgoing arc - c_- of the incoming arc|.
  double mismatch = 0.0;
  /// Counterclockwise angle swept from `from` to `to` about the reference point.
  double sweep = 0.0;

  /// Integral of 1/(zeta - z) along the arc, branch fixed by the sweep.
  cplx log_increment(cplx z) const {
    const cplx a = from - z;
    const cplx b = to - z;
    const double turn = sweep + std::remainder(std::arg(b / a) - sweep, kTwoPi);
    return {std::log(std::abs(b) / std::abs(a)), turn};
  }
};

/// Boundary sampling of conj(T) together with the asymptotic limits of every
/// unbounded component.
struct CauchyDensity {
  std::vector<cplx> values;
  struct Ends {
    std::size_t component = 0;
    cplx c_minus{};
    cplx c_plus{};
  };
  std::vector<Ends> asymptotics;
};

namespace cauchy_detail {

inline std::vector<ClosureArc> pair_ends(const std::vector<CurveComponent>& comps,
                                         const std::vector<QuadratureRule::ComponentRange>& ranges,
                                         cplx reference) {
  struct End {
    double angle;
    bool outgoing;
    std::size_t component;
    cplx point;
  };
  std::vector<End> ends;
  for (std::size_t ci = 0; ci < comps.size(); ++ci) {
    if (comps[ci].is_closed()) continue;
    const double w = ranges[ci].truncation;
    const cplx p_out = comps[ci].point(w);
    const cplx p_in = comps[ci].point(-w);
    ends.push_back({std::arg(p_out - reference), true, ci, p_out});
    ends.push_back({std::arg(p_in - reference), false, ci, p_in});
  }
  std::sort(ends.begin(), ends.end(), [](const End& a, const End& b) { return a.angle < b.angle; });
  std::vector<ClosureArc> arcs;
  for (std::size_t k = 0; k < ends.size(); ++k) {
    if (!ends[k].outgoing) continue;
    const End& next = ends[(k + 1) % ends.size()];
    if (next.outgoing)
      throw DomainError("unbounded components '" + comps[ends[k].component].label() + "' and '" +
                        comps[next.component].label() + "' leave to infinity without the domain between them");
    ClosureArc arc;
    arc.from_component = ends[k].component;
    arc.to_component = next.component;
    arc.from = ends[k].point;
    arc.to = next.point;
    const cplx c_out = comps[arc.from_component].c_plus();
    const cplx c_in = comps[arc.to_component].c_minus();
    arc.value = 0.5 * (c_out + c_in);
    arc.mismatch = std::abs(c_out - c_in);
    double sweep = next.angle - ends[k].angle;
    if (sweep <= 0.0) sweep += kTwoPi;
    arc.sweep = sweep;
    arcs.push_back(arc);
  }
  return arcs;
}

}  // namespace cauchy_detail

/// Cauchy integral of the conjugate unit tangent over the boundary of a domain.
/// Unbounded components are truncated to their window and closed at infinity
/// by `ClosureArc`s; interior values use singularity subtraction against the
/// density at the nearest node.
class CauchyEvaluator {
 public:
  CauchyEvaluator(const Domain& d, int n_closed, int n_unbounded, double truncation)
      : CauchyEvaluator(d.components(), d.basepoint(), n_closed, n_unbounded, truncation) {}

  CauchyEvaluator(std::vector<CurveComponent> comps, cplx reference, int n_closed, int n_unbounded, double truncation)
      : comps_(std::move(comps)),
        reference_(reference),
        rule_(QuadratureRule::build(comps_, reference, n_closed, n_unbounded, truncation, false)) {
    const auto& nodes = rule_.nodes();
    zeta_.reserve(nodes.size());
    kw_.reserve(nodes.size());
    rho_.reserve(nodes.size());
    for (const auto& n : nodes) {
      zeta_.push_back(n.z);
      kw_.push_back(n.dz * n.weight);
      rho_.push_back(std::conj(tangent_at(comps_[n.component], n.t)));
    }
    // Spacing seen from a node: the larger of its two neighbour gaps.
    spacing_.resize(nodes.size());
    for (const auto& r : rule_.ranges()) {
      const std::size_t n = r.end - r.begin;
      for (std::size_t j = r.begin; j < r.end; ++j) {
        double s = nodes[j].spacing;
        const bool closed = comps_[nodes[j].component].is_closed();
        if (j > r.begin) s = std::max(s, std::abs(zeta_[j] - zeta_[j - 1]));
        else if (closed) s = std::max(s, std::abs(zeta_[j] - zeta_[r.begin + n - 1]));
        if (j + 1 < r.end) s = std::max(s, std::abs(zeta_[j + 1] - zeta_[j]));
        else if (closed) s = std::max(s, std::abs(zeta_[r.begin] - zeta_[j]));
        spacing_[j] = s;
      }
    }
    tree_ = KdTree(zeta_);
    closures_ = cauchy_detail::pair_ends(comps_, rule_.ranges(), reference_);
    for (const auto& c : comps_)
      if (!c.is_closed()) unbounded_ = true;
  }

  const std::vector<CurveComponent>& components() const { return comps_; }
  const QuadratureRule& rule() const { return rule_; }
  const std::vector<cplx>& density() const { return rho_; }
  const std::vector<cplx>& nodes() const { return zeta_; }
  const std::vector<double>& spacing() const { return spacing_; }
  const std::vector<ClosureArc>& closures() const { return closures_; }
  bool has_unbounded() const { return unbounded_; }

  double max_closure_mismatch() const {
    double m = 0.0;
    for (const auto& a : closures_) m = std::max(m, a.mismatch);
    return m;
  }

  /// The same construction with every component's node count multiplied by
  /// `factor` (a power of two); the new nodes contain the old ones.
  CauchyEvaluator refined(int factor) const {
    return CauchyEvaluator(comps_, reference_, rule_.n_closed() * factor, (rule_.n_unbounded() - 1) * factor + 1,
                           rule_.truncation());
  }

  struct Proximity {
    std::size_t node = 0;
    double distance = 0.0;
    double collar = 0.0;
  };

  /// Nearest node and the collar width (kCollarFactor x local spacing) there.
  Proximity proximity(cplx z) const {
    const auto hit = tree_.nearest(z);
    return {hit.index, hit.distance, kCollarFactor * spacing_[hit.index]};
  }

  /// Distance to the nearest node in excess of the collar; negative inside it.
  double clearance(cplx z) const {
    const auto p = proximity(z);
    return p.distance - p.collar;
  }

  bool in_collar(cplx z) const { return clearance(z) < 0.0; }

  /// Winding number of the closed contour (boundary plus closure arcs) about z.
  int winding(cplx z) const {
    cplx s{0.0, 0.0};
    for (std::size_t j = 0; j < zeta_.size(); ++j) s += kw_[j] / (zeta_[j] - z);
    for (const auto& a : closures_) s += a.log_increment(z);
    return static_cast<int>(std::lround((s / (kTwoPi * kI)).real()));
  }

  /// h(z) = (1/2 pi i) * integral of conj(T)/(zeta - z) d zeta, for z off the collar.
  cplx extend(cplx z) const {
    const auto p = require_clear(z);
    return subtracted(z, rho_[p.node]) / (kTwoPi * kI);
  }

  /// The unnormalized transform: integral of conj(T)/(zeta - w) d zeta. On an
  /// arclength null quadrature domain this vanishes for w outside the closure.
  cplx transform(cplx w) const {
    const auto p = require_clear(w);
    return subtracted(w, rho_[p.node]);
  }

  /// Boundary value of h at node i, approached from the domain.
  cplx trace(std::size_t i) const {
    const auto& n = rule_.nodes()[i];
    const cplx r = rho_[i];
    cplx s{0.0, 0.0};
    for (std::size_t j = 0; j < zeta_.size(); ++j) {
      if (j == i) continue;
      s += (rho_[j] - r) * kw_[j] / (zeta_[j] - zeta_[i]);
    }
    s += conj_tangent_derivative(comps_[n.component], n.t) * n.weight;
    for (const auto& a : closures_) s += (a.value - r) * a.log_increment(zeta_[i]);
    return r * static_cast<double>(unbounded_ ? 1 : 0) + s / (kTwoPi * kI);
  }

  /// Boundary value of h at an arbitrary parameter of component `ci`.
  cplx trace_at(std::size_t ci, double t) const {
    const auto& c = comps_.at(ci);
    const cplx z = c.point(t);
    const cplx r = std::conj(tangent_at(c, t));
    const cplx dr_dz = conj_tangent_derivative(c, t) / c.deriv(t);
    cplx s{0.0, 0.0};
    for (std::size_t j = 0; j < zeta_.size(); ++j) {
      const cplx gap = zeta_[j] - z;
      if (std::abs(gap) < 1e-4 * spacing_[j]) s += dr_dz * kw_[j];
      else s += (rho_[j] - r) * kw_[j] / gap;
    }
    for (const auto& a : closures_) s += (a.value - r) * a.log_increment(z);
    return r * static_cast<double>(unbounded_ ? 1 : 0) + s / (kTwoPi * kI);
  }

 private:
  Proximity require_clear(cplx z) const {
    const auto p = proximity(z);
    if (p.distance < p.collar) {
      std::ostringstream os;
      os << "point (" << z.real() << ", " << z.imag() << ") lies within " << p.collar << " of the boundary";
      throw NearBoundary(os.str(), z, p.distance, p.collar);
    }
    return p;
  }

  // Sum over nodes of (rho_j - r) K_j plus closures, with r times the exact
  // winding integral added back.
  cplx subtracted(cplx z, cplx r) const {
    cplx s_rho{0.0, 0.0};
    cplx s_one{0.0, 0.0};
    for (std::size_t j = 0; j < zeta_.size(); ++j) {
      const cplx k = kw_[j] / (zeta_[j] - z);
      s_rho += rho_[j] * k;
      s_one += k;
    }
    for (const auto& a : closures_) {
      const cplx l = a.log_increment(z);
      s_rho += a.value * l;
      s_one += l;
    }
    const double wind = std::round((s_one / (kTwoPi * kI)).real());
    return (s_rho - r * s_one) + r * (kTwoPi * kI * wind);
  }

  std::vector<CurveComponent> comps_;
  cplx reference_{};
  QuadratureRule rule_;
  std::vector<cplx> zeta_;
  std::vector<cplx> kw_;
  std::vector<cplx> rho_;
  std::vector<double> spacing_;
  KdTree tree_;
  std::vector<ClosureArc> closures_;
  bool unbounded_ = false;
};

/// conj(T) at the default quadrature nodes, plus c_- and c_+ per unbounded component.
inline CauchyDensity cauchy_density(const Domain& d, const QuadratureConfig& cfg = {}) {
  CauchyDensity out;
  const auto rule = QuadratureRule::build(d, cfg.n_closed, cfg.n_unbounded, cfg.t_schedule.front(), false);
  for (const auto& n : rule.nodes()) out.values.push_back(std::conj(tangent_at(d.component(n.component), n.t)));
  for (std::size_t ci = 0; ci < d.size(); ++ci) {
    const auto& c = d.component(ci);
    if (!c.is_closed()) out.asymptotics.push_back({ci, c.c_minus(), c.c_plus()});
  }
  return out;
}

/// h(z) with the default rule; throws NearBoundary inside the collar.
inline cplx extend_tangent(const Domain& d, cplx z, const QuadratureConfig& cfg = {}) {
  if (!d.contains(z)) throw DomainError("extend_tangent: point is not in the domain");
  return CauchyEvaluator(d, cfg.n_closed, cfg.n_unbounded, cfg.t_schedule.front()).extend(z);
}

/// Unnormalized Cauchy transform at a point outside the closure of the domain.
inline cplx cauchy_transform(const Domain& d, cplx w, const QuadratureConfig& cfg = {}) {
  const auto inside = d.classify(w);
  if (!inside || *inside) throw DomainError("cauchy_transform: point must lie outside the closed domain");
  return CauchyEvaluator(d, cfg.n_closed, cfg.n_unbounded, cfg.t_schedule.front()).transform(w);
}

}  // namespace nqd
