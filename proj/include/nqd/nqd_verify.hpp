#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <string>
#include <vector>

#include "nqd/errors.hpp"
#include "nqd/geometry.hpp"
#include "nqd/quadrature.hpp"

namespace nqd {

/// g(z) = (z - pole)^(-order).
struct TestFunction {
  cplx pole{};
  int order = 2;

  cplx operator()(cplx z) const { return std::pow(z - pole, -order); }

  std::string label() const {
    std::ostringstream os;
    os << "(z - (" << pole.real() << (pole.imag() < 0 ? "" : "+") << pole.imag() << "i))^-" << order;
    return os.str();
  }
};

struct DictionaryConfig {
  double spacing = 0.25;
  /// Minimum distance from a pole to the boundary.
  double standoff = 0.5;
  std::vector<int> orders{2, 3};
  std::size_t max_poles = 48;
  /// Unbounded components contribute only their part within this radius of the basepoint to the pole box.
  double box_radius = 8.0;
};

struct VerifyConfig {
  QuadratureConfig quadrature{};
  DictionaryConfig dictionary{};
  /// Poles closer than this to the boundary are treated as lying on it.
  double min_pole_distance = 1e-6;
  /// Successive tail increments of the integral of |g| must shrink at least by this factor.
  double tail_ratio = 0.75;
  /// Increments below this fraction of the integral count as converged.
  double tail_floor = 1e-8;
};

struct Admissibility {
  bool admissible = false;
  std::string reason;
  /// Increments of the integral of |g| ds between successive truncation windows.
  std::vector<double> tail_increments;
};

/// Pole location, order and tail decay checks for membership of g in E^1.
inline Admissibility e1_admissible(const Domain& d, const TestFunction& g, const VerifyConfig& cfg = {}) {
  Admissibility a;
  if (g.order < 1) {
    a.reason = "order must be at least 1";
    return a;
  }
  const auto side = d.classify(g.pole);
  if (!side) {
    a.reason = "pole lies on the boundary";
    return a;
  }
  if (*side) {
    a.reason = "pole lies inside the domain";
    return a;
  }
  if (d.distance(g.pole) < cfg.min_pole_distance) {
    a.reason = "pole lies on the boundary";
    return a;
  }
  if (d.has_unbounded() && g.order < 2) {
    a.reason = "order 1 is not integrable in arclength along an unbounded boundary component";
    return a;
  }
  if (d.has_unbounded()) {
    const auto& q = cfg.quadrature;
    std::vector<double> windows;
    for (double t : q.t_schedule) {
      double w = 0.0;
      for (const auto& c : d.components())
        if (!c.is_closed()) w = std::max(w, std::min(t, c.t_max()));
      if (windows.empty() || w > windows.back()) windows.push_back(w);
    }
    std::vector<double> totals;
    for (double w : windows) {
      const auto rule = QuadratureRule::build(d, q.n_closed, q.n_unbounded, w, false);
      totals.push_back(integrate_ds([&](cplx z) { return cplx{std::abs(g(z)), 0.0}; }, rule).real());
    }
    for (std::size_t k = 1; k < totals.size(); ++k) a.tail_increments.push_back(totals[k] - totals[k - 1]);
    const double floor = cfg.tail_floor * std::max(totals.back(), 1.0);
    for (std::size_t k = 1; k < a.tail_increments.size(); ++k) {
      const double prev = a.tail_increments[k - 1];
      const double cur = a.tail_increments[k];
      if (cur > floor && cur > cfg.tail_ratio * prev) {
        std::ostringstream os;
        os << "tail of the integral of |g| ds does not decay (increment " << cur << " after " << prev << ")";
        a.reason = os.str();
        return a;
      }
    }
  }
  a.admissible = true;
  a.reason = "ok";
  return a;
}

struct Residual {
  TestFunction test;
  cplx value{};
  double error_estimate = 0.0;
  bool converged = false;
  int n_closed = 0;
  int n_unbounded = 0;
  double truncation = 0.0;
};

/// Integral of g ds over the boundary, refined until converged.
inline Residual nqd_residual(const Domain& d, const TestFunction& g, const VerifyConfig& cfg = {}) {
  const auto adm = e1_admissible(d, g, cfg);
  if (!adm.admissible) throw Inadmissible(g.label() + ": " + adm.reason);
  const auto res = refine_until(
      d, [&](const QuadratureRule& r) { return integrate_ds(g, r); }, cfg.quadrature.tol, cfg.quadrature);
  return {g, res.value, res.error_estimate, res.converged, res.n_closed, res.n_unbounded, res.truncation};
}

/// Poles on a grid over the complement, at least `standoff` from the boundary.
inline std::vector<TestFunction> default_dictionary(const Domain& d, const DictionaryConfig& cfg = {}) {
  if (!(cfg.spacing > 0.0) || !(cfg.standoff > 0.0)) throw ConfigError("dictionary spacing and standoff must be positive");
  if (cfg.orders.empty()) throw ConfigError("dictionary needs at least one order");
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const bool closed = d.component(i).is_closed();
    for (const cplx z : d.sample_z(i)) {
      if (!closed && std::abs(z - d.basepoint()) > cfg.box_radius) continue;
      x0 = std::min(x0, z.real());
      x1 = std::max(x1, z.real());
      y0 = std::min(y0, z.imag());
      y1 = std::max(y1, z.imag());
    }
  }
  if (!(x1 >= x0)) throw ConfigError("no boundary within the dictionary box radius");
  const double pad = cfg.standoff + cfg.spacing;
  const long i0 = static_cast<long>(std::floor((x0 - pad) / cfg.spacing));
  const long i1 = static_cast<long>(std::ceil((x1 + pad) / cfg.spacing));
  const long j0 = static_cast<long>(std::floor((y0 - pad) / cfg.spacing));
  const long j1 = static_cast<long>(std::ceil((y1 + pad) / cfg.spacing));
  std::vector<cplx> poles;
  for (long j = j0; j <= j1; ++j)
    for (long i = i0; i <= i1; ++i) {
      const cplx a{i * cfg.spacing, j * cfg.spacing};
      if (d.coarse_distance(a) < 0.5 * cfg.standoff) continue;
      const auto side = d.classify(a);
      if (!side || *side) continue;
      if (d.distance(a) < cfg.standoff) continue;
      poles.push_back(a);
    }
  if (poles.size() > cfg.max_poles) {
    std::vector<cplx> kept;
    for (std::size_t k = 0; k < cfg.max_poles; ++k) kept.push_back(poles[k * poles.size() / cfg.max_poles]);
    poles = std::move(kept);
  }
  std::vector<TestFunction> dict;
  for (const cplx a : poles)
    for (int k : cfg.orders) dict.push_back({a, k});
  return dict;
}

enum class Verdict { Pass, Fail, Unconverged };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass: return "pass";
    case Verdict::Fail: return "fail";
    case Verdict::Unconverged: return "unconverged";
  }
  return "?";
}

struct VerificationReport {
  struct Row {
    TestFunction test;
    bool admissible = false;
    std::string reason;
    cplx residual{};
    double error_estimate = 0.0;
    bool converged = false;
    bool passed = false;
    int n_closed = 0;
    int n_unbounded = 0;
    double truncation = 0.0;
  };
  std::string domain;
  double tol = 0.0;
  std::vector<Row> rows;
  double max_abs_residual = 0.0;
  std::size_t admissible_count = 0;
  Verdict verdict = Verdict::Fail;
};

/// Residuals over a dictionary. Passing is necessary, not sufficient: only
/// finitely many test functions are tried.
inline VerificationReport verify_nqd(const Domain& d, const std::vector<TestFunction>& dictionary, double tol,
                                     const VerifyConfig& cfg = {}) {
  if (!(tol > 0.0)) throw ConfigError("verification tolerance must be positive");
  VerificationReport rep;
  rep.domain = d.name();
  rep.tol = tol;
  bool any_fail = false;
  bool any_unconverged = false;
  for (const auto& g : dictionary) {
    VerificationReport::Row row;
    row.test = g;
    const auto adm = e1_admissible(d, g, cfg);
    row.admissible = adm.admissible;
    row.reason = adm.reason;
    if (adm.admissible) {
      const auto res = refine_until(
          d, [&](const QuadratureRule& r) { return integrate_ds(g, r); }, cfg.quadrature.tol, cfg.quadrature);
      row.residual = res.value;
      row.error_estimate = res.error_estimate;
      row.converged = res.converged;
      row.n_closed = res.n_closed;
      row.n_unbounded = res.n_unbounded;
      row.truncation = res.truncation;
      row.passed = std::max(std::abs(res.value) - res.error_estimate, 0.0) < tol;
      rep.max_abs_residual = std::max(rep.max_abs_residual, std::abs(res.value));
      ++rep.admissible_count;
      if (!row.passed) any_fail = true;
      else if (!row.converged) any_unconverged = true;
    }
    rep.rows.push_back(row);
  }
  if (rep.admissible_count == 0) throw ConfigError("dictionary has no admissible test function for this domain");
  rep.verdict = any_fail ? Verdict::Fail : (any_unconverged ? Verdict::Unconverged : Verdict::Pass);
  return rep;
}

inline VerificationReport verify_nqd(const Domain& d, double tol, const VerifyConfig& cfg = {}) {
  return verify_nqd(d, default_dictionary(d, cfg.dictionary), tol, cfg);
}

}  // namespace nqd
