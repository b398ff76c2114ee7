#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "nqd/errors.hpp"
#include "nqd/geometry.hpp"
#include "nqd/roof.hpp"

namespace nqd {

/// u(z) for z in the domain, nullopt outside it.
using Sampler = std::function<std::optional<double>(cplx)>;

/// Radii from r0 to r1 spaced geometrically (n >= 2 values).
inline std::vector<double> geometric_radii(double r0, double r1, int n) {
  if (!(r0 > 0.0) || !(r1 > r0) || n < 2) throw ConfigError("radii schedule needs 0 < r0 < r1 and at least 2 values");
  std::vector<double> out;
  for (int k = 0; k < n; ++k) out.push_back(r0 * std::pow(r1 / r0, static_cast<double>(k) / (n - 1)));
  return out;
}

struct GrowthRow {
  double t = 0.0;
  double max_abs_u = 0.0;
  double ratio = 0.0;
  std::size_t samples = 0;
  /// |z - z*| sup|grad u| + |u(z*)| maximized over the sampled points, divided by t.
  double bound_ratio = std::numeric_limits<double>::quiet_NaN();
};

struct GrowthTable {
  std::vector<GrowthRow> rows;
  double sup_grad = std::numeric_limits<double>::quiet_NaN();
  cplx anchor{};
  double anchor_u = 0.0;
  double max_ratio = 0.0;
  double limit = 2.0;
  bool bounded() const { return max_ratio <= limit; }
};

/// max over the circle |z| = t (within the domain) of |u| / t, for each radius.
inline GrowthTable growth_ratio(const Sampler& u, const std::vector<double>& radii, int angles = 256, double limit = 2.0,
                                std::optional<double> sup_grad = std::nullopt, cplx anchor = 0.0, double anchor_u = 0.0) {
  if (angles < 8) throw ConfigError("growth sampling needs at least 8 angles");
  GrowthTable tab;
  tab.limit = limit;
  tab.anchor = anchor;
  tab.anchor_u = anchor_u;
  if (sup_grad) tab.sup_grad = *sup_grad;
  for (double t : radii) {
    if (!(t > 0.0)) throw ConfigError("radii must be positive");
    GrowthRow row;
    row.t = t;
    double reach = 0.0;
    for (int j = 0; j < angles; ++j) {
      const cplx z = std::polar(t, kTwoPi * (j + 0.5) / angles);
      const auto v = u(z);
      if (!v) continue;
      ++row.samples;
      row.max_abs_u = std::max(row.max_abs_u, std::abs(*v));
      reach = std::max(reach, std::abs(z - anchor));
    }
    if (row.samples == 0) {
      std::ostringstream os;
      os << "no admissible samples on the circle of radius " << t;
      throw InvalidInput(os.str());
    }
    row.ratio = row.max_abs_u / t;
    if (sup_grad) row.bound_ratio = (reach * *sup_grad + std::abs(anchor_u)) / t;
    tab.max_ratio = std::max(tab.max_ratio, row.ratio);
    tab.rows.push_back(row);
  }
  return tab;
}

/// Growth table for a roof, with the gradient bound from the largest |h| on its grid.
inline GrowthTable growth_ratio(const RoofCandidate& r, const std::vector<double>& radii, int angles = 256,
                                double limit = 2.0) {
  double sup = 0.0;
  for (const auto& g : r.grid())
    if (g.reached) sup = std::max(sup, std::abs(r.h(g.z)));
  return growth_ratio(r.sampler(), radii, angles, limit, sup, r.basepoint(), r.eval_u(r.basepoint()));
}

/// Which points of a circle belong to a tract: u < 0, or u > level.
struct TractPredicate {
  bool negative = false;
  double level = 0.0;

  static TractPredicate below_zero() { return {true, 0.0}; }
  static TractPredicate above(double level) { return {false, level}; }

  bool holds(double u) const { return negative ? u < 0.0 : u > level; }
  double threshold() const { return negative ? 0.0 : level; }
};

/// Angular run [begin, end] (radians, end may exceed 2 pi when it wraps) where the predicate holds.
struct AngularRun {
  double begin = 0.0;
  double end = 0.0;
  double max_abs_u = 0.0;
  double length(double t) const { return t * (end - begin); }
};

namespace growth_detail {

inline double overlap(const AngularRun& a, const AngularRun& b) {
  double best = 0.0;
  for (int shift : {-1, 0, 1}) {
    const double lo = std::max(a.begin, b.begin + shift * kTwoPi);
    const double hi = std::min(a.end, b.end + shift * kTwoPi);
    best = std::max(best, hi - lo);
  }
  return best;
}

}  // namespace growth_detail

/// Runs of the predicate on |z| = t sampled at angles 2 pi (j + 1/2) / m. Run
/// edges between two sampled values are placed at the linear-interpolated
/// crossing; edges next to points outside the domain sit half a step out.
inline std::vector<AngularRun> tract_runs(const Sampler& u, double t, const TractPredicate& pred, int m = 4096) {
  if (!(t > 0.0)) throw ConfigError("tract radius must be positive");
  if (m < 1024) throw ConfigError("angular resolution must be at least 1024");
  const double step = kTwoPi / m;
  std::vector<std::optional<double>> v(static_cast<std::size_t>(m));
  std::vector<char> in(static_cast<std::size_t>(m), 0);
  bool any_out = false;
  for (int j = 0; j < m; ++j) {
    v[j] = u(std::polar(t, step * (j + 0.5)));
    in[j] = v[j] && pred.holds(*v[j]);
    if (!in[j]) any_out = true;
  }
  std::vector<AngularRun> runs;
  if (!any_out) {
    AngularRun all{0.0, kTwoPi, 0.0};
    for (const auto& x : v) all.max_abs_u = std::max(all.max_abs_u, std::abs(*x));
    runs.push_back(all);
    return runs;
  }
  auto edge = [&](int inside, int outside, int dir) {
    const double a = step * (inside + 0.5);
    const auto& vo = v[((outside % m) + m) % m];
    if (!vo) return a + dir * 0.5 * step;
    const double fi = *v[((inside % m) + m) % m] - pred.threshold();
    const double fo = *vo - pred.threshold();
    const double frac = (fi - fo) != 0.0 ? fi / (fi - fo) : 0.5;
    return a + dir * std::clamp(frac, 0.0, 1.0) * step;
  };
  // Start scanning right after a sample outside the predicate so runs never straddle the start.
  int start = 0;
  while (in[start]) ++start;
  for (int k = 1; k <= m; ++k) {
    const int j = start + k;
    if (!in[j % m] || in[(j - 1) % m]) continue;
    int last = j;
    double mx = 0.0;
    while (in[last % m]) {
      mx = std::max(mx, std::abs(*v[last % m]));
      ++last;
    }
    --last;
    AngularRun run;
    run.begin = edge(j, j - 1, -1);
    run.end = edge(last, last + 1, +1);
    run.max_abs_u = mx;
    while (run.begin >= kTwoPi) {
      run.begin -= kTwoPi;
      run.end -= kTwoPi;
    }
    runs.push_back(run);
  }
  std::sort(runs.begin(), runs.end(), [](const AngularRun& a, const AngularRun& b) { return a.begin < b.begin; });
  return runs;
}

struct TractLength {
  int id = 0;
  double theta = 0.0;
};

/// Arclengths of the runs on one circle, numbered by starting angle.
inline std::vector<TractLength> tract_lengths(const Sampler& u, double t, const TractPredicate& pred, int m = 4096) {
  std::vector<TractLength> out;
  int id = 0;
  for (const auto& r : tract_runs(u, t, pred, m)) out.push_back({id++, r.length(t)});
  return out;
}

/// pi times the integral of 1/theta from the first tabulated radius to r;
/// trapezoidal in log t, exact when theta is proportional to t.
inline double pl_lower_bound(const std::vector<std::pair<double, double>>& theta_table, double r) {
  if (theta_table.empty()) throw ConfigError("empty tract table");
  for (const auto& [t, th] : theta_table)
    if (!(th > 0.0)) {
      std::ostringstream os;
      os << "tract pinches at radius " << t;
      throw TractPinch(os.str(), t);
    }
  if (r < theta_table.front().first) throw ConfigError("radius below the tract table");
  double acc = 0.0;
  for (std::size_t k = 1; k < theta_table.size(); ++k) {
    const auto [t0, th0] = theta_table[k - 1];
    auto [t1, th1] = theta_table[k];
    if (t0 >= r) break;
    const double g0 = t0 / th0;
    double g1 = t1 / th1;
    double hi = std::log(t1);
    if (t1 > r) {
      const double w = (std::log(r) - std::log(t0)) / (std::log(t1) - std::log(t0));
      g1 = g0 + w * (g1 - g0);
      hi = std::log(r);
    }
    acc += 0.5 * (g0 + g1) * (hi - std::log(t0));
  }
  return kPi * acc;
}

/// The three-tract Cauchy-Schwarz step: pi * sum 1/theta_k >= pi n^2 / sum theta_k >= n^2 / (2t).
struct CauchySchwarzChain {
  double lhs = 0.0;
  double middle = 0.0;
  double bound = 0.0;
  bool holds(double tol) const { return lhs >= middle - tol && middle >= bound - tol; }
};

inline CauchySchwarzChain cauchy_schwarz_chain(const std::vector<double>& thetas, double t) {
  CauchySchwarzChain c;
  double sum = 0.0;
  for (double th : thetas) {
    c.lhs += kPi / th;
    sum += th;
  }
  const double n = static_cast<double>(thetas.size());
  c.middle = kPi * n * n / sum;
  c.bound = n * n / (2.0 * t);
  return c;
}

struct TractReport {
  struct Entry {
    double t = 0.0;
    int tract = 0;
    double theta = 0.0;
    double m_k = 0.0;
    double pl_bound = 0.0;
  };
  TractPredicate predicate;
  std::vector<double> radii;
  std::vector<Entry> entries;
  /// Running maximum of |u| over all samples up to each radius.
  std::vector<double> m_global;
  std::vector<std::string> warnings;

  std::vector<int> tract_ids() const {
    std::vector<int> ids;
    for (const auto& e : entries)
      if (std::find(ids.begin(), ids.end(), e.tract) == ids.end()) ids.push_back(e.tract);
    return ids;
  }
  std::vector<Entry> tract(int id) const {
    std::vector<Entry> out;
    for (const auto& e : entries)
      if (e.tract == id) out.push_back(e);
    return out;
  }
  /// Largest total length on one circle divided by 2 pi t; at most 1 up to sampling.
  double max_fill() const {
    double worst = 0.0;
    for (double t : radii) {
      double s = 0.0;
      for (const auto& e : entries)
        if (e.t == t) s += e.theta;
      worst = std::max(worst, s / (kTwoPi * t));
    }
    return worst;
  }
};

/// Tracts of the predicate over a radii schedule, matched across radii by angular overlap.
inline TractReport tract_report(const Sampler& u, const std::vector<double>& radii, const TractPredicate& pred,
                                int m = 4096) {
  TractReport rep;
  rep.predicate = pred;
  rep.radii = radii;
  std::vector<std::pair<AngularRun, int>> prev;
  std::map<int, double> mk;
  std::map<int, std::vector<std::pair<double, double>>> table;
  int next_id = 0;
  double m_all = 0.0;
  for (std::size_t ri = 0; ri < radii.size(); ++ri) {
    const double t = radii[ri];
    if (ri > 0 && !(t > radii[ri - 1])) throw ConfigError("radii must increase");
    // |u| over the whole circle for M(r).
    for (int j = 0; j < 256; ++j) {
      const auto v = u(std::polar(t, kTwoPi * (j + 0.5) / 256));
      if (v) m_all = std::max(m_all, std::abs(*v));
    }
    const auto runs = tract_runs(u, t, pred, m);
    std::vector<std::pair<AngularRun, int>> cur;
    std::map<int, int> claims;
    for (const auto& r : runs) {
      int id = -1;
      double best = 0.0;
      int hits = 0;
      for (const auto& [pr, pid] : prev) {
        const double ov = growth_detail::overlap(r, pr);
        if (ov > 0.0) {
          ++hits;
          if (ov > best) {
            best = ov;
            id = pid;
          }
        }
      }
      if (hits > 1) {
        std::ostringstream os;
        os << "radius " << t << ": tracts merge into tract " << id;
        rep.warnings.push_back(os.str());
      }
      if (id < 0 || claims[id]++ > 0) {
        if (id >= 0) {
          std::ostringstream os;
          os << "radius " << t << ": tract " << id << " splits";
          rep.warnings.push_back(os.str());
        }
        id = next_id++;
      }
      cur.emplace_back(r, id);
      m_all = std::max(m_all, r.max_abs_u);
      mk[id] = std::max(mk[id], r.max_abs_u);
      table[id].emplace_back(t, r.length(t));
      TractReport::Entry e;
      e.t = t;
      e.tract = id;
      e.theta = r.length(t);
      e.m_k = mk[id];
      try {
        e.pl_bound = pl_lower_bound(table[id], t);
      } catch (const TractPinch&) {
        e.pl_bound = std::numeric_limits<double>::quiet_NaN();
      }
      rep.entries.push_back(e);
    }
    // A tract absent at this radius after being present is a pinch; record it.
    for (const auto& [pr, pid] : prev) {
      const bool seen = std::any_of(cur.begin(), cur.end(), [&](const auto& c) { return c.second == pid; });
      if (!seen && ri + 1 < radii.size()) {
        std::ostringstream os;
        os << "radius " << t << ": tract " << pid << " ends";
        rep.warnings.push_back(os.str());
      }
    }
    rep.m_global.push_back(m_all);
    prev = cur;
  }
  return rep;
}

enum class Certificate { PositiveOnGrid, Contradiction, Inconclusive };

inline const char* to_string(Certificate c) {
  switch (c) {
    case Certificate::PositiveOnGrid: return "positive-on-grid";
    case Certificate::Contradiction: return "contradiction";
    case Certificate::Inconclusive: return "inconclusive";
  }
  return "?";
}

struct CertificateReport {
  Certificate verdict = Certificate::Inconclusive;
  std::size_t negative_samples = 0;
  double min_u = 0.0;
  double level = 0.0;
  /// Tract ids used: one negative tract and two super-level tracts.
  int negative_tract = -1;
  std::vector<int> upper_tracts;
  /// Per common radius: t, combined bound sum_k pl_k(t), Cauchy-Schwarz chain.
  struct Row {
    double t = 0.0;
    std::vector<double> thetas;
    double combined_bound = 0.0;
    CauchySchwarzChain chain;
    double log_m = 0.0;
  };
  std::vector<Row> rows;
  /// Slope in log r of (1/3) sum_k pl_k: the implied exponent in log M(r) >= slope log r + C.
  double bound_slope = 0.0;
  std::string detail;
};

namespace growth_detail {

inline double fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double den = n * sxx - sx * sx;
  return den != 0.0 ? (n * sxy - sx * sy) / den : 0.0;
}

inline int most_persistent(const TractReport& rep, const std::vector<int>& exclude) {
  int best = -1;
  std::size_t count = 0;
  double width = 0.0;
  for (int id : rep.tract_ids()) {
    if (std::find(exclude.begin(), exclude.end(), id) != exclude.end()) continue;
    const auto e = rep.tract(id);
    const double w = e.back().theta / e.back().t;
    if (e.size() > count || (e.size() == count && w > width)) {
      best = id;
      count = e.size();
      width = w;
    }
  }
  return best;
}

}  // namespace growth_detail

/// Looks for u < 0 on the circles; if found, assembles one negative tract and
/// two tracts where u exceeds `level`, then evaluates the Phragmen-Lindelof
/// and Cauchy-Schwarz chain on the radii where all three are present.
inline CertificateReport three_tract_certificate(const Sampler& u, const std::vector<double>& radii, double level = 0.0,
                                                 int m = 4096, std::size_t extra_negative_samples = 0,
                                                 double extra_min_u = std::numeric_limits<double>::infinity()) {
  CertificateReport rep;
  rep.level = level;
  rep.negative_samples = extra_negative_samples;
  rep.min_u = extra_min_u;
  for (double t : radii)
    for (int j = 0; j < m; ++j) {
      const auto v = u(std::polar(t, kTwoPi * (j + 0.5) / m));
      if (!v) continue;
      rep.min_u = std::min(rep.min_u, *v);
      if (*v < 0.0) ++rep.negative_samples;
    }
  if (rep.negative_samples == 0) {
    rep.verdict = Certificate::PositiveOnGrid;
    rep.detail = "no negative value found";
    return rep;
  }
  const auto neg = tract_report(u, radii, TractPredicate::below_zero(), m);
  const auto pos = tract_report(u, radii, TractPredicate::above(level), m);
  rep.negative_tract = growth_detail::most_persistent(neg, {});
  const int a = growth_detail::most_persistent(pos, {});
  const int b = a < 0 ? -1 : growth_detail::most_persistent(pos, {a});
  if (rep.negative_tract < 0 || a < 0 || b < 0) {
    rep.verdict = Certificate::Inconclusive;
    rep.detail = "fewer than three tracts found despite negative values";
    return rep;
  }
  rep.upper_tracts = {a, b};
  const auto tn = neg.tract(rep.negative_tract);
  const auto ta = pos.tract(a);
  const auto tb = pos.tract(b);
  auto at = [](const std::vector<TractReport::Entry>& es, double t) -> const TractReport::Entry* {
    for (const auto& e : es)
      if (e.t == t) return &e;
    return nullptr;
  };
  std::vector<std::pair<double, double>> qn, qa, qb;
  std::vector<double> xs, ys;
  for (std::size_t ri = 0; ri < radii.size(); ++ri) {
    const double t = radii[ri];
    const auto* en = at(tn, t);
    const auto* ea = at(ta, t);
    const auto* eb = at(tb, t);
    if (!en || !ea || !eb) {
      if (!qn.empty()) break;
      continue;
    }
    qn.emplace_back(t, en->theta);
    qa.emplace_back(t, ea->theta);
    qb.emplace_back(t, eb->theta);
    CertificateReport::Row row;
    row.t = t;
    row.thetas = {en->theta, ea->theta, eb->theta};
    row.combined_bound = pl_lower_bound(qn, t) + pl_lower_bound(qa, t) + pl_lower_bound(qb, t);
    row.chain = cauchy_schwarz_chain(row.thetas, t);
    row.log_m = std::log(std::max(neg.m_global[ri], pos.m_global[ri]));
    rep.rows.push_back(row);
    xs.push_back(std::log(t));
    ys.push_back(row.combined_bound / 3.0);
  }
  if (rep.rows.size() < 3) {
    rep.verdict = Certificate::Inconclusive;
    rep.detail = "the three tracts share fewer than three radii";
    return rep;
  }
  rep.bound_slope = growth_detail::fit_slope(xs, ys);
  std::ostringstream os;
  os << "log M(r) >= " << rep.bound_slope << " log r + C from three tracts";
  rep.detail = os.str();
  rep.verdict = rep.bound_slope > 1.0 ? Certificate::Contradiction : Certificate::Inconclusive;
  return rep;
}

/// Certificate for a roof: negative grid values are counted too, and the level
/// is the largest boundary value among unbounded components.
inline CertificateReport three_tract_certificate(const RoofCandidate& r, const std::vector<double>& radii, int m = 4096) {
  std::size_t neg = 0;
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& g : r.grid()) {
    if (!g.reached) continue;
    const double v = g.f.real() + r.offset();
    lo = std::min(lo, v);
    if (v < 0.0) ++neg;
  }
  double level = 0.0;
  for (const auto& bc : r.boundary_constants())
    if (!r.domain().component(bc.component).is_closed()) level = std::max(level, bc.value + r.offset());
  if (neg == 0) {
    CertificateReport rep;
    rep.min_u = lo;
    rep.level = level;
    rep.verdict = Certificate::PositiveOnGrid;
    rep.detail = "no negative value on the roof grid";
    return rep;
  }
  return three_tract_certificate(r.sampler(), radii, level, m, neg, lo);
}

struct HeinsRow {
  double r = 0.0;
  double value = 0.0;
};

/// r^(-n/2) (sum_k integral over the circle of u_k^2 d theta)^(1/2), after
/// checking the samplers are non-negative, pairwise disjoint in support and non-constant.
inline std::vector<HeinsRow> heins_functional(const std::vector<Sampler>& us, const std::vector<double>& radii,
                                              int m = 4096, double tol = 1e-12) {
  if (us.empty()) throw InvalidInput("heins_functional needs at least one function");
  const std::size_t n = us.size();
  std::vector<double> lo(n, std::numeric_limits<double>::infinity()), hi(n, -std::numeric_limits<double>::infinity());
  std::vector<HeinsRow> out;
  for (double r : radii) {
    if (!(r > 0.0)) throw ConfigError("radii must be positive");
    double sum = 0.0;
    std::vector<double> vals(n);
    for (int j = 0; j < m; ++j) {
      const cplx z = std::polar(r, kTwoPi * (j + 0.5) / m);
      for (std::size_t k = 0; k < n; ++k) {
        vals[k] = us[k](z).value_or(0.0);
        if (vals[k] < -tol) {
          std::ostringstream os;
          os << "function " << k << " is negative (" << vals[k] << ") at (" << z.real() << ", " << z.imag() << ")";
          throw InvalidInput(os.str());
        }
        lo[k] = std::min(lo[k], vals[k]);
        hi[k] = std::max(hi[k], vals[k]);
        sum += vals[k] * vals[k];
      }
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
          if (std::min(vals[a], vals[b]) > tol) {
            std::ostringstream os;
            os << "min(u_" << a << ", u_" << b << ") > 0 at (" << z.real() << ", " << z.imag() << ")";
            throw InvalidInput(os.str());
          }
    }
    out.push_back({r, std::pow(r, -0.5 * static_cast<double>(n)) * std::sqrt(sum * kTwoPi / m)});
  }
  for (std::size_t k = 0; k < n; ++k)
    if (!(hi[k] - lo[k] > tol)) {
      std::ostringstream os;
      os << "function " << k << " is constant on the sampled circles";
      throw InvalidInput(os.str());
    }
  return out;
}

}  // namespace nqd
