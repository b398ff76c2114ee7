#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "nqd/cauchy.hpp"
#include "nqd/errors.hpp"
#include "nqd/geometry.hpp"
#include "nqd/nqd_verify.hpp"
#include "nqd/quadrature.hpp"

namespace nqd {

struct Box {
  double x0 = -8.0, x1 = 8.0, y0 = -8.0, y1 = 8.0;
  bool contains(cplx z) const { return z.real() >= x0 && z.real() <= x1 && z.imag() >= y0 && z.imag() <= y1; }
};

struct RoofConfig {
  int n_closed = 256;
  int n_unbounded = 2048;
  double truncation = 25.0;
  /// Path grid; defaults depend on the domain (see default_grid).
  std::optional<Box> box;
  double grid_spacing = 0.0;
  /// Boundary-constant probes per component.
  int probes = 16;
  /// Unbounded components are probed and checked only within this distance of the basepoint.
  double probe_radius = 12.0;
  /// Largest refinement factor for evaluation inside the collar.
  int max_refine = 256;
  double period_tol = 1e-8;
  /// Throw ConstructionInconsistent when a period has an imaginary part above period_tol.
  bool strict_periods = false;
};

struct BoundaryConstant {
  std::size_t component = 0;
  std::string label;
  /// Mean of Re f over the probes.
  double value = 0.0;
  /// max - min over the probes.
  double spread = 0.0;
  std::size_t probes = 0;
};

struct Period {
  std::size_t component = 0;
  std::string label;
  cplx value{};
  double arclength = 0.0;
  /// Offset of the integration loop from the component.
  double offset = 0.0;
};

/// Point value of u with its gradient; in_collar marks values obtained by
/// refined quadrature inside the near-boundary collar.
struct RoofSample {
  double u = 0.0;
  cplx grad{};
  bool in_collar = false;
};

/// The grid box and spacing used for paths when the configuration leaves them unset.
inline std::pair<Box, double> default_grid(const Domain& d) {
  if (d.has_unbounded()) {
    const cplx b = d.basepoint();
    return {Box{b.real() - 24.0, b.real() + 24.0, b.imag() - 24.0, b.imag() + 24.0}, 0.5};
  }
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  for (std::size_t i = 0; i < d.size(); ++i)
    for (const cplx z : d.sample_z(i)) {
      x0 = std::min(x0, z.real());
      x1 = std::max(x1, z.real());
      y0 = std::min(y0, z.imag());
      y1 = std::max(y1, z.imag());
    }
  const double cx = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1);
  const double extent = std::max({0.5 * (x1 - x0), 0.5 * (y1 - y0), 1.0});
  const double half = 8.0 * extent;
  return {Box{cx - half, cx + half, cy - half, cy + half}, 0.25 * extent};
}

/// u = Re f + C with f = -i * integral of h from the basepoint, h the Cauchy
/// extension of the conjugate unit tangent.
class RoofCandidate {
 public:
  struct GridNode {
    cplx z{};
    bool admissible = false;
    bool reached = false;
    cplx f{};
    std::size_t parent = 0;
  };

  static RoofCandidate build(const Domain& d, RoofConfig cfg = {}) {
    if (cfg.n_closed < 8 || cfg.n_unbounded < 8) throw ConfigError("roof quadrature needs at least 8 nodes");
    if (cfg.max_refine < 1) throw ConfigError("max_refine must be positive");
    auto [box, spacing] = default_grid(d);
    if (cfg.box) box = *cfg.box;
    if (cfg.grid_spacing > 0.0) spacing = cfg.grid_spacing;
    if (!(spacing > 0.0) || !(box.x1 > box.x0) || !(box.y1 > box.y0)) throw ConfigError("invalid roof grid");
    cfg.box = box;
    cfg.grid_spacing = spacing;
    RoofCandidate r(d, cfg);
    r.build_grid();
    r.compute_boundary_constants();
    r.compute_periods();
    return r;
  }

  const Domain& domain() const { return *domain_; }
  const RoofConfig& config() const { return cfg_; }
  const CauchyEvaluator& evaluator() const { return *base_; }
  const std::vector<GridNode>& grid() const { return grid_; }
  const std::vector<BoundaryConstant>& boundary_constants() const { return constants_; }
  const std::vector<Period>& periods() const { return periods_; }
  double offset() const { return offset_; }
  cplx basepoint() const { return domain_->basepoint(); }

  /// h(z) off the collar; throws NearBoundary inside it.
  cplx h(cplx z) const { return base_->extend(z); }

  /// h(z) anywhere in the domain down to collar / max_refine from the boundary.
  cplx h_close(cplx z) const {
    const auto p = base_->proximity(z);
    if (p.distance >= p.collar) return base_->extend(z);
    int m = 2;
    while (m * p.distance < p.collar) m *= 2;
    for (; m <= cfg_.max_refine; m *= 2) {
      const auto& ev = refined(m);
      if (!ev.in_collar(z)) return ev.extend(z);
    }
    throw NearBoundary("point too close to the boundary for refined evaluation", z, p.distance,
                       p.collar / cfg_.max_refine);
  }

  /// f(b) - f(a) along the straight segment, which must stay off the collar.
  cplx segment(cplx a, cplx b) const {
    const auto& gl = GaussLegendre<16>::get();
    const double length = std::abs(b - a);
    if (length == 0.0) return {};
    const cplx dir = (b - a) / length;
    cplx acc{};
    double s = 0.0;
    while (s < length) {
      const double d0 = base_->proximity(a + s * dir).distance;
      double piece = std::min(length - s, std::max(d0, 1e-12));
      while (piece > 1e-12 && base_->proximity(a + (s + piece) * dir).distance < 0.5 * piece) piece *= 0.5;
      const double mid = s + 0.5 * piece;
      cplx part{};
      for (std::size_t k = 0; k < gl.x.size(); ++k) part += gl.w[k] * h(a + (mid + 0.5 * piece * gl.x[k]) * dir);
      acc += part * (0.5 * piece);
      s += piece;
    }
    return -kI * acc * dir;
  }

  /// f(z) for z off the collar, continued from the nearest reachable visible grid node.
  cplx f(cplx z) const {
    const auto p = base_->proximity(z);
    if (p.distance < p.collar) {
      std::ostringstream os;
      os << "f: point (" << z.real() << ", " << z.imag() << ") inside the near-boundary collar";
      throw NearBoundary(os.str(), z, p.distance, p.collar);
    }
    if (visible(basepoint(), z) && std::abs(z - basepoint()) <= 1.5 * cfg_.grid_spacing) return segment(basepoint(), z);
    const std::size_t anchor = find_anchor(z);
    return grid_[anchor].f + segment(grid_[anchor].z, z);
  }

  /// f(z) including the collar: continue inward along the normal to a clear point.
  cplx f_close(cplx z) const {
    const auto p = base_->proximity(z);
    if (p.distance >= p.collar) return f(z);
    const auto& node = base_->rule().nodes()[p.node];
    const cplx normal = inward_normal_at(base_->components()[node.component], node.t);
    for (double k : {2.0, 3.0, 1.5, 4.0}) {
      const cplx a = z + k * p.collar * normal;
      if (base_->clearance(a) < 0.0) continue;
      const auto side = domain_->classify(a);
      if (!side || !*side) continue;
      return f(a) + close_segment(a, z);
    }
    throw PathingError("no clear anchor along the inward normal");
  }

  double eval_u(cplx z) const { return f(z).real() + offset_; }
  cplx grad_u(cplx z) const { return kI * std::conj(h(z)); }

  /// u and its gradient at any domain point, flagging collar values.
  /// Throws DomainError for points outside the domain or on its boundary.
  RoofSample sample(cplx z) const {
    const bool collar = base_->in_collar(z);
    if (!collar) {
      try {
        return {eval_u(z), grad_u(z), false};
      } catch (const PathingError&) {
        require_inside(z);
        throw;
      }
    }
    require_inside(z);
    return {f_close(z).real() + offset_, kI * std::conj(h_close(z)), true};
  }

  /// Sampler for growth diagnostics: u(z) for z in the domain, nullopt otherwise.
  std::function<std::optional<double>(cplx)> sampler() const {
    return [self = *this](cplx z) -> std::optional<double> {
      const auto side = self.domain().classify(z);
      if (!side || !*side) return std::nullopt;
      try {
        return self.sample(z).u;
      } catch (const NearBoundary&) {
        return std::nullopt;
      }
    };
  }

  /// Boundary value of u at quadrature node i (Re f continued to the curve, plus C).
  double boundary_value(std::size_t i) const { return boundary_re_f(i).value() + offset_; }

  /// |h(z_b + s n) - conj T| along the inward normal at node i for each distance s.
  std::vector<double> normal_profile(std::size_t i, const std::vector<double>& distances) const {
    const auto& node = base_->rule().nodes()[i];
    const cplx normal = inward_normal_at(base_->components()[node.component], node.t);
    std::vector<double> out;
    for (double s : distances) out.push_back(std::abs(h_close(node.z + s * normal) - base_->density()[i]));
    return out;
  }

  /// Nodes used for boundary checks: all nodes of closed components, nodes of
  /// unbounded components within probe_radius of the basepoint.
  std::vector<std::size_t> probe_region() const {
    std::vector<std::size_t> out;
    const auto& nodes = base_->rule().nodes();
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const bool closed = base_->components()[nodes[i].component].is_closed();
      if (closed || std::abs(nodes[i].z - basepoint()) <= cfg_.probe_radius) out.push_back(i);
    }
    return out;
  }

  const CauchyEvaluator& refined(int m) const {
    std::lock_guard<std::mutex> lock(cache_->mutex);
    auto& slot = cache_->levels[m];
    if (!slot) slot = std::make_shared<CauchyEvaluator>(base_->refined(m));
    return *slot;
  }

  bool visible(cplx a, cplx b) const {
    const double length = std::abs(b - a);
    if (length == 0.0) return base_->clearance(a) >= 0.0;
    const double min_step = 1e-3 * length;
    double s = 0.0;
    while (true) {
      const double c = base_->clearance(a + (s / length) * (b - a));
      if (c < 0.0) return false;
      if (s >= length) return true;
      s = std::min(length, s + std::max(c, min_step));
    }
  }

 private:
  void require_inside(cplx z) const {
    const auto side = domain_->classify(z);
    if (side && *side) return;
    std::ostringstream os;
    os << "(" << z.real() << ", " << z.imag() << ") is " << (side ? "outside the domain" : "on the boundary");
    throw DomainError(os.str());
  }

  struct Cache {
    std::mutex mutex;
    std::map<int, std::shared_ptr<CauchyEvaluator>> levels;
  };

  RoofCandidate(const Domain& d, const RoofConfig& cfg)
      : domain_(std::make_shared<Domain>(d)),
        cfg_(cfg),
        base_(std::make_shared<CauchyEvaluator>(d, cfg.n_closed, cfg.n_unbounded, cfg.truncation)),
        cache_(std::make_shared<Cache>()) {}

  // GL16 from a clear point a to z, using refined evaluation near the curve.
  cplx close_segment(cplx a, cplx z) const {
    const auto& gl = GaussLegendre<16>::get();
    cplx acc{};
    for (std::size_t k = 0; k < gl.x.size(); ++k) acc += gl.w[k] * h_close(0.5 * (a + z) + 0.5 * gl.x[k] * (z - a));
    return -kI * acc * (0.5 * (z - a));
  }

  std::size_t cols() const {
    return static_cast<std::size_t>(std::floor((cfg_.box->x1 - cfg_.box->x0) / cfg_.grid_spacing + 1e-9)) + 1;
  }
  std::size_t rows() const {
    return static_cast<std::size_t>(std::floor((cfg_.box->y1 - cfg_.box->y0) / cfg_.grid_spacing + 1e-9)) + 1;
  }

  void build_grid() {
    const auto& box = *cfg_.box;
    const double hs = cfg_.grid_spacing;
    const std::size_t nx = cols(), ny = rows();
    grid_.resize(nx * ny);
    for (std::size_t j = 0; j < ny; ++j)
      for (std::size_t i = 0; i < nx; ++i) {
        auto& g = grid_[j * nx + i];
        g.z = {box.x0 + i * hs, box.y0 + j * hs};
        if (base_->clearance(g.z) < 0.0) continue;
        const auto side = domain_->classify(g.z);
        g.admissible = side && *side;
      }
    const cplx z0 = basepoint();
    if (base_->clearance(z0) < 0.0) throw PathingError("basepoint lies inside the near-boundary collar");
    // Seed: admissible nodes near the basepoint that it can see.
    std::deque<std::size_t> queue;
    const auto [ci, cj] = cell_of(z0);
    for (long dj = -1; dj <= 2; ++dj)
      for (long di = -1; di <= 2; ++di) {
        const long i = ci + di, j = cj + dj;
        if (i < 0 || j < 0 || i >= static_cast<long>(nx) || j >= static_cast<long>(ny)) continue;
        const std::size_t k = static_cast<std::size_t>(j) * nx + static_cast<std::size_t>(i);
        if (!grid_[k].admissible || grid_[k].reached || !visible(z0, grid_[k].z)) continue;
        grid_[k].f = segment(z0, grid_[k].z);
        grid_[k].reached = true;
        grid_[k].parent = k;
        queue.push_back(k);
      }
    if (queue.empty()) throw PathingError("no grid node visible from the basepoint; refine the grid");
    while (!queue.empty()) {
      const std::size_t k = queue.front();
      queue.pop_front();
      const long i = static_cast<long>(k % nx), j = static_cast<long>(k / nx);
      for (long dj = -1; dj <= 1; ++dj)
        for (long di = -1; di <= 1; ++di) {
          if (di == 0 && dj == 0) continue;
          const long a = i + di, b = j + dj;
          if (a < 0 || b < 0 || a >= static_cast<long>(nx) || b >= static_cast<long>(ny)) continue;
          const std::size_t q = static_cast<std::size_t>(b) * nx + static_cast<std::size_t>(a);
          if (!grid_[q].admissible || grid_[q].reached || !visible(grid_[k].z, grid_[q].z)) continue;
          grid_[q].f = grid_[k].f + segment(grid_[k].z, grid_[q].z);
          grid_[q].reached = true;
          grid_[q].parent = k;
          queue.push_back(q);
        }
    }
  }

  std::pair<long, long> cell_of(cplx z) const {
    const auto& box = *cfg_.box;
    return {static_cast<long>(std::floor((z.real() - box.x0) / cfg_.grid_spacing)),
            static_cast<long>(std::floor((z.imag() - box.y0) / cfg_.grid_spacing))};
  }

  std::size_t find_anchor(cplx z) const {
    const long nx = static_cast<long>(cols()), ny = static_cast<long>(rows());
    auto [ci, cj] = cell_of(z);
    ci = std::clamp(ci, 0L, nx - 1);
    cj = std::clamp(cj, 0L, ny - 1);
    for (long r = 1; r <= 4; ++r) {
      std::vector<std::pair<double, std::size_t>> cand;
      for (long dj = -r + 1; dj <= r; ++dj)
        for (long di = -r + 1; di <= r; ++di) {
          const long i = ci + di, j = cj + dj;
          if (i < 0 || j < 0 || i >= nx || j >= ny) continue;
          const std::size_t k = static_cast<std::size_t>(j * nx + i);
          if (grid_[k].reached) cand.emplace_back(std::abs(grid_[k].z - z), k);
        }
      std::sort(cand.begin(), cand.end());
      for (const auto& [dist, k] : cand)
        if (visible(grid_[k].z, z)) return k;
    }
    std::ostringstream os;
    os << "no reachable grid node sees (" << z.real() << ", " << z.imag() << ")";
    throw PathingError(os.str());
  }

  // Re f at boundary node i, or nullopt when no clear anchor exists along the normal.
  std::optional<double> boundary_re_f(std::size_t i) const {
    const auto& node = base_->rule().nodes()[i];
    const cplx normal = inward_normal_at(base_->components()[node.component], node.t);
    const double collar = kCollarFactor * base_->spacing()[i];
    for (double k : {2.0, 3.0, 1.5, 4.0}) {
      const cplx a = node.z + k * collar * normal;
      if (base_->clearance(a) < 0.0) continue;
      const auto side = domain_->classify(a);
      if (!side || !*side) continue;
      try {
        return (f(a) + close_segment(a, node.z)).real();
      } catch (const PathingError&) {
        continue;
      }
    }
    return std::nullopt;
  }

  void compute_boundary_constants() {
    const auto& ranges = base_->rule().ranges();
    const auto& nodes = base_->rule().nodes();
    constants_.clear();
    for (std::size_t ci = 0; ci < ranges.size(); ++ci) {
      std::vector<std::size_t> pool;
      for (std::size_t i = ranges[ci].begin; i < ranges[ci].end; ++i) {
        if (base_->components()[ci].is_closed() || std::abs(nodes[i].z - basepoint()) <= cfg_.probe_radius)
          pool.push_back(i);
      }
      if (pool.empty()) {
        std::size_t best = ranges[ci].begin;
        for (std::size_t i = ranges[ci].begin; i < ranges[ci].end; ++i)
          if (std::abs(nodes[i].z - basepoint()) < std::abs(nodes[best].z - basepoint())) best = i;
        pool.push_back(best);
      }
      const std::size_t k = std::min<std::size_t>(pool.size(), static_cast<std::size_t>(std::max(cfg_.probes, 1)));
      std::vector<double> vals;
      for (std::size_t q = 0; q < k; ++q) {
        const auto v = boundary_re_f(pool[(2 * q + 1) * pool.size() / (2 * k)]);
        if (v) vals.push_back(*v);
      }
      if (vals.empty())
        throw PathingError("component '" + base_->components()[ci].label() + "': no probe reaches the boundary");
      BoundaryConstant bc;
      bc.component = ci;
      bc.label = base_->components()[ci].label();
      double sum = 0.0;
      for (double v : vals) sum += v;
      bc.value = sum / static_cast<double>(vals.size());
      bc.spread = *std::max_element(vals.begin(), vals.end()) - *std::min_element(vals.begin(), vals.end());
      bc.probes = vals.size();
      constants_.push_back(bc);
    }
    double lo = std::numeric_limits<double>::infinity();
    for (const auto& bc : constants_) lo = std::min(lo, bc.value);
    offset_ = -lo;
  }

  void compute_periods() {
    periods_.clear();
    const auto& ranges = base_->rule().ranges();
    for (std::size_t ci = 0; ci < ranges.size(); ++ci) {
      const auto& c = base_->components()[ci];
      if (!c.is_closed()) continue;
      double collar = 0.0;
      double length = 0.0;
      for (std::size_t i = ranges[ci].begin; i < ranges[ci].end; ++i) {
        collar = std::max(collar, kCollarFactor * base_->spacing()[i]);
        length += std::abs(base_->rule().nodes()[i].dz) * base_->rule().nodes()[i].weight;
      }
      const int n = cfg_.n_closed;
      const double dt = kTwoPi / n;
      bool done = false;
      for (double k : {3.0, 4.5, 6.0, 2.0, 1.5}) {
        const double offset = k * collar;
        std::vector<cplx> pts(n), dpts(n);
        bool ok = true;
        for (int j = 0; j < n && ok; ++j) {
          const double t = dt * j;
          const cplx tangent = tangent_at(c, t);
          pts[j] = c.point(t) + offset * kI * tangent;
          dpts[j] = c.deriv(t) + offset * kI * std::conj(conj_tangent_derivative(c, t));
          ok = base_->clearance(pts[j]) >= 0.0;
        }
        if (!ok) continue;
        cplx p{};
        for (int j = 0; j < n; ++j) p += h(pts[j]) * dpts[j] * dt;
        periods_.push_back({ci, c.label(), p, length, offset});
        done = true;
        break;
      }
      if (!done) throw PathingError("component '" + c.label() + "': no clear offset loop for the period");
      const auto& per = periods_.back();
      if (cfg_.strict_periods && std::abs(per.value.imag()) > cfg_.period_tol * std::max(1.0, per.arclength)) {
        std::ostringstream os;
        os << "period of component '" << c.label() << "' has imaginary part " << per.value.imag();
        throw ConstructionInconsistent(os.str());
      }
    }
  }

  std::shared_ptr<const Domain> domain_;
  RoofConfig cfg_;
  std::shared_ptr<const CauchyEvaluator> base_;
  std::shared_ptr<Cache> cache_;
  std::vector<GridNode> grid_;
  std::vector<BoundaryConstant> constants_;
  std::vector<Period> periods_;
  double offset_ = 0.0;
};

inline RoofCandidate build_roof(const Domain& d, const RoofConfig& cfg = {}) { return RoofCandidate::build(d, cfg); }
inline double eval_u(const RoofCandidate& r, cplx z) { return r.eval_u(z); }
inline cplx grad_u(const RoofCandidate& r, cplx z) { return r.grad_u(z); }

struct CheckItem {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double threshold = 0.0;
  std::string detail;
};

struct RoofCheckReport {
  std::vector<CheckItem> items;
  double min_grid_u = 0.0;
  double max_grid_h = 0.0;
  double laplacian_order = 0.0;
  bool passed() const {
    return std::all_of(items.begin(), items.end(), [](const CheckItem& c) { return c.passed; });
  }
  const CheckItem* find(const std::string& name) const {
    for (const auto& c : items)
      if (c.name == name) return &c;
    return nullptr;
  }
};

struct CheckConfig {
  double tol = 1e-6;
  /// Interior points for the Laplacian sweep.
  int laplacian_points = 16;
  double min_order = 1.9;
  std::uint64_t seed = 20240611;
  /// Dictionary members used for the forward consistency check.
  std::size_t forward_tests = 12;
};

namespace roof_detail {

inline double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

/// Reached grid nodes whose distance to the boundary is at least `margin`, drawn with a seeded generator.
inline std::vector<cplx> interior_points(const RoofCandidate& r, std::size_t count, double margin, std::uint64_t seed) {
  std::vector<cplx> pool;
  for (const auto& g : r.grid())
    if (g.reached && r.evaluator().proximity(g.z).distance - r.evaluator().proximity(g.z).collar >= margin)
      pool.push_back(g.z);
  std::mt19937_64 rng(seed);
  std::shuffle(pool.begin(), pool.end(), rng);
  if (pool.size() > count) pool.resize(count);
  return pool;
}

/// Observed order of a quantity expected to scale like step^p: median of log2 ratios above the noise floor.
inline double observed_order(const std::vector<std::vector<double>>& errors, double floor) {
  std::vector<double> orders;
  for (const auto& e : errors) {
    for (std::size_t k = 0; k + 1 < e.size(); ++k) {
      if (e[k + 1] <= floor || e[k] <= floor) continue;
      orders.push_back(std::log2(e[k] / e[k + 1]));
    }
  }
  return median(orders);
}

}  // namespace roof_detail

/// Five-point Laplacian of eval_u at one point.
inline double discrete_laplacian(const RoofCandidate& r, cplx z, double step) {
  const double c = r.eval_u(z);
  return (r.eval_u(z + step) + r.eval_u(z - step) + r.eval_u(z + kI * step) + r.eval_u(z - kI * step) - 4.0 * c) /
         (step * step);
}

/// Central-difference gradient of eval_u.
inline cplx fd_gradient(const RoofCandidate& r, cplx z, double step) {
  const double ux = (r.eval_u(z + step) - r.eval_u(z - step)) / (2.0 * step);
  const double uy = (r.eval_u(z + kI * step) - r.eval_u(z - kI * step)) / (2.0 * step);
  return {ux, uy};
}

/// Assertions (i)-(v) on a built candidate plus boundary constancy, periods and
/// the maximum-modulus bound. Failures are recorded, never thrown.
inline RoofCheckReport check_roof(const RoofCandidate& r, const CheckConfig& cfg = {}) {
  RoofCheckReport rep;
  const auto& ev = r.evaluator();
  const double tol = cfg.tol;

  // (i) boundary gradient: |i conj(h_+) - iT| = |h_+ - conj T|.
  {
    double worst = 0.0;
    for (std::size_t i : r.probe_region()) worst = std::max(worst, std::abs(ev.trace(i) - ev.density()[i]));
    rep.items.push_back({"boundary_gradient", worst < tol, worst, tol, "max |grad u - iT| over boundary probes"});
  }
  // (ii) non-negative boundary data, and constancy along each component.
  {
    double lo = std::numeric_limits<double>::infinity();
    double spread = 0.0;
    for (const auto& bc : r.boundary_constants()) {
      lo = std::min(lo, bc.value + r.offset());
      spread = std::max(spread, bc.spread);
    }
    rep.items.push_back({"boundary_nonnegative", lo >= -tol, lo, -tol, "min over components of constant + C"});
    rep.items.push_back({"boundary_constancy", spread < tol, spread, tol, "max spread of Re f along a component"});
  }
  // (iii) harmonicity: the five-point Laplacian decays like step^2.
  {
    const double s0 = r.config().grid_spacing;
    const std::vector<double> steps{s0, s0 / 2, s0 / 4, s0 / 8};
    const auto pts = roof_detail::interior_points(r, static_cast<std::size_t>(cfg.laplacian_points), 1.5 * s0, cfg.seed);
    std::vector<std::vector<double>> lap;
    double last = 0.0;
    for (const cplx z : pts) {
      std::vector<double> e;
      for (double s : steps) e.push_back(std::abs(discrete_laplacian(r, z, s)));
      last = std::max(last, e.back());
      lap.push_back(e);
    }
    const double order = roof_detail::observed_order(lap, 1e-9);
    rep.laplacian_order = order;
    const bool ok = !pts.empty() && (order >= cfg.min_order || last < 1e-9);
    std::ostringstream os;
    os << "observed order over " << pts.size() << " points; max |Laplacian| at smallest step " << last;
    rep.items.push_back({"harmonicity", ok, order, cfg.min_order, os.str()});
  }
  // (iv) positivity on the grid, and |h| <= 1 there.
  {
    double lo = std::numeric_limits<double>::infinity();
    double hmax = 0.0;
    for (const auto& g : r.grid()) {
      if (!g.reached) continue;
      lo = std::min(lo, g.f.real() + r.offset());
      hmax = std::max(hmax, std::abs(r.h(g.z)));
    }
    rep.min_grid_u = lo;
    rep.max_grid_h = hmax;
    rep.items.push_back({"positivity", lo > 0.0, lo, 0.0, "min u over reached grid nodes"});
    rep.items.push_back({"maximum_modulus", hmax <= 1.0 + tol, hmax, 1.0 + tol, "max |h| over reached grid nodes"});
  }
  // (v) forward consistency: integral of g i f' dz equals integral of g ds.
  {
    double worst = 0.0;
    std::vector<TestFunction> dict;
    try {
      dict = default_dictionary(r.domain());
    } catch (const ConfigError&) {
    }
    const std::size_t n = std::min(dict.size(), cfg.forward_tests);
    std::vector<cplx> jump;
    const auto region = r.probe_region();
    const auto& nodes = ev.rule().nodes();
    for (std::size_t i = 0; i < nodes.size(); ++i) jump.push_back({});
    for (std::size_t i : region) jump[i] = ev.trace(i) - ev.density()[i];
    for (std::size_t k = 0; k < n; ++k) {
      const auto& g = dict[k * dict.size() / n];
      cplx s{};
      for (std::size_t i : region) s += g(nodes[i].z) * jump[i] * nodes[i].dz * nodes[i].weight;
      worst = std::max(worst, std::abs(s));
    }
    rep.items.push_back({"forward_consistency", n > 0 && worst < tol, worst, tol,
                         "max over dictionary of |integral g i f' dz - integral g ds|"});
  }
  // Periods: real and equal to the component's arclength.
  for (const auto& p : r.periods()) {
    const double scale = std::max(1.0, p.arclength);
    const double dev = std::max(std::abs(p.value.imag()), std::abs(p.value.real() - p.arclength)) / scale;
    rep.items.push_back({"period:" + p.label, dev < tol, dev, tol, "period against arclength, relative"});
  }
  return rep;
}

}  // namespace nqd
