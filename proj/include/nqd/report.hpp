#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nqd/growth.hpp"
#include "nqd/nqd_verify.hpp"
#include "nqd/roof.hpp"

namespace nqd {

using nlohmann::ordered_json;

namespace report_detail {

inline ordered_json number(double v) { return std::isfinite(v) ? ordered_json(v) : ordered_json(nullptr); }
inline ordered_json pair(cplx z) { return ordered_json::array({number(z.real()), number(z.imag())}); }

}  // namespace report_detail

/// Shortest round-trip representation, so repeated runs print identical text.
inline std::string fmt(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

/// Dictionary file: [{"pole": [re, im], "order": k}, ...].
inline std::vector<TestFunction> load_dictionary(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read dictionary file '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("dictionary '" + path + "': " + e.what());
  }
  if (!j.is_array() || j.empty()) throw ParseError("dictionary '" + path + "': expected a non-empty array");
  std::vector<TestFunction> out;
  for (const auto& e : j) {
    if (!e.is_object() || !e.contains("pole") || !e["pole"].is_array() || e["pole"].size() != 2 || !e.contains("order") ||
        !e["order"].is_number_integer())
      throw ParseError("dictionary '" + path + "': entries need \"pole\": [re, im] and an integer \"order\"");
    out.push_back({cplx{e["pole"][0].get<double>(), e["pole"][1].get<double>()}, e["order"].get<int>()});
  }
  return out;
}

inline ordered_json to_json(const VerificationReport& r) {
  using namespace report_detail;
  ordered_json rows = ordered_json::array();
  for (const auto& row : r.rows) {
    ordered_json o;
    o["test"] = row.test.label();
    o["pole"] = pair(row.test.pole);
    o["order"] = row.test.order;
    o["admissible"] = row.admissible;
    o["reason"] = row.reason;
    if (row.admissible) {
      o["residual"] = pair(row.residual);
      o["abs_residual"] = number(std::abs(row.residual));
      o["error_estimate"] = number(row.error_estimate);
      o["converged"] = row.converged;
      o["passed"] = row.passed;
      o["n_closed"] = row.n_closed;
      o["n_unbounded"] = row.n_unbounded;
      o["truncation"] = number(row.truncation);
    }
    rows.push_back(o);
  }
  ordered_json o;
  o["domain"] = r.domain;
  o["tol"] = r.tol;
  o["verdict"] = to_string(r.verdict);
  o["max_abs_residual"] = number(r.max_abs_residual);
  o["admissible_count"] = r.admissible_count;
  o["rows"] = rows;
  return o;
}

inline ordered_json to_json(const RoofCheckReport& c) {
  using namespace report_detail;
  ordered_json items = ordered_json::array();
  for (const auto& it : c.items)
    items.push_back({{"name", it.name}, {"passed", it.passed}, {"value", number(it.value)},
                     {"threshold", number(it.threshold)}, {"detail", it.detail}});
  ordered_json o;
  o["passed"] = c.passed();
  o["min_grid_u"] = number(c.min_grid_u);
  o["max_grid_h"] = number(c.max_grid_h);
  o["laplacian_order"] = number(c.laplacian_order);
  o["items"] = items;
  return o;
}

inline ordered_json to_json(const RoofCandidate& r, const RoofCheckReport* checks = nullptr,
                            const CheckConfig* check_cfg = nullptr) {
  using namespace report_detail;
  const auto& cfg = r.config();
  ordered_json o;
  o["domain"] = r.domain().name();
  o["basepoint"] = pair(r.basepoint());
  o["C"] = number(r.offset());
  ordered_json bcs = ordered_json::array();
  for (const auto& b : r.boundary_constants())
    bcs.push_back({{"component", b.component}, {"label", b.label}, {"value", number(b.value)},
                   {"value_plus_C", number(b.value + r.offset())}, {"spread", number(b.spread)}, {"probes", b.probes}});
  o["boundary_constants"] = bcs;
  ordered_json ps = ordered_json::array();
  for (const auto& p : r.periods())
    ps.push_back({{"component", p.component}, {"label", p.label}, {"value", pair(p.value)},
                  {"arclength", number(p.arclength)}, {"loop_offset", number(p.offset)}});
  o["periods"] = ps;
  std::size_t reached = 0, admissible = 0;
  for (const auto& g : r.grid()) {
    admissible += g.admissible;
    reached += g.reached;
  }
  const Box b = *cfg.box;
  o["grid"] = {{"box", {b.x0, b.x1, b.y0, b.y1}}, {"spacing", cfg.grid_spacing}, {"nodes", r.grid().size()},
               {"admissible", admissible}, {"reached", reached}};
  o["quadrature"] = {{"n_closed", cfg.n_closed}, {"n_unbounded", cfg.n_unbounded}, {"truncation", cfg.truncation},
                     {"max_refine", cfg.max_refine}};
  if (checks) {
    o["diagnostics"] = to_json(*checks);
    if (check_cfg) o["diagnostics"]["seed"] = check_cfg->seed;
  }
  return o;
}

inline ordered_json to_json(const GrowthTable& g) {
  using namespace report_detail;
  ordered_json rows = ordered_json::array();
  for (const auto& r : g.rows)
    rows.push_back({{"t", number(r.t)}, {"max_abs_u", number(r.max_abs_u)}, {"ratio", number(r.ratio)},
                    {"samples", r.samples}, {"bound_ratio", number(r.bound_ratio)}});
  ordered_json o;
  o["limit"] = g.limit;
  o["max_ratio"] = number(g.max_ratio);
  o["bounded"] = g.bounded();
  o["sup_grad"] = number(g.sup_grad);
  o["anchor"] = pair(g.anchor);
  o["anchor_u"] = number(g.anchor_u);
  o["rows"] = rows;
  return o;
}

inline ordered_json to_json(const CertificateReport& c) {
  using namespace report_detail;
  ordered_json rows = ordered_json::array();
  for (const auto& r : c.rows) {
    ordered_json th = ordered_json::array();
    for (double t : r.thetas) th.push_back(number(t));
    rows.push_back({{"t", number(r.t)}, {"thetas", th}, {"combined_bound", number(r.combined_bound)},
                    {"cs_lhs", number(r.chain.lhs)}, {"cs_bound", number(r.chain.bound)}, {"log_M", number(r.log_m)}});
  }
  ordered_json o;
  o["verdict"] = to_string(c.verdict);
  o["negative_samples"] = c.negative_samples;
  o["min_u"] = number(c.min_u);
  o["level"] = number(c.level);
  o["bound_slope"] = number(c.bound_slope);
  o["detail"] = c.detail;
  o["rows"] = rows;
  return o;
}

/// CSV with columns t, tract_id, theta, Mk, pl_bound.
inline void write_tracts_csv(std::ostream& out, const TractReport& rep) {
  out << "t,tract_id,theta,Mk,pl_bound\n";
  for (const auto& e : rep.entries)
    out << fmt(e.t) << ',' << e.tract << ',' << fmt(e.theta) << ',' << fmt(e.m_k) << ',' << fmt(e.pl_bound) << '\n';
}

/// Roof values on a rectangular grid restricted to the domain.
struct GridDump {
  struct Row {
    cplx z{};
    double u = 0.0;
    double grad_abs = 0.0;
    bool in_collar = false;
  };
  std::vector<Row> rows;
  /// Domain points that could not be evaluated (no path to them).
  std::size_t skipped = 0;
  std::size_t collar_rows() const {
    std::size_t n = 0;
    for (const auto& r : rows) n += r.in_collar;
    return n;
  }
};

inline GridDump grid_dump(const RoofCandidate& r, const Box& box, double spacing) {
  if (!(spacing > 0.0)) throw ConfigError("grid spacing must be positive");
  GridDump g;
  const long nx = static_cast<long>(std::floor((box.x1 - box.x0) / spacing + 1e-9));
  const long ny = static_cast<long>(std::floor((box.y1 - box.y0) / spacing + 1e-9));
  for (long j = 0; j <= ny; ++j)
    for (long i = 0; i <= nx; ++i) {
      const cplx z{box.x0 + i * spacing, box.y0 + j * spacing};
      const auto side = r.domain().classify(z);
      if (!side || !*side) continue;
      try {
        const auto s = r.sample(z);
        g.rows.push_back({z, s.u, std::abs(s.grad), s.in_collar});
      } catch (const Error&) {
        ++g.skipped;
      }
    }
  return g;
}

/// CSV with columns re, im, u, grad_abs, in_collar (1 marks refined collar values).
inline void write_grid_csv(std::ostream& out, const GridDump& g) {
  out << "re,im,u,grad_abs,in_collar\n";
  for (const auto& r : g.rows)
    out << fmt(r.z.real()) << ',' << fmt(r.z.imag()) << ',' << fmt(r.u) << ',' << fmt(r.grad_abs) << ','
        << (r.in_collar ? 1 : 0) << '\n';
}

}  // namespace nqd
