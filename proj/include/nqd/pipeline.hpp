#pragma once

#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "nqd/catalog.hpp"
#include "nqd/domain_json.hpp"
#include "nqd/growth.hpp"
#include "nqd/nqd_verify.hpp"
#include "nqd/report.hpp"
#include "nqd/roof.hpp"
#include "nqd/run_config.hpp"

namespace nqd {

enum ExitCode : int { kExitPass = 0, kExitFail = 1, kExitUnconverged = 2, kExitInput = 3 };

inline int exit_code(Verdict v) {
  switch (v) {
    case Verdict::Pass: return kExitPass;
    case Verdict::Fail: return kExitFail;
    case Verdict::Unconverged: return kExitUnconverged;
  }
  return kExitFail;
}

namespace pipeline_detail {

inline VerifyConfig verify_config(const RunConfig& cfg) {
  VerifyConfig v;
  v.quadrature = cfg.quadrature;
  return v;
}

inline CheckConfig check_config(const RunConfig& cfg) {
  CheckConfig c;
  c.tol = cfg.check_tol;
  c.seed = cfg.seed;
  return c;
}

inline void write_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << text;
}

inline std::string dump(const ordered_json& j) { return j.dump(2) + "\n"; }

}  // namespace pipeline_detail

inline VerificationReport run_verification(const Domain& d, const RunConfig& cfg) {
  const auto vc = pipeline_detail::verify_config(cfg);
  if (cfg.dictionary == "grid") return verify_nqd(d, cfg.tol, vc);
  return verify_nqd(d, load_dictionary(cfg.dictionary), cfg.tol, vc);
}

inline ordered_json catalog_json() {
  ordered_json list = ordered_json::array();
  for (const auto& e : catalog_entries())
    list.push_back({{"name", e.name}, {"parameters", e.parameters}, {"region", e.region},
                    {"classification", e.classification}, {"arclength_nqd", e.arclength_nqd}});
  return list;
}

inline int cmd_catalog(std::ostream& out, const std::optional<std::string>& name, bool as_json) {
  if (name) {
    for (const auto& e : catalog_entries())
      if (e.name == *name) {
        out << e.region << "\n";
        return kExitPass;
      }
    throw DomainError("unknown catalog domain '" + *name + "'");
  }
  if (as_json) {
    out << pipeline_detail::dump(catalog_json());
    return kExitPass;
  }
  for (const auto& e : catalog_entries()) {
    out << e.name << "  [" << e.parameters << "]  " << e.region << "\n";
    out << "    " << e.classification << "\n";
  }
  return kExitPass;
}

inline int cmd_verify(std::ostream& out, const Domain& d, const RunConfig& cfg) {
  const auto rep = run_verification(d, cfg);
  out << pipeline_detail::dump(to_json(rep));
  return exit_code(rep.verdict);
}

inline int cmd_roof(std::ostream& out, const Domain& d, const RunConfig& cfg, const std::string& path) {
  const auto r = build_roof(d, cfg.roof);
  const auto cc = pipeline_detail::check_config(cfg);
  const auto checks = check_roof(r, cc);
  const auto j = to_json(r, &checks, &cc);
  if (path.empty()) out << pipeline_detail::dump(j);
  else pipeline_detail::write_file(path, pipeline_detail::dump(j));
  return kExitPass;
}

inline int cmd_check_roof(std::ostream& out, const Domain& d, const RunConfig& cfg) {
  const auto r = build_roof(d, cfg.roof);
  const auto checks = check_roof(r, pipeline_detail::check_config(cfg));
  out << pipeline_detail::dump(to_json(checks));
  return checks.passed() ? kExitPass : kExitFail;
}

inline int cmd_growth(std::ostream& out, const Domain& d, const RunConfig& cfg) {
  const auto r = build_roof(d, cfg.roof);
  const auto g = growth_ratio(r, cfg.radii, 256, cfg.growth_limit);
  out << pipeline_detail::dump(to_json(g));
  return g.bounded() ? kExitPass : kExitFail;
}

/// Tracts of {u < 0} when `negative`, otherwise of {u > level}.
inline int cmd_tracts(std::ostream& out, const Domain& d, const RunConfig& cfg, bool negative, double level,
                      const std::string& emit) {
  const auto r = build_roof(d, cfg.roof);
  const auto pred = negative ? TractPredicate::below_zero() : TractPredicate::above(level);
  const auto rep = tract_report(r.sampler(), cfg.radii, pred, cfg.angles);
  if (emit == "csv") {
    write_tracts_csv(out, rep);
  } else {
    ordered_json o;
    o["predicate"] = negative ? "u < 0" : "u > " + fmt(level);
    o["tracts"] = rep.tract_ids().size();
    o["max_fill"] = report_detail::number(rep.max_fill());
    o["warnings"] = rep.warnings;
    const auto cert = three_tract_certificate(r, cfg.radii, cfg.angles);
    o["certificate"] = to_json(cert);
    out << pipeline_detail::dump(o);
  }
  return kExitPass;
}

inline Box grid_box(const RoofCandidate& r, const RunConfig& cfg) { return cfg.grid_box ? *cfg.grid_box : *r.config().box; }

inline int cmd_grid(std::ostream& out, std::ostream& err, const Domain& d, const RunConfig& cfg, const std::string& format) {
  const auto r = build_roof(d, cfg.roof);
  const auto g = grid_dump(r, grid_box(r, cfg), cfg.grid_spacing);
  if (g.rows.size() == g.collar_rows()) err << "warning: no grid point lies outside the near-boundary collar\n";
  if (format == "json") {
    ordered_json rows = ordered_json::array();
    for (const auto& row : g.rows)
      rows.push_back({report_detail::number(row.z.real()), report_detail::number(row.z.imag()),
                      report_detail::number(row.u), report_detail::number(row.grad_abs), row.in_collar});
    out << pipeline_detail::dump({{"columns", {"re", "im", "u", "grad_abs", "in_collar"}}, {"rows", rows}});
  } else {
    write_grid_csv(out, g);
  }
  return kExitPass;
}

/// verify, roof, check-roof, growth and the positivity certificate in order;
/// writes the requested reports under cfg.out_dir and a summary to `out`.
inline int cmd_run(std::ostream& out, std::ostream& err, const Domain& d, const RunConfig& cfg) {
  namespace fs = std::filesystem;
  static const std::vector<std::string> known{"verification.json", "roof.json", "tracts.csv", "grid.csv"};
  for (const auto& e : cfg.emit)
    if (std::find(known.begin(), known.end(), e) == known.end()) throw ConfigError("unknown report '" + e + "'");
  auto wanted = [&](const char* name) { return std::find(cfg.emit.begin(), cfg.emit.end(), name) != cfg.emit.end(); };
  const fs::path dir(cfg.out_dir);

  const auto ver = run_verification(d, cfg);
  if (wanted("verification.json")) pipeline_detail::write_file(dir / "verification.json", pipeline_detail::dump(to_json(ver)));

  const auto r = build_roof(d, cfg.roof);
  const auto cc = pipeline_detail::check_config(cfg);
  const auto checks = check_roof(r, cc);
  const auto growth = growth_ratio(r, cfg.radii, 256, cfg.growth_limit);
  const auto cert = three_tract_certificate(r, cfg.radii, cfg.angles);
  if (wanted("roof.json")) {
    auto j = to_json(r, &checks, &cc);
    j["growth"] = to_json(growth);
    j["certificate"] = to_json(cert);
    pipeline_detail::write_file(dir / "roof.json", pipeline_detail::dump(j));
  }
  if (wanted("tracts.csv")) {
    std::ostringstream os;
    write_tracts_csv(os, tract_report(r.sampler(), cfg.radii, TractPredicate::above(0.0), cfg.angles));
    pipeline_detail::write_file(dir / "tracts.csv", os.str());
  }
  if (wanted("grid.csv")) {
    const auto g = grid_dump(r, grid_box(r, cfg), cfg.grid_spacing);
    if (g.rows.size() == g.collar_rows()) err << "warning: no grid point lies outside the near-boundary collar\n";
    std::ostringstream os;
    write_grid_csv(os, g);
    pipeline_detail::write_file(dir / "grid.csv", os.str());
  }

  const bool positive = cert.verdict == Certificate::PositiveOnGrid;
  int code = kExitPass;
  if (ver.verdict == Verdict::Fail || !checks.passed() || !growth.bounded() || !positive) code = kExitFail;
  else if (ver.verdict == Verdict::Unconverged) code = kExitUnconverged;
  ordered_json s;
  s["domain"] = d.name();
  s["verification"] = to_string(ver.verdict);
  s["max_abs_residual"] = report_detail::number(ver.max_abs_residual);
  ordered_json failed = ordered_json::array();
  for (const auto& it : checks.items)
    if (!it.passed) failed.push_back(it.name);
  s["roof_checks"] = checks.passed() ? "pass" : "fail";
  s["failed_checks"] = failed;
  s["growth_bounded"] = growth.bounded();
  s["max_growth_ratio"] = report_detail::number(growth.max_ratio);
  s["certificate"] = to_string(cert.verdict);
  s["seed"] = cfg.seed;
  s["exit_code"] = code;
  out << pipeline_detail::dump(s);
  return code;
}

}  // namespace nqd
