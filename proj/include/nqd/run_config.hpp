#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nqd/errors.hpp"
#include "nqd/growth.hpp"
#include "nqd/nqd_verify.hpp"
#include "nqd/quadrature.hpp"
#include "nqd/roof.hpp"

namespace nqd {

/// Everything a pipeline run needs besides the domain.
struct RunConfig {
  /// Verification tolerance.
  double tol = 1e-6;
  double check_tol = 1e-6;
  /// "grid" or the path of a JSON dictionary file.
  std::string dictionary = "grid";
  QuadratureConfig quadrature{};
  RoofConfig roof{};
  /// Box and spacing of grid.csv; the box defaults to the roof's path grid.
  std::optional<Box> grid_box;
  double grid_spacing = 0.25;
  std::vector<double> radii = geometric_radii(2.0, 20.0, 8);
  int angles = 4096;
  double growth_limit = 2.0;
  std::uint64_t seed = 20240611;
  std::string out_dir = ".";
  std::vector<std::string> emit{"verification.json", "roof.json", "tracts.csv", "grid.csv"};

  void validate() const {
    if (!(tol > 0.0) || !(check_tol > 0.0) || !(quadrature.tol > 0.0)) throw ConfigError("tolerances must be positive");
    if (!(grid_spacing > 0.0)) throw ConfigError("grid spacing must be positive");
    if (radii.empty()) throw ConfigError("radii schedule is empty");
    for (std::size_t k = 0; k < radii.size(); ++k)
      if (!(radii[k] > 0.0) || (k > 0 && !(radii[k] > radii[k - 1]))) throw ConfigError("radii must be positive and increasing");
    if (angles < 1024) throw ConfigError("angular resolution must be at least 1024");
    if (!(growth_limit > 0.0)) throw ConfigError("growth limit must be positive");
    if (quadrature.t_schedule.empty()) throw ConfigError("truncation schedule is empty");
  }
};

/// "r0:r1:n", geometric spacing.
inline std::vector<double> parse_radii(const std::string& s) {
  double r0 = 0, r1 = 0;
  int n = 0;
  char c1 = 0, c2 = 0;
  std::istringstream in(s);
  if (!(in >> r0 >> c1 >> r1 >> c2 >> n) || c1 != ':' || c2 != ':' || !in.eof())
    throw ConfigError("radii must look like r0:r1:n, got '" + s + "'");
  return geometric_radii(r0, r1, n);
}

/// "x0:x1:y0:y1".
inline Box parse_box(const std::string& s) {
  Box b;
  char c1 = 0, c2 = 0, c3 = 0;
  std::istringstream in(s);
  if (!(in >> b.x0 >> c1 >> b.x1 >> c2 >> b.y0 >> c3 >> b.y1) || c1 != ':' || c2 != ':' || c3 != ':' || !in.eof())
    throw ConfigError("box must look like x0:x1:y0:y1, got '" + s + "'");
  if (!(b.x1 > b.x0) || !(b.y1 > b.y0)) throw ConfigError("box must have x0 < x1 and y0 < y1");
  return b;
}

namespace config_detail {

using nlohmann::json;

template <class T>
void take(const json& j, const char* key, T& out) {
  const auto it = j.find(key);
  if (it == j.end()) return;
  try {
    out = it->get<T>();
  } catch (const json::exception&) {
    throw ParseError(std::string("config: bad value for '") + key + "'");
  }
}

inline Box box_from(const json& j, const char* what) {
  if (!j.is_array() || j.size() != 4) throw ParseError(std::string("config: '") + what + "' must be [x0, x1, y0, y1]");
  Box b{j[0].get<double>(), j[1].get<double>(), j[2].get<double>(), j[3].get<double>()};
  if (!(b.x1 > b.x0) || !(b.y1 > b.y0)) throw ConfigError(std::string("config: '") + what + "' is empty");
  return b;
}

}  // namespace config_detail

/// Apply the keys present in a config JSON object; absent keys keep their values.
inline void apply_config(const nlohmann::json& j, RunConfig& cfg) {
  using config_detail::take;
  if (!j.is_object()) throw ParseError("config: expected an object");
  static const std::vector<std::string> known{"tol",    "check_tol", "dictionary", "quadrature", "roof",
                                               "grid",   "radii",     "angles",     "growth_limit", "seed",
                                               "out_dir", "emit"};
  for (const auto& [k, v] : j.items())
    if (std::find(known.begin(), known.end(), k) == known.end()) throw ParseError("config: unknown key '" + k + "'");
  take(j, "tol", cfg.tol);
  take(j, "check_tol", cfg.check_tol);
  take(j, "dictionary", cfg.dictionary);
  take(j, "angles", cfg.angles);
  take(j, "growth_limit", cfg.growth_limit);
  take(j, "seed", cfg.seed);
  take(j, "out_dir", cfg.out_dir);
  take(j, "emit", cfg.emit);
  if (j.contains("radii")) {
    std::string r;
    take(j, "radii", r);
    cfg.radii = parse_radii(r);
  }
  if (j.contains("quadrature")) {
    const auto& q = j["quadrature"];
    take(q, "n_closed", cfg.quadrature.n_closed);
    take(q, "n_unbounded", cfg.quadrature.n_unbounded);
    take(q, "t_schedule", cfg.quadrature.t_schedule);
    take(q, "tol", cfg.quadrature.tol);
    take(q, "n_max", cfg.quadrature.n_max);
  }
  if (j.contains("roof")) {
    const auto& r = j["roof"];
    take(r, "n_closed", cfg.roof.n_closed);
    take(r, "n_unbounded", cfg.roof.n_unbounded);
    take(r, "truncation", cfg.roof.truncation);
    take(r, "grid_spacing", cfg.roof.grid_spacing);
    take(r, "probes", cfg.roof.probes);
    take(r, "probe_radius", cfg.roof.probe_radius);
    if (r.contains("box")) cfg.roof.box = config_detail::box_from(r["box"], "roof.box");
  }
  if (j.contains("grid")) {
    const auto& g = j["grid"];
    take(g, "spacing", cfg.grid_spacing);
    if (g.contains("box")) cfg.grid_box = config_detail::box_from(g["box"], "grid.box");
  }
}

}  // namespace nqd
