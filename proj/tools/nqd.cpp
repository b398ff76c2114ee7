#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "nqd/pipeline.hpp"

namespace {

struct Flags {
  std::optional<std::string> config;
  std::optional<double> tol, check_tol, spacing;
  std::optional<std::string> dict, radii, box, roof_box, out_dir;
  std::optional<int> angles, n_closed, n_unbounded;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> emit;
};

void add_common(CLI::App* c, Flags& f) {
  c->add_option("--config", f.config, "JSON config file (flags override it)");
  c->add_option("--n-closed", f.n_closed, "quadrature nodes per closed component");
  c->add_option("--n-unbounded", f.n_unbounded, "quadrature nodes per unbounded component");
  c->add_option("--seed", f.seed, "seed for randomized probe points");
}

void add_roof(CLI::App* c, Flags& f) {
  c->add_option("--roof-box", f.roof_box, "path grid box x0:x1:y0:y1");
  c->add_option("--check-tol", f.check_tol, "tolerance for roof checks");
}

nqd::RunConfig make_config(const Flags& f) {
  nqd::RunConfig cfg;
  if (f.config) {
    std::ifstream in(*f.config);
    if (!in) throw nqd::ParseError("cannot read config '" + *f.config + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
      const auto [line, col] = nqd::json_detail::line_column(text, e.byte);
      throw nqd::ParseError("config '" + *f.config + "' line " + std::to_string(line) + ", column " +
                                std::to_string(col) + ": " + e.what(),
                            line, col);
    }
    nqd::apply_config(j, cfg);
  }
  if (f.tol) cfg.tol = *f.tol;
  if (f.check_tol) cfg.check_tol = *f.check_tol;
  if (f.dict) cfg.dictionary = *f.dict;
  if (f.radii) cfg.radii = nqd::parse_radii(*f.radii);
  if (f.angles) cfg.angles = *f.angles;
  if (f.seed) cfg.seed = *f.seed;
  if (f.n_closed) cfg.quadrature.n_closed = cfg.roof.n_closed = *f.n_closed;
  if (f.n_unbounded) cfg.quadrature.n_unbounded = cfg.roof.n_unbounded = *f.n_unbounded;
  if (f.box) cfg.grid_box = nqd::parse_box(*f.box);
  if (f.roof_box) cfg.roof.box = nqd::parse_box(*f.roof_box);
  if (f.spacing) cfg.grid_spacing = *f.spacing;
  if (f.out_dir) cfg.out_dir = *f.out_dir;
  if (!f.emit.empty()) cfg.emit = f.emit;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Arclength null quadrature domain checks and roof functions"};
  app.require_subcommand(1);
  Flags f;
  std::string domain;

  auto* catalog = app.add_subcommand("catalog", "list the built-in domains, or print one region");
  std::optional<std::string> catalog_name;
  bool catalog_json = false;
  catalog->add_option("name", catalog_name, "catalog name");
  catalog->add_flag("--json", catalog_json, "machine-readable listing");

  auto* verify = app.add_subcommand("verify", "residuals of the arclength quadrature identity");
  verify->add_option("domain", domain, "catalog name[:params] or domain JSON file")->required();
  verify->add_option("--tol", f.tol, "verification tolerance");
  verify->add_option("--dict", f.dict, "'grid' or a dictionary JSON file");
  add_common(verify, f);

  auto* roof = app.add_subcommand("roof", "build the candidate roof function");
  std::string roof_out;
  roof->add_option("domain", domain)->required();
  roof->add_option("--out", roof_out, "write roof.json here instead of stdout");
  add_common(roof, f);
  add_roof(roof, f);

  auto* check = app.add_subcommand("check-roof", "check the roof properties");
  check->add_option("domain", domain)->required();
  check->add_option("--tol", f.check_tol, "tolerance for roof checks");
  add_common(check, f);
  check->add_option("--roof-box", f.roof_box, "path grid box x0:x1:y0:y1");

  auto* growth = app.add_subcommand("growth", "max |u| / t on circles");
  growth->add_option("domain", domain)->required();
  growth->add_option("--radii", f.radii, "r0:r1:n, geometric");
  add_common(growth, f);
  add_roof(growth, f);

  auto* tracts = app.add_subcommand("tracts", "tract widths and lower bounds");
  bool negative = false;
  double level = 0.0;
  std::string emit_format = "json";
  tracts->add_option("domain", domain)->required();
  tracts->add_option("--radii", f.radii, "r0:r1:n, geometric");
  tracts->add_option("--angles", f.angles, "angular samples per circle");
  tracts->add_option("--level", level, "tracts of u > level");
  tracts->add_flag("--negative", negative, "tracts of u < 0 instead");
  tracts->add_option("--emit", emit_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  add_common(tracts, f);
  add_roof(tracts, f);

  auto* grid = app.add_subcommand("grid", "u and |grad u| on a grid inside the domain");
  std::string grid_format = "csv";
  grid->add_option("domain", domain)->required();
  grid->add_option("--box", f.box, "x0:x1:y0:y1");
  grid->add_option("--spacing", f.spacing, "grid spacing");
  grid->add_option("--format", grid_format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  add_common(grid, f);
  add_roof(grid, f);

  auto* run = app.add_subcommand("run", "verify, roof, checks, growth and positivity; writes reports");
  run->add_option("domain", domain)->required();
  run->add_option("--tol", f.tol, "verification tolerance");
  run->add_option("--dict", f.dict, "'grid' or a dictionary JSON file");
  run->add_option("--radii", f.radii, "r0:r1:n, geometric");
  run->add_option("--angles", f.angles, "angular samples per circle");
  run->add_option("--box", f.box, "grid.csv box x0:x1:y0:y1");
  run->add_option("--spacing", f.spacing, "grid.csv spacing");
  run->add_option("--out-dir", f.out_dir, "directory for reports");
  run->add_option("--emit", f.emit, "reports to write (default: all)");
  add_common(run, f);
  add_roof(run, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : nqd::kExitInput;
  }

  try {
    if (*catalog) return nqd::cmd_catalog(std::cout, catalog_name, catalog_json);
    const auto cfg = make_config(f);
    const auto d = nqd::load_domain(domain);
    if (*verify) return nqd::cmd_verify(std::cout, d, cfg);
    if (*roof) return nqd::cmd_roof(std::cout, d, cfg, roof_out);
    if (*check) return nqd::cmd_check_roof(std::cout, d, cfg);
    if (*growth) return nqd::cmd_growth(std::cout, d, cfg);
    if (*tracts) return nqd::cmd_tracts(std::cout, d, cfg, negative, level, emit_format);
    if (*grid) return nqd::cmd_grid(std::cout, std::cerr, d, cfg, grid_format);
    if (*run) return nqd::cmd_run(std::cout, std::cerr, d, cfg);
  } catch (const nqd::ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return nqd::kExitInput;
  } catch (const nqd::DomainError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return nqd::kExitInput;
  } catch (const nqd::MalformedCurve& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return nqd::kExitInput;
  } catch (const nqd::ConfigError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return nqd::kExitInput;
  } catch (const nqd::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return nqd::kExitFail;
  }
  return nqd::kExitInput;
}
