#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>

#include "nqd/pipeline.hpp"

using namespace nqd;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<double>> read_csv(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    std::vector<double> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(row);
  }
  return rows;
}

std::filesystem::path scratch(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("nqd_test_" + name);
  std::filesystem::remove_all(p);
  return p;
}

}  // namespace

TEST(GridDump, DiskExcludesTheHole) {
  const auto r = build_roof(disk_exterior(1.0));
  const auto g = grid_dump(r, Box{-3, 3, -3, 3}, 0.1);
  EXPECT_EQ(g.skipped, 0u);
  std::size_t collar = 0;
  for (const auto& row : g.rows) {
    EXPECT_GT(std::abs(row.z), 1.0);
    EXPECT_NEAR(row.u, std::log(std::abs(row.z)), 1e-8);
    EXPECT_NEAR(row.grad_abs, 1.0 / std::abs(row.z), 1e-6);
    collar += row.in_collar;
  }
  EXPECT_GT(collar, 0u);
  EXPECT_EQ(collar, g.collar_rows());
  // 61 x 61 lattice minus the points with |z| <= 1.
  std::size_t outside = 0;
  for (int j = -30; j <= 30; ++j)
    for (int i = -30; i <= 30; ++i) outside += std::hypot(0.1 * i, 0.1 * j) > 1.0 + 1e-9;
  EXPECT_EQ(g.rows.size(), outside);
}

TEST(GridDump, HhpMembershipFollowsTheRegionFormula) {
  const auto r = build_roof(hhp());
  const auto g = grid_dump(r, Box{-3, 3, -3, 3}, 0.25);
  for (const auto& row : g.rows) EXPECT_LT(std::abs(row.z.imag()), kPi / 2 + std::cosh(row.z.real()));
  std::size_t inside = 0;
  for (int j = 0; j <= 24; ++j)
    for (int i = 0; i <= 24; ++i) {
      const double x = -3 + 0.25 * i, y = -3 + 0.25 * j;
      inside += std::abs(y) < kPi / 2 + std::cosh(x);
    }
  EXPECT_EQ(g.rows.size() + g.skipped, inside);
  for (const auto& row : g.rows) EXPECT_GT(row.u, 0.0);
}

TEST(Pipeline, HalfplaneGridIsImaginaryPart) {
  RunConfig cfg;
  cfg.out_dir = scratch("halfplane").string();
  cfg.emit = {"grid.csv"};
  std::ostringstream out, err;
  EXPECT_EQ(cmd_run(out, err, halfplane(), cfg), kExitPass);
  const auto dir = std::filesystem::path(cfg.out_dir);
  EXPECT_FALSE(std::filesystem::exists(dir / "roof.json"));
  const auto rows = read_csv(slurp(dir / "grid.csv"));
  ASSERT_GT(rows.size(), 1000u);
  for (const auto& row : rows) {
    ASSERT_EQ(row.size(), 5u);
    EXPECT_GT(row[1], 0.0);
    EXPECT_NEAR(row[2], row[1], 1e-9);
  }
}

TEST(Pipeline, DiskRunWritesDeterministicReports) {
  RunConfig cfg;
  cfg.tol = 1e-8;
  std::string first[4];
  const char* names[4] = {"verification.json", "roof.json", "tracts.csv", "grid.csv"};
  for (int pass = 0; pass < 2; ++pass) {
    cfg.out_dir = scratch("disk" + std::to_string(pass)).string();
    std::ostringstream out, err;
    EXPECT_EQ(cmd_run(out, err, disk_exterior(1.0), cfg), kExitPass);
    for (int k = 0; k < 4; ++k) {
      const auto text = slurp(std::filesystem::path(cfg.out_dir) / names[k]);
      EXPECT_FALSE(text.empty());
      if (pass == 0) first[k] = text;
      else EXPECT_EQ(text, first[k]) << names[k];
    }
  }
  const auto roof = nlohmann::json::parse(first[1]);
  EXPECT_NEAR(roof["C"].get<double>(), std::log(3.0), 1e-8);
  EXPECT_NEAR(roof["periods"][0]["value"][0].get<double>(), kTwoPi, 1e-10);
  const auto ver = nlohmann::json::parse(first[0]);
  EXPECT_EQ(ver["verdict"], "pass");
  EXPECT_GE(ver["admissible_count"].get<int>(), 20);
  EXPECT_EQ(first[2].substr(0, first[2].find('\n')), "t,tract_id,theta,Mk,pl_bound");
}

TEST(Pipeline, EllipseFails) {
  RunConfig cfg;
  cfg.out_dir = scratch("ellipse").string();
  cfg.emit = {"verification.json"};
  std::ostringstream out, err;
  EXPECT_EQ(cmd_run(out, err, ellipse_exterior(2.0, 1.0), cfg), kExitFail);
  const auto s = nlohmann::json::parse(out.str());
  EXPECT_EQ(s["verification"], "fail");
  EXPECT_EQ(s["roof_checks"], "fail");
}

TEST(Pipeline, UnknownReportIsAConfigError) {
  RunConfig cfg;
  cfg.emit = {"plot.png"};
  std::ostringstream out, err;
  EXPECT_THROW(cmd_run(out, err, disk_exterior(1.0), cfg), ConfigError);
}

TEST(Pipeline, VerifyCommandExitCodes) {
  RunConfig cfg;
  std::ostringstream out;
  EXPECT_EQ(cmd_verify(out, disk_exterior(1.0), cfg), kExitPass);
  cfg.tol = 1e-3;
  std::ostringstream out2;
  EXPECT_EQ(cmd_verify(out2, ellipse_exterior(2.0, 1.0), cfg), kExitFail);
  // An N_max too small to converge on the halfplane is reported, not thrown.
  RunConfig tight;
  tight.quadrature.n_max = 64;
  tight.quadrature.n_unbounded = 32;
  tight.quadrature.tol = 1e-14;
  tight.tol = 1e-20;
  std::ostringstream out3;
  const int code = cmd_verify(out3, halfplane(), tight);
  EXPECT_TRUE(code == kExitUnconverged || code == kExitFail);
}

TEST(RunConfig, JsonMergesAndValidates) {
  RunConfig cfg;
  apply_config(nlohmann::json::parse(R"({"tol": 1e-9, "radii": "1:8:4", "quadrature": {"n_closed": 128},
    "roof": {"box": [-4, 4, -4, 4]}, "grid": {"spacing": 0.5}, "emit": ["roof.json"]})"),
               cfg);
  EXPECT_EQ(cfg.tol, 1e-9);
  ASSERT_EQ(cfg.radii.size(), 4u);
  EXPECT_NEAR(cfg.radii.back(), 8.0, 1e-12);
  EXPECT_EQ(cfg.quadrature.n_closed, 128);
  EXPECT_EQ(cfg.roof.box->x0, -4.0);
  EXPECT_EQ(cfg.grid_spacing, 0.5);
  EXPECT_EQ(cfg.emit, std::vector<std::string>{"roof.json"});
  cfg.validate();
  EXPECT_THROW(apply_config(nlohmann::json::parse(R"({"tolerance": 1})"), cfg), ParseError);
  EXPECT_THROW(apply_config(nlohmann::json::parse(R"({"tol": "small"})"), cfg), ParseError);
  RunConfig bad;
  bad.grid_spacing = -1;
  EXPECT_THROW(bad.validate(), ConfigError);
  EXPECT_THROW(parse_radii("2:20"), ConfigError);
  EXPECT_THROW(parse_box("1:0:0:1"), ConfigError);
}

TEST(Catalog, ListingAndRegionFormula) {
  std::ostringstream out;
  cmd_catalog(out, std::nullopt, true);
  const auto j = nlohmann::json::parse(out.str());
  ASSERT_EQ(j.size(), 4u);
  EXPECT_FALSE(j[3]["arclength_nqd"].get<bool>());
  std::ostringstream hhp_out;
  cmd_catalog(hhp_out, std::string("hhp"), false);
  EXPECT_NE(hhp_out.str().find("cosh x < y <"), std::string::npos);
  EXPECT_THROW(cmd_catalog(hhp_out, std::string("torus"), false), DomainError);
}
