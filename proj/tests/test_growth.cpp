#include <cmath>

#include <gtest/gtest.h>

#include "nqd/catalog.hpp"
#include "nqd/growth.hpp"

using namespace nqd;

namespace {

Sampler whole_plane(std::function<double(cplx)> f) {
  return [f](cplx z) -> std::optional<double> { return f(z); };
}

const Sampler re_z = whole_plane([](cplx z) { return z.real(); });
const Sampler re_z2 = whole_plane([](cplx z) { return (z * z).real(); });

// Re z^3 on the halfplane Im(e^{i pi/6} z) > 0, whose edge lies on the zero
// set of Re z^3: sectors (-pi/6, pi/6) +, (pi/6, pi/2) -, (pi/2, 5pi/6) +.
const Sampler re_z3_masked = [](cplx z) -> std::optional<double> {
  if ((std::polar(1.0, kPi / 6) * z).imag() <= 0.0) return std::nullopt;
  return (z * z * z).real();
};

}  // namespace

TEST(GrowthRatio, CatalogRoofs) {
  const auto disk = build_roof(disk_exterior(1.0));
  const auto g = growth_ratio(disk, geometric_radii(1.5, 7.0, 6));
  for (const auto& row : g.rows) EXPECT_NEAR(row.ratio, std::log(row.t) / row.t, 1e-8);
  EXPECT_LE(g.max_ratio, 1.0 / std::exp(1.0) + 1e-12);
  EXPECT_TRUE(g.bounded());
  for (const auto& row : g.rows) EXPECT_GE(row.bound_ratio, row.ratio);

  const auto hp = build_roof(halfplane());
  const auto gh = growth_ratio(hp, {2.0, 5.0, 10.0, 20.0});
  // Sampled at half-offset angles, so the top of the circle is missed by sin(pi/256).
  for (const auto& row : gh.rows) EXPECT_NEAR(row.ratio, 1.0, 1e-4);
}

TEST(GrowthRatio, QuadraticGrowthFails) {
  const auto g = growth_ratio(re_z2, {1.0, 2.0, 4.0, 8.0});
  EXPECT_NEAR(g.rows.back().ratio, 8.0 * std::cos(kTwoPi / 256), 1e-12);
  EXPECT_FALSE(g.bounded());
}

TEST(GrowthRatio, NoSamplesIsAnError) {
  const Sampler none = [](cplx) -> std::optional<double> { return std::nullopt; };
  EXPECT_THROW(growth_ratio(none, {1.0}), InvalidInput);
}

TEST(TractLengths, Examples) {
  for (double t : {0.5, 3.0, 40.0}) {
    const auto one = tract_lengths(re_z, t, TractPredicate::above(0.0));
    ASSERT_EQ(one.size(), 1u);
    EXPECT_NEAR(one[0].theta, kPi * t, 1e-6 * t);
    const auto two = tract_lengths(re_z2, t, TractPredicate::above(0.0));
    ASSERT_EQ(two.size(), 2u);
    for (const auto& tr : two) EXPECT_NEAR(tr.theta, 0.5 * kPi * t, 0.01 * 0.5 * kPi * t);
  }
  const Sampler none = [](cplx) -> std::optional<double> { return std::nullopt; };
  EXPECT_TRUE(tract_lengths(none, 1.0, TractPredicate::above(0.0)).empty());
  EXPECT_THROW(tract_lengths(re_z, 1.0, TractPredicate::above(0.0), 512), ConfigError);
}

TEST(TractLengths, WrappingRunIsOneTract) {
  // cos(theta - 0.3) > 0 on (0.3 - pi/2, 0.3 + pi/2), which straddles angle 0.
  const Sampler shifted = whole_plane([](cplx z) { return (z * std::polar(1.0, -0.3)).real(); });
  const auto runs = tract_runs(shifted, 2.0, TractPredicate::above(0.0));
  ASSERT_EQ(runs.size(), 1u);
  EXPECT_NEAR(runs[0].begin, 0.3 + 3 * kPi / 2, 1e-6);
  EXPECT_NEAR(runs[0].end, 0.3 + 5 * kPi / 2, 1e-6);
}

TEST(CauchySchwarz, ThreeEqualTracts) {
  for (double t : {1.0, 7.5, 100.0}) {
    const double th = kTwoPi * t / 3.0;
    const auto c = cauchy_schwarz_chain({th, th, th}, t);
    EXPECT_NEAR(c.lhs, 9.0 / (2.0 * t), 1e-12);
    EXPECT_NEAR(c.lhs, c.bound, 1e-12);
    EXPECT_TRUE(c.holds(1e-12));
  }
  const auto uneven = cauchy_schwarz_chain({1.0, 2.0, 3.0}, 6.0 / kTwoPi);
  EXPECT_GT(uneven.lhs, uneven.bound + 0.1);
}

TEST(PlLowerBound, ClosedForms) {
  std::vector<std::pair<double, double>> quarter, half, third;
  for (double t : geometric_radii(1.0, 10.0, 9)) {
    quarter.emplace_back(t, kPi * t / 2);
    half.emplace_back(t, kPi * t);
    third.emplace_back(t, kTwoPi * t / 3);
  }
  EXPECT_NEAR(pl_lower_bound(quarter, 10.0), 2.0 * std::log(10.0), 1e-12);
  EXPECT_NEAR(pl_lower_bound(half, 10.0), std::log(10.0), 1e-12);
  // Three tracts of width 2 pi t / 3: combined bound is (9/2) log r.
  for (double r : {2.0, 5.0, 10.0}) EXPECT_NEAR(3.0 * pl_lower_bound(third, r), 4.5 * std::log(r), 1e-12);
  quarter[4].second = 0.0;
  EXPECT_THROW(pl_lower_bound(quarter, 10.0), TractPinch);
}

TEST(TractReport, QuadraticBenchmark) {
  const auto radii = geometric_radii(1.0, 50.0, 12);
  const auto rep = tract_report(re_z2, radii, TractPredicate::above(0.0));
  EXPECT_EQ(rep.tract_ids().size(), 2u);
  EXPECT_TRUE(rep.warnings.empty());
  EXPECT_LE(rep.max_fill(), 1.0 + 1.0 / 4096);
  for (int id : rep.tract_ids()) {
    const auto es = rep.tract(id);
    ASSERT_EQ(es.size(), radii.size());
    double prev_m = 0.0, prev_pl = -1.0;
    std::vector<double> gaps;
    for (const auto& e : es) {
      EXPECT_GE(e.m_k, prev_m);
      EXPECT_GE(e.pl_bound, prev_pl);
      prev_m = e.m_k;
      prev_pl = e.pl_bound;
      if (e.t >= 2.0) gaps.push_back(std::log(e.m_k) - e.pl_bound);
    }
    const auto [lo, hi] = std::minmax_element(gaps.begin(), gaps.end());
    // log M - PL bound constant in r (both are 2 log r + const).
    EXPECT_LT(*hi - *lo, 0.02 * 2.0 * std::log(50.0));
  }
  for (std::size_t k = 1; k < rep.m_global.size(); ++k) EXPECT_GE(rep.m_global[k], rep.m_global[k - 1]);
}

TEST(Certificate, SyntheticCubicGivesSuperlinearBound) {
  const auto cert = three_tract_certificate(re_z3_masked, geometric_radii(1.0, 20.0, 8));
  EXPECT_EQ(cert.verdict, Certificate::Contradiction);
  EXPECT_GE(cert.bound_slope, 1.5);
  EXPECT_NEAR(cert.bound_slope, 3.0, 0.05);
  for (const auto& row : cert.rows) EXPECT_TRUE(row.chain.holds(1e-12));
}

TEST(Certificate, PositiveRoofs) {
  EXPECT_EQ(three_tract_certificate(build_roof(disk_exterior(1.0)), {2.0, 4.0}).verdict, Certificate::PositiveOnGrid);
  EXPECT_EQ(three_tract_certificate(build_roof(halfplane()), {2.0, 4.0}).verdict, Certificate::PositiveOnGrid);
}

TEST(Certificate, NegativeWithoutThreeTractsIsInconclusive) {
  // Re z has one negative and one positive tract.
  const auto cert = three_tract_certificate(re_z, {1.0, 2.0, 4.0});
  EXPECT_EQ(cert.verdict, Certificate::Inconclusive);
}

TEST(Heins, TwoHalfplanes) {
  const Sampler u1 = whole_plane([](cplx z) { return std::max(z.real(), 0.0); });
  const Sampler u2 = whole_plane([](cplx z) { return std::max(-z.real(), 0.0); });
  for (const auto& row : heins_functional({u1, u2}, {1.0, 2.0, 4.0, 8.0}))
    EXPECT_NEAR(row.value, std::sqrt(kPi), 1e-3);
}

TEST(Heins, Preconditions) {
  const Sampler u1 = whole_plane([](cplx z) { return std::max(z.real(), 0.0); });
  const Sampler zero = whole_plane([](cplx) { return 0.0; });
  EXPECT_THROW(heins_functional({u1, zero}, {1.0}), InvalidInput);
  EXPECT_THROW(heins_functional({u1, u1}, {1.0}), InvalidInput);
  EXPECT_THROW(heins_functional({re_z}, {1.0}), InvalidInput);
}

TEST(Heins, CubicSectorsGrow) {
  std::vector<Sampler> us;
  for (int k = 0; k < 3; ++k) {
    const double c = kTwoPi * k / 3.0;
    us.push_back([c](cplx z) -> std::optional<double> {
      const double a = std::remainder(std::arg(z) - c, kTwoPi);
      return std::abs(a) < kPi / 6 ? std::max((z * z * z).real(), 0.0) : 0.0;
    });
  }
  const auto rows = heins_functional(us, {1.0, 2.0, 4.0, 8.0});
  for (const auto& row : rows) EXPECT_NEAR(row.value, std::sqrt(kPi / 2) * std::pow(row.r, 1.5), 1e-3 * row.value);
}
