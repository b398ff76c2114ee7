#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "nqd/catalog.hpp"
#include "nqd/roof.hpp"
#include "oracles.hpp"

using namespace nqd;

namespace {

const RoofCandidate& disk_roof() {
  static const RoofCandidate r = build_roof(disk_exterior(1.0));
  return r;
}

const RoofCandidate& ellipse_roof() {
  static const RoofCandidate r = build_roof(ellipse_exterior(2.0, 1.0));
  return r;
}

const RoofCandidate& hhp_roof() {
  static const RoofCandidate r = build_roof(hhp());
  return r;
}

}  // namespace

TEST(BuildRoof, DiskExteriorIsLogModulus) {
  const auto& r = disk_roof();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> rad(1.3, 7.0), ang(0.0, kTwoPi);
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const cplx z = std::polar(rad(rng), ang(rng));
    worst = std::max(worst, std::abs(r.eval_u(z) - std::log(std::abs(z))));
  }
  EXPECT_LT(worst, 1e-8);
  // Re f(3) = 0, so Re f = log|z| - log 3 and the offset restores log|z|.
  EXPECT_NEAR(r.offset(), std::log(3.0), 1e-10);
  ASSERT_EQ(r.periods().size(), 1u);
  EXPECT_NEAR(r.periods()[0].value.real(), kTwoPi, 1e-10);
  EXPECT_LT(std::abs(r.periods()[0].value.imag()), 1e-12);
}

TEST(BuildRoof, EvalAndGradExamples) {
  const auto& r = disk_roof();
  const double e = std::exp(1.0);
  EXPECT_NEAR(r.eval_u(e), 1.0, 1e-10);
  EXPECT_NEAR(std::abs(r.grad_u(e) - 1.0 / e), 0.0, 1e-12);

  const auto hp = build_roof(halfplane());
  EXPECT_NEAR(hp.eval_u(3.0 * kI), 3.0, 1e-12);
  EXPECT_NEAR(std::abs(hp.grad_u(3.0 * kI) - kI), 0.0, 1e-12);
  EXPECT_NEAR(hp.eval_u(cplx(-17.0, 4.5)), 4.5, 1e-10);
}

TEST(BuildRoof, HhpMatchesClosedFormRoof) {
  const auto& r = hhp_roof();
  for (cplx z : {cplx(0, 0), cplx(1.0, 2.0), cplx(-3.0, -8.0), cplx(6.0, 0.5), cplx(-10.0, 15.0)}) {
    EXPECT_NEAR(r.eval_u(z), oracle::hhp_roof(z), 1e-9) << z;
  }
  for (const auto& bc : r.boundary_constants()) EXPECT_LT(bc.spread, 1e-9);
}

TEST(BuildRoof, CollarSamplesAreFlaggedAndAccurate) {
  const auto& r = disk_roof();
  const cplx z = std::polar(1.02, 0.4);
  EXPECT_THROW(r.eval_u(z), NearBoundary);
  const auto s = r.sample(z);
  EXPECT_TRUE(s.in_collar);
  EXPECT_NEAR(s.u, std::log(1.02), 1e-9);
  EXPECT_NEAR(std::abs(s.grad - 1.0 / std::conj(z)), 0.0, 1e-9);
}

TEST(BuildRoof, BoundaryValuesVanish) {
  const auto& r = disk_roof();
  for (std::size_t i : {0u, 37u, 128u}) EXPECT_NEAR(r.boundary_value(i), 0.0, 1e-10);
}

TEST(BuildRoof, BasepointInCollarIsAPathingError) {
  const Domain d({disk_exterior(1.0).component(0)}, cplx(1.01, 0.0));
  EXPECT_THROW(build_roof(d), PathingError);
}

TEST(BuildRoof, SampleOutsideDomainIsADomainError) {
  const auto r = build_roof(hhp());
  EXPECT_THROW(r.sample({0.0, 4.0}), DomainError);
  EXPECT_THROW(r.sample({0.0, 2.6}), DomainError);
  EXPECT_THROW(build_roof(disk_exterior(1.0)).sample({0.3, 0.0}), DomainError);
  EXPECT_NEAR(r.sample({0.0, 0.0}).u, 1.0, 1e-10);
}

TEST(BuildRoof, BadConfigRejected) {
  RoofConfig cfg;
  cfg.grid_spacing = -1.0;
  cfg.box = Box{1.0, 0.0, 0.0, 1.0};
  EXPECT_THROW(build_roof(disk_exterior(1.0), cfg), ConfigError);
}

TEST(BuildRoof, StrictPeriodsOnTwoHoles) {
  const auto hole = disk_exterior(1.0).component(0);
  const Domain d({hole.mapped(1.0, -2.0), hole.mapped(1.0, 2.0)}, cplx(0.0, 3.0));
  RoofConfig cfg;
  cfg.strict_periods = true;
  const auto r = build_roof(d, cfg);
  ASSERT_EQ(r.periods().size(), 2u);
  for (const auto& p : r.periods()) {
    EXPECT_NEAR(p.value.real(), kTwoPi, 1e-9);
    EXPECT_LT(std::abs(p.value.imag()), 1e-9);
  }
}

TEST(RoofInvariants, MaximumModulus) {
  for (const RoofCandidate* r : {&disk_roof(), &hhp_roof()}) {
    const auto rep = check_roof(*r, {1e-8});
    EXPECT_LE(rep.max_grid_h, 1.0 + 1e-8);
  }
}

TEST(RoofInvariants, PathIndependence) {
  const auto& r = ellipse_roof();
  const cplx z{0.3, 2.1};
  // Two anchors on either side of z.
  const cplx a{-0.5, 2.5}, b{1.5, 1.75};
  ASSERT_TRUE(r.visible(a, z));
  ASSERT_TRUE(r.visible(b, z));
  const cplx fa = r.f(a) + r.segment(a, z);
  const cplx fb = r.f(b) + r.segment(b, z);
  EXPECT_LT(std::abs(fa.real() - fb.real()), 1e-11);
}

TEST(RoofInvariants, FiniteDifferenceGradientOrder) {
  const auto& r = ellipse_roof();
  std::vector<std::vector<double>> errs;
  for (const cplx z : roof_detail::interior_points(r, 20, 0.5, 99)) {
    const cplx g = r.grad_u(z);
    std::vector<double> e;
    for (double s : {0.2, 0.1, 0.05, 0.025}) e.push_back(std::abs(fd_gradient(r, z, s) - g));
    errs.push_back(e);
  }
  EXPECT_GE(roof_detail::observed_order(errs, 1e-10), 1.9);
}

TEST(RoofInvariants, GradientBoundaryLimit) {
  for (const RoofCandidate* r : {&disk_roof(), &hhp_roof()}) {
    const auto region = r->probe_region();
    const std::size_t i = region[region.size() / 3];
    const double collar = kCollarFactor * r->evaluator().spacing()[i];
    std::vector<double> ds;
    for (double s = 2.0 * collar; s > collar / 64.0; s *= 0.5) ds.push_back(s);
    const auto prof = r->normal_profile(i, ds);
    for (std::size_t k = 1; k < prof.size(); ++k) {
      if (prof[k - 1] < 1e-12) break;
      EXPECT_LT(prof[k], prof[k - 1]);
    }
    EXPECT_LT(prof.back(), 1e-2);
  }
}

TEST(CheckRoof, CatalogVerdicts) {
  EXPECT_TRUE(check_roof(disk_roof(), {1e-8}).passed());
  EXPECT_TRUE(check_roof(hhp_roof(), {1e-6}).passed());
  const auto ell = check_roof(ellipse_roof(), {1e-6});
  EXPECT_FALSE(ell.passed());
  EXPECT_FALSE(ell.find("boundary_gradient")->passed);
  EXPECT_FALSE(ell.find("boundary_constancy")->passed);
  EXPECT_FALSE(ell.find("forward_consistency")->passed);
  EXPECT_TRUE(ell.find("harmonicity")->passed);
}

TEST(CheckRoof, EllipseBoundaryDataAgainstLogPotential) {
  // Re f(z) - Re f(z0) = (1/2 pi) * integral of (log|zeta - z| - log|zeta - z0|) ds.
  const auto& r = ellipse_roof();
  const auto rule = QuadratureRule::build(r.domain(), 1024, 1024, 25.0);
  const cplx z0 = r.basepoint();
  for (cplx z : {cplx(0.0, 3.0), cplx(-4.0, -1.0), cplx(2.5, 0.5)}) {
    const double pot =
        integrate_ds([&](cplx s) { return cplx{std::log(std::abs(s - z) / std::abs(s - z0)), 0.0}; }, rule).real() /
        kTwoPi;
    EXPECT_NEAR(r.f(z).real(), pot, 1e-10) << z;
  }
}
