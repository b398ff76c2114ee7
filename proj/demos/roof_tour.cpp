// Builds the roof of each catalog domain and prints a few values next to the
// known closed forms, then the tract widths of the HHP roof on a few circles.
#include <cmath>
#include <cstdio>

#include "nqd/catalog.hpp"
#include "nqd/growth.hpp"
#include "nqd/nqd_verify.hpp"
#include "nqd/roof.hpp"

using namespace nqd;

namespace {

// HHP roof in closed form: u = Re cosh(psi(z)) with psi + sinh psi = z (Newton from psi = z).
double hhp_exact(cplx z) {
  cplx w = std::asinh(z / 2.0);
  for (int k = 0; k < 60; ++k) w -= (w + std::sinh(w) - z) / (1.0 + std::cosh(w));
  return std::cosh(w).real();
}

}  // namespace

int main() {
  for (const auto& e : catalog_entries()) {
    const auto d = catalog(e.name);
    const auto v = verify_nqd(d, 1e-8);
    std::printf("%-17s verify: %-4s max|residual| = %.2e over %zu tests\n", e.name.c_str(), to_string(v.verdict),
                v.max_abs_residual, v.admissible_count);
  }

  std::printf("\ndisk exterior: u against log|z|\n");
  const auto disk = build_roof(disk_exterior(1.0));
  for (double r : {1.01, 1.5, 3.0, 10.0}) {
    const cplx z = std::polar(r, 0.7);
    const auto s = disk.sample(z);
    std::printf("  |z| = %5.2f  u = %.15f  log|z| = %.15f%s\n", r, s.u, std::log(r), s.in_collar ? "  (collar)" : "");
  }

  std::printf("\nhhp: u against Re cosh(psi(z))\n");
  const auto hhp_roof = build_roof(hhp());
  for (const cplx z : {cplx{0, 0}, cplx{1, 1}, cplx{-2, 0.5}, cplx{4, -10}}) {
    std::printf("  z = %5.1f%+5.1fi  u = %.12f  exact = %.12f\n", z.real(), z.imag(), hhp_roof.sample(z).u,
                hhp_exact(z));
  }
  std::printf("  C = %.12f, boundary constants:", hhp_roof.offset());
  for (const auto& b : hhp_roof.boundary_constants()) std::printf(" %s %.3e", b.label.c_str(), b.value + hhp_roof.offset());
  std::printf("\n");

  std::printf("\nhhp: tracts of u > 0 on circles\n");
  const auto rep = tract_report(hhp_roof.sampler(), {2.0, 4.0, 8.0, 16.0}, TractPredicate::above(0.0));
  for (const auto& e : rep.entries)
    std::printf("  t = %5.1f  tract %d  theta / t = %.4f  M_k = %.4e\n", e.t, e.tract, e.theta / e.t, e.m_k);
  for (const auto& w : rep.warnings) std::printf("  note: %s\n", w.c_str());

  const auto ellipse = check_roof(build_roof(ellipse_exterior(2.0, 1.0)));
  std::printf("\nellipse exterior roof checks:\n");
  for (const auto& it : ellipse.items)
    std::printf("  %-22s %s  value %.3e (threshold %.1e)\n", it.name.c_str(), it.passed ? "pass" : "FAIL", it.value,
                it.threshold);
  return 0;
}
