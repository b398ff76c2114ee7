#pragma once

// Closed-form reference values used by the unit and acceptance tests.

#include <cmath>
#include <complex>
#include <stdexcept>

namespace oracle {

using cplx = std::complex<double>;

/// Inverse of w -> w + sinh w on the strip |Im w| < pi/2.
inline cplx hhp_preimage(cplx z) {
  cplx w = std::abs(z) > 1.0 ? std::asinh(z) : 0.5 * z;
  for (int it = 0; it < 200; ++it) {
    const cplx step = (w + std::sinh(w) - z) / (1.0 + std::cosh(w));
    w -= step;
    if (std::abs(step) < 1e-15 * (1.0 + std::abs(w))) return w;
  }
  throw std::runtime_error("hhp_preimage: Newton iteration did not converge");
}

/// Roof of the catalog hhp domain: Re cosh(w(z)), zero on both boundary curves.
inline double hhp_roof(cplx z) { return std::cosh(hhp_preimage(z)).real(); }

/// Analytic extension of the conjugate tangent on the hhp domain.
inline cplx hhp_extension(cplx z) { return cplx{0.0, 1.0} * std::tanh(0.5 * hhp_preimage(z)); }

/// (1/2 pi) * integral over the circle of radius r of log|zeta - z| ds, |z| > r.
inline double disk_log_potential(double r, cplx z) { return r * std::log(std::abs(z)); }

}  // namespace oracle
