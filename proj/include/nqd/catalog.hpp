#pragma once

#include <cmath>
#include <string>
#include <string_view>
#include <vector>

#include "nqd/errors.hpp"
#include "nqd/geometry.hpp"

namespace nqd {

struct CatalogEntry {
  std::string name;
  std::string parameters;
  std::string region;
  std::string classification;
  bool arclength_nqd;
};

/// The built-in example domains and their classification status.
inline const std::vector<CatalogEntry>& catalog_entries() {
  static const std::vector<CatalogEntry> entries = {
      {"disk-exterior", "r = 1 (radius)", "{ z : |z| > r }",
       "compact boundary: the exterior of a disk is the only arclength NQD of this kind; roof u = log(|z|/r)", true},
      {"halfplane", "(none)", "{ x+iy : y > 0 }",
       "exactly one unbounded boundary component: the halfplane is the only arclength NQD of this kind; roof u = y",
       true},
      {"hhp", "(none)", "{ x+iy : -pi/2 - cosh x < y < pi/2 + cosh x }",
       "two unbounded boundary components, simply connected: the Hauswirth-Helein-Pacard example is the only "
       "arclength NQD of this kind (two unbounded components with multiply connected domain remains open)",
       true},
      {"ellipse-exterior", "a = 2, b = 1 (semi-axes)", "{ x+iy : x^2/a^2 + y^2/b^2 > 1 }",
       "negative control: an area null quadrature domain but not an arclength NQD unless a = b", false},
  };
  return entries;
}

namespace catalog_detail {

inline double positive(double v, const char* what) {
  if (!(v > 0.0) || !std::isfinite(v)) throw DomainError(std::string("catalog parameter '") + what + "' must be positive");
  return v;
}

inline double param_or(const std::vector<double>& params, std::size_t i, double fallback) {
  return i < params.size() ? params[i] : fallback;
}

}  // namespace catalog_detail

/// Exterior of the disk |z| <= r, boundary traversed clockwise.
inline Domain disk_exterior(double r = 1.0, DomainOptions options = {}) {
  catalog_detail::positive(r, "r");
  CurveParam p{
      [r](double t) { return r * std::exp(-kI * t); },
      [r](double t) { return -kI * r * std::exp(-kI * t); },
      [r](double t) { return -r * std::exp(-kI * t); },
  };
  return Domain({CurveComponent::closed("circle", std::move(p))}, cplx{3.0 * r, 0.0}, "disk-exterior", options);
}

/// Upper halfplane, boundary the real axis traversed left to right.
inline Domain halfplane(DomainOptions options = {}) {
  CurveParam p{
      [](double t) { return cplx{t, 0.0}; },
      [](double) { return cplx{1.0, 0.0}; },
      [](double) { return cplx{0.0, 0.0}; },
  };
  return Domain({CurveComponent::unbounded("real-axis", std::move(p), 1e6, cplx{1.0, 0.0}, cplx{1.0, 0.0})},
                cplx{0.0, 1.0}, "halfplane", options);
}

/// The simply connected exceptional domain bounded by y = +-(pi/2 + cosh x).
/// The lower curve runs left to right, the upper one right to left.
inline Domain hhp(DomainOptions options = {}) {
  constexpr double kHalfPi = kPi / 2.0;
  CurveParam lower{
      [](double t) { return cplx{t, -(kHalfPi + std::cosh(t))}; },
      [](double t) { return cplx{1.0, -std::sinh(t)}; },
      [](double t) { return cplx{0.0, -std::cosh(t)}; },
  };
  CurveParam upper{
      [](double t) { return cplx{-t, kHalfPi + std::cosh(t)}; },
      [](double t) { return cplx{-1.0, std::sinh(t)}; },
      [](double t) { return cplx{0.0, std::cosh(t)}; },
  };
  std::vector<CurveComponent> comps;
  comps.push_back(CurveComponent::unbounded("lower", std::move(lower), 30.0, -kI, kI));
  comps.push_back(CurveComponent::unbounded("upper", std::move(upper), 30.0, kI, -kI));
  return Domain(std::move(comps), cplx{0.0, 0.0}, "hhp", options);
}

/// Exterior of the ellipse x^2/a^2 + y^2/b^2 <= 1, boundary clockwise.
inline Domain ellipse_exterior(double a = 2.0, double b = 1.0, DomainOptions options = {}) {
  catalog_detail::positive(a, "a");
  catalog_detail::positive(b, "b");
  CurveParam p{
      [a, b](double t) { return cplx{a * std::cos(t), -b * std::sin(t)}; },
      [a, b](double t) { return cplx{-a * std::sin(t), -b * std::cos(t)}; },
      [a, b](double t) { return cplx{-a * std::cos(t), b * std::sin(t)}; },
  };
  return Domain({CurveComponent::closed("ellipse", std::move(p))}, cplx{3.0 * std::max(a, b), 0.0},
                "ellipse-exterior", options);
}

/// Build a catalog domain by name.
inline Domain catalog(std::string_view name, const std::vector<double>& params = {}, DomainOptions options = {}) {
  using catalog_detail::param_or;
  if (name == "disk-exterior") return disk_exterior(param_or(params, 0, 1.0), options);
  if (name == "halfplane") return halfplane(options);
  if (name == "hhp") return hhp(options);
  if (name == "ellipse-exterior") return ellipse_exterior(param_or(params, 0, 2.0), param_or(params, 1, 1.0), options);
  throw DomainError("unknown catalog domain '" + std::string(name) + "'");
}

inline bool is_catalog_name(std::string_view name) {
  for (const auto& e : catalog_entries())
    if (e.name == name) return true;
  return false;
}

/// Parse "name" or "name:p1,p2,..." into a catalog domain.
inline Domain catalog_from_name(std::string_view text, DomainOptions options = {}) {
  const auto colon = text.find(':');
  const std::string_view name = text.substr(0, colon);
  std::vector<double> params;
  if (colon != std::string_view::npos) {
    std::string rest(text.substr(colon + 1));
    std::size_t pos = 0;
    while (pos <= rest.size()) {
      const auto comma = rest.find(',', pos);
      const std::string item = rest.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
      try {
        std::size_t used = 0;
        params.push_back(std::stod(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        throw ParseError("bad catalog parameter '" + item + "' in '" + std::string(text) + "'");
      }
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
  }
  return catalog(name, params, options);
}

}  // namespace nqd
