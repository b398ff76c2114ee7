#pragma once

#include <cmath>
#include <complex>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "nqd/catalog.hpp"
#include "nqd/errors.hpp"
#include "nqd/expression.hpp"
#include "nqd/geometry.hpp"

namespace nqd {

namespace json_detail {

using nlohmann::json;

[[noreturn]] inline void schema_error(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what);
}

inline double number(const json& j, const std::string& where) {
  if (!j.is_number()) schema_error(where, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) schema_error(where, "expected a finite number");
  return v;
}

inline cplx point(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) schema_error(where, "expected [re, im]");
  return {number(j[0], where + "/0"), number(j[1], where + "/1")};
}

inline std::vector<cplx> points(const json& j, const std::string& where, std::size_t min_count) {
  if (!j.is_array()) schema_error(where, "expected an array of [re, im] points");
  std::vector<cplx> out;
  for (std::size_t k = 0; k < j.size(); ++k) out.push_back(point(j[k], where + "/" + std::to_string(k)));
  if (out.size() < min_count) schema_error(where, "needs at least " + std::to_string(min_count) + " points");
  return out;
}

inline double signed_area2(const std::vector<cplx>& z) {
  double a = 0.0;
  for (std::size_t k = 0; k < z.size(); ++k) a += detail::cross(z[k], z[(k + 1) % z.size()]);
  return a;
}

/// Trigonometric interpolant through z_j at t_j = 2 pi j / n.
inline CurveParam fourier_curve(const std::vector<cplx>& z) {
  const int n = static_cast<int>(z.size());
  const int kmax = n / 2;
  std::vector<int> ks;
  std::vector<cplx> cs;
  for (int k = -kmax; k <= kmax; ++k) {
    if (n % 2 == 0 && std::abs(k) == kmax && k < 0) continue;
    cplx c{};
    for (int j = 0; j < n; ++j) c += z[j] * std::exp(-kI * (kTwoPi * k * j / n));
    c /= static_cast<double>(n);
    if (n % 2 == 0 && k == kmax) {
      // Split the Nyquist mode evenly between +k and -k so the interpolant is real-symmetric.
      ks.push_back(-k);
      cs.push_back(0.5 * c);
      c *= 0.5;
    }
    ks.push_back(k);
    cs.push_back(c);
  }
  auto eval = [ks, cs](double t, int order) {
    cplx s{};
    for (std::size_t m = 0; m < ks.size(); ++m) s += cs[m] * std::pow(kI * static_cast<double>(ks[m]), order) * std::exp(kI * (ks[m] * t));
    return s;
  };
  return {[eval](double t) { return eval(t, 0); }, [eval](double t) { return eval(t, 1); },
          [eval](double t) { return eval(t, 2); }};
}

/// Natural cubic spline through z_j at equally spaced parameters centred on 0,
/// continued by its end tangent lines (C2 at the joints).
struct SplineCurve {
  std::vector<cplx> z, m;
  double h = 1.0;
  double t0 = 0.0;

  explicit SplineCurve(std::vector<cplx> pts) : z(std::move(pts)) {
    const std::size_t n = z.size();
    double len = 0.0;
    for (std::size_t j = 1; j < n; ++j) len += std::abs(z[j] - z[j - 1]);
    h = len / static_cast<double>(n - 1);
    t0 = -0.5 * h * static_cast<double>(n - 1);
    m.assign(n, cplx{});
    // Thomas algorithm for m_{j-1} + 4 m_j + m_{j+1} = 6 (z_{j+1} - 2 z_j + z_{j-1}) / h^2, m_0 = m_{n-1} = 0.
    std::vector<double> c(n, 0.0);
    std::vector<cplx> d(n, cplx{});
    for (std::size_t j = 1; j + 1 < n; ++j) {
      const cplx rhs = 6.0 * (z[j + 1] - 2.0 * z[j] + z[j - 1]) / (h * h);
      const double denom = 4.0 - (j > 1 ? c[j - 1] : 0.0);
      c[j] = 1.0 / denom;
      d[j] = (rhs - (j > 1 ? d[j - 1] : cplx{})) / denom;
    }
    for (std::size_t j = n - 2; j >= 1; --j) {
      m[j] = d[j] - c[j] * m[j + 1];
      if (j == 1) break;
    }
  }

  double t_first() const { return t0; }
  double t_last() const { return t0 + h * static_cast<double>(z.size() - 1); }

  cplx eval(double t, int order) const {
    if (t < t_first() || t > t_last()) {
      const bool left = t < t_first();
      const double te = left ? t_first() : t_last();
      const cplx ze = left ? z.front() : z.back();
      const cplx de = inside(te, 1);
      if (order == 0) return ze + (t - te) * de;
      return order == 1 ? de : cplx{};
    }
    return inside(t, order);
  }

  cplx inside(double t, int order) const {
    const std::size_t n = z.size();
    std::size_t j = static_cast<std::size_t>(std::floor((t - t0) / h));
    if (j >= n - 1) j = n - 2;
    const double tj = t0 + h * static_cast<double>(j);
    const double b = (t - tj) / h, a = 1.0 - b;
    if (order == 0) return a * z[j] + b * z[j + 1] + ((a * a * a - a) * m[j] + (b * b * b - b) * m[j + 1]) * (h * h / 6.0);
    if (order == 1) return (z[j + 1] - z[j]) / h - (3 * a * a - 1) / 6.0 * h * m[j] + (3 * b * b - 1) / 6.0 * h * m[j + 1];
    return a * m[j] + b * m[j + 1];
  }
};

inline CurveComponent component(const json& j, std::size_t index) {
  const std::string where = "/components/" + std::to_string(index);
  if (!j.is_object()) schema_error(where, "expected an object");
  auto field = [&](const char* key) -> const json* {
    const auto it = j.find(key);
    return it == j.end() ? nullptr : &*it;
  };
  auto str = [&](const char* key, const char* fallback) -> std::string {
    const json* v = field(key);
    if (!v) {
      if (!fallback) schema_error(where, std::string("missing '") + key + "'");
      return fallback;
    }
    if (!v->is_string()) schema_error(where + "/" + key, "expected a string");
    return v->get<std::string>();
  };
  const std::string kind = str("kind", nullptr);
  const std::string type = str("type", nullptr);
  if (kind != "closed" && kind != "unbounded") schema_error(where + "/kind", "expected \"closed\" or \"unbounded\"");
  const bool closed = kind == "closed";
  const std::string orientation = str("orientation", closed ? "cw" : "ccw");
  if (orientation != "cw" && orientation != "ccw") schema_error(where + "/orientation", "expected \"ccw\" or \"cw\"");
  const json empty = json::object();
  const json* pp = field("params");
  const json& params = pp ? *pp : empty;
  if (!params.is_object()) schema_error(where + "/params", "expected an object");
  auto param = [&](const char* key) -> const json& {
    const auto it = params.find(key);
    if (it == params.end()) schema_error(where + "/params", std::string("missing '") + key + "'");
    return *it;
  };
  const std::string label = str("label", (type + "-" + std::to_string(index)).c_str());
  const json* tm = field("t_max");
  if (closed && tm) schema_error(where + "/t_max", "only unbounded components take t_max");

  if (closed) {
    if (type == "circle") {
      const cplx c = params.contains("center") ? point(params["center"], where + "/params/center") : cplx{};
      const double r = number(param("radius"), where + "/params/radius");
      if (!(r > 0.0)) schema_error(where + "/params/radius", "radius must be positive");
      if (orientation == "ccw")
        throw DomainError("component '" + label + "' is counterclockwise: the domain would be bounded");
      return CurveComponent::closed(label, {[c, r](double t) { return c + r * std::exp(-kI * t); },
                                            [r](double t) { return -kI * r * std::exp(-kI * t); },
                                            [r](double t) { return -r * std::exp(-kI * t); }});
    }
    if (type == "samples") {
      auto z = points(param("points"), where + "/params/points", 8);
      const bool given_ccw = signed_area2(z) > 0.0;
      if (given_ccw != (orientation == "ccw"))
        schema_error(where + "/orientation", "does not match the order of the sample points");
      if (given_ccw) throw DomainError("component '" + label + "' is counterclockwise: the domain would be bounded");
      return CurveComponent::closed(label, fourier_curve(z));
    }
    schema_error(where + "/type", "closed components must be \"circle\" or \"samples\"");
  }

  double t_max = type == "graph" ? 30.0 : 1e6;
  if (tm) t_max = number(*tm, where + "/t_max");
  if (!(t_max > 0.0)) schema_error(where + "/t_max", "must be positive");
  CurveParam p;
  std::optional<cplx> c_minus, c_plus;
  if (type == "line") {
    const cplx a = point(param("point"), where + "/params/point");
    cplx dir = point(param("direction"), where + "/params/direction");
    if (std::abs(dir) == 0.0) schema_error(where + "/params/direction", "must be nonzero");
    dir /= std::abs(dir);
    p = {[a, dir](double t) { return a + t * dir; }, [dir](double) { return dir; }, [](double) { return cplx{}; }};
    c_minus = c_plus = std::conj(dir);
  } else if (type == "graph") {
    const json& y = param("y");
    if (!y.is_string()) schema_error(where + "/params/y", "expected an expression in x");
    const Expression f(y.get<std::string>());
    p = {[f](double t) { return cplx{t, f(t).v}; }, [f](double t) { return cplx{1.0, f(t).d}; },
         [f](double t) { return cplx{0.0, f(t).dd}; }};
  } else if (type == "samples") {
    const SplineCurve s(points(param("points"), where + "/params/points", 4));
    p = {[s](double t) { return s.eval(t, 0); }, [s](double t) { return s.eval(t, 1); },
         [s](double t) { return s.eval(t, 2); }};
    c_minus = std::conj(s.inside(s.t_first(), 1));
    c_plus = std::conj(s.inside(s.t_last(), 1));
  } else {
    schema_error(where + "/type", "unbounded components must be \"line\", \"graph\" or \"samples\"");
  }
  auto c = CurveComponent::unbounded(label, std::move(p), t_max, c_minus, c_plus);
  return orientation == "cw" ? c.reversed() : c;
}

inline std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t k = 0; k + 1 < byte && k < text.size(); ++k) {
    if (text[k] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

}  // namespace json_detail

/// Domain from a parsed JSON document.
inline Domain domain_from_json(const nlohmann::json& j, DomainOptions options = {}) {
  using namespace json_detail;
  if (!j.is_object()) schema_error("", "expected an object");
  if (!j.contains("components")) schema_error("", "missing 'components'");
  if (!j.contains("basepoint")) schema_error("", "missing 'basepoint'");
  const auto& comps = j["components"];
  if (!comps.is_array() || comps.empty()) schema_error("/components", "expected a non-empty array");
  std::vector<CurveComponent> out;
  for (std::size_t k = 0; k < comps.size(); ++k) out.push_back(component(comps[k], k));
  std::string name = "json-domain";
  if (j.contains("name")) {
    if (!j["name"].is_string()) schema_error("/name", "expected a string");
    name = j["name"].get<std::string>();
  }
  return Domain(std::move(out), point(j["basepoint"], "/basepoint"), name, options);
}

/// Domain from JSON text; syntax errors carry line and column.
inline Domain parse_domain_json(const std::string& text, DomainOptions options = {}) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const auto [line, col] = json_detail::line_column(text, e.byte);
    std::ostringstream os;
    os << "line " << line << ", column " << col << ": " << e.what();
    throw ParseError(os.str(), line, col);
  }
  return domain_from_json(j, options);
}

/// Catalog name ("name" or "name:p1,p2") or path to a domain JSON file.
inline Domain load_domain(const std::string& source, DomainOptions options = {}) {
  const std::string name = source.substr(0, source.find(':'));
  if (is_catalog_name(name)) return catalog_from_name(source, options);
  std::ifstream in(source);
  if (!in) throw ParseError("'" + source + "' is neither a catalog name nor a readable file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_domain_json(ss.str(), options);
}

}  // namespace nqd
