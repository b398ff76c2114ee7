#include <cmath>

#include <gtest/gtest.h>

#include "nqd/catalog.hpp"
#include "nqd/domain_json.hpp"
#include "nqd/nqd_verify.hpp"

using namespace nqd;

TEST(Expression, JetDerivatives) {
  const Expression f("pi/2 + cosh(x) - 3*x^2 + sin(x)/exp(x)");
  for (double x : {-1.3, 0.0, 0.7, 2.5}) {
    const Jet j = f(x);
    EXPECT_NEAR(j.v, kPi / 2 + std::cosh(x) - 3 * x * x + std::sin(x) * std::exp(-x), 1e-13);
    EXPECT_NEAR(j.d, std::sinh(x) - 6 * x + (std::cos(x) - std::sin(x)) * std::exp(-x), 1e-13);
    EXPECT_NEAR(j.dd, std::cosh(x) - 6 - 2 * std::cos(x) * std::exp(-x), 1e-13);
  }
  const Expression g("sqrt(1 + x^2) * log(2 + tanh(x))");
  const double x = 0.4, s = std::sqrt(1 + x * x), l = std::log(2 + std::tanh(x));
  const double sech2 = 1 - std::tanh(x) * std::tanh(x);
  EXPECT_NEAR(g(x).d, x / s * l + s * sech2 / (2 + std::tanh(x)), 1e-13);
  EXPECT_EQ(Expression("-x^2")(3.0).v, -9.0);
  EXPECT_THROW(Expression("cosh(x"), ParseError);
  EXPECT_THROW(Expression("foo(x)"), ParseError);
  EXPECT_THROW(Expression("x +"), ParseError);
}

TEST(DomainJson, CircleMatchesCatalogDisk) {
  const auto d = parse_domain_json(R"({
    "components": [{"kind": "closed", "type": "circle", "params": {"center": [0, 0], "radius": 1}}],
    "basepoint": [3, 0]})");
  const auto ref = disk_exterior(1.0);
  for (double t : {0.0, 1.0, 4.0}) {
    EXPECT_LT(std::abs(d.component(0).point(t) - ref.component(0).point(t)), 1e-15);
    EXPECT_LT(std::abs(d.component(0).deriv2(t) - ref.component(0).deriv2(t)), 1e-15);
  }
  EXPECT_EQ(verify_nqd(d, 1e-10).verdict, Verdict::Pass);
}

TEST(DomainJson, GraphsReproduceHhp) {
  const auto d = parse_domain_json(R"J({
    "name": "hhp-json",
    "components": [
      {"kind": "unbounded", "type": "graph", "params": {"y": "-(pi/2 + cosh(x))"}, "t_max": 30},
      {"kind": "unbounded", "type": "graph", "params": {"y": "pi/2 + cosh(x)"}, "orientation": "cw", "t_max": 30}],
    "basepoint": [0, 0]})J");
  const auto ref = hhp();
  EXPECT_EQ(d.name(), "hhp-json");
  for (std::size_t i = 0; i < 2; ++i) {
    for (double t : {-2.0, 0.3, 5.0}) {
      EXPECT_LT(std::abs(d.component(i).point(t) - ref.component(i).point(t)), 1e-13);
      EXPECT_LT(std::abs(d.component(i).deriv(t) - ref.component(i).deriv(t)), 1e-12);
      EXPECT_LT(std::abs(d.component(i).deriv2(t) - ref.component(i).deriv2(t)), 1e-12);
    }
    EXPECT_LT(std::abs(d.component(i).c_minus() - ref.component(i).c_minus()), 1e-6);
    EXPECT_LT(std::abs(d.component(i).c_plus() - ref.component(i).c_plus()), 1e-6);
  }
}

TEST(DomainJson, ClosedSamplesInterpolateSpectrally) {
  nlohmann::json pts = nlohmann::json::array();
  const int n = 64;
  for (int j = 0; j < n; ++j) {
    const double t = kTwoPi * j / n;
    pts.push_back({2 * std::cos(t), -std::sin(t)});
  }
  nlohmann::json doc = {{"components", {{{"kind", "closed"}, {"type", "samples"}, {"params", {{"points", pts}}}}}},
                        {"basepoint", {6, 0}}};
  const auto d = domain_from_json(doc);
  const auto ref = ellipse_exterior(2.0, 1.0);
  for (double t : {0.05, 1.234, 5.5}) {
    EXPECT_LT(std::abs(d.component(0).point(t) - ref.component(0).point(t)), 1e-12);
    EXPECT_LT(std::abs(d.component(0).deriv(t) - ref.component(0).deriv(t)), 1e-11);
    EXPECT_LT(std::abs(d.component(0).deriv2(t) - ref.component(0).deriv2(t)), 1e-9);
  }
  doc["components"][0]["orientation"] = "ccw";
  EXPECT_THROW(domain_from_json(doc), ParseError);
}

TEST(DomainJson, UnboundedSamplesExtendLinearly) {
  // Samples of y = x^2 / 4 on [-2, 2]: spline through them, straight beyond.
  nlohmann::json pts = nlohmann::json::array();
  for (int j = 0; j <= 40; ++j) {
    const double x = -2.0 + 0.1 * j;
    pts.push_back({x, 0.25 * x * x});
  }
  nlohmann::json doc = {
      {"components", {{{"kind", "unbounded"}, {"type", "samples"}, {"params", {{"points", pts}}}, {"t_max", 200}}}},
      {"basepoint", {0, 3}}};
  const auto d = domain_from_json(doc);
  const auto& c = d.component(0);
  const cplx a = c.point(-50.0), b = c.point(-100.0), e = c.point(c.t_lo());
  EXPECT_LT(std::abs(detail::cross(b - a, e - a)) / (std::abs(b - a) * std::abs(e - a)), 1e-14);
  // The left end slope of x^2 / 4 at x = -2 is -1.
  const cplx dir = c.deriv(-100.0) / std::abs(c.deriv(-100.0));
  EXPECT_LT(std::abs(dir - cplx{1.0, -1.0} / std::sqrt(2.0)), 2e-2);
  // C2 joint: second derivative vanishes at both ends of the samples and beyond.
  EXPECT_LT(std::abs(c.deriv2(c.t_hi())), 1e-15);
  const double far = 100.0;
  EXPECT_LT(std::abs(c.deriv(far) - c.deriv(far + 10.0)), 1e-15);
  EXPECT_LT(std::abs(c.c_plus() - std::conj(c.deriv(far) / std::abs(c.deriv(far)))), 1e-12);
  EXPECT_TRUE(d.contains({0.0, 3.0}));
  EXPECT_FALSE(d.contains({0.0, -1.0}));
}

TEST(DomainJson, LineIsHalfplane) {
  const auto d = parse_domain_json(R"({"components": [{"kind": "unbounded", "type": "line",
    "params": {"point": [0, 0], "direction": [1, 0]}}], "basepoint": [0, 1]})");
  EXPECT_EQ(verify_nqd(d, 1e-6).verdict, Verdict::Pass);
  const auto flipped = parse_domain_json(R"({"components": [{"kind": "unbounded", "type": "line",
    "params": {"point": [0, 0], "direction": [1, 0]}, "orientation": "cw"}], "basepoint": [0, -1]})");
  EXPECT_TRUE(flipped.contains({0.0, -1.0}));
}

TEST(DomainJson, SyntaxErrorsCarryLineAndColumn) {
  try {
    parse_domain_json("{\n  \"components\": [\n    ,\n  ]\n}");
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
    EXPECT_EQ(e.column(), 5);
  }
}

TEST(DomainJson, SchemaErrors) {
  EXPECT_THROW(parse_domain_json(R"({"components": []})"), ParseError);
  EXPECT_THROW(parse_domain_json(R"({"components": [{"kind": "closed", "type": "circle", "params": {"radius": 1}}]})"),
               ParseError);
  EXPECT_THROW(parse_domain_json(R"({"components": [{"kind": "closed", "type": "line"}], "basepoint": [3, 0]})"),
               ParseError);
  EXPECT_THROW(parse_domain_json(R"({"components": [{"kind": "closed", "type": "circle",
    "params": {"radius": "one"}}], "basepoint": [3, 0]})"), ParseError);
  EXPECT_THROW(parse_domain_json(R"({"components": [{"kind": "closed", "type": "circle",
    "params": {"radius": 1}, "orientation": "ccw"}], "basepoint": [0.5, 0]})"), DomainError);
  EXPECT_THROW(parse_domain_json(R"({"components": [{"kind": "closed", "type": "circle",
    "params": {"radius": 1}}], "basepoint": [0.5, 0]})"), DomainError);
}

TEST(DomainJson, LoadDomainAcceptsCatalogNames) {
  EXPECT_EQ(load_domain("ellipse-exterior:3,1").name(), "ellipse-exterior");
  EXPECT_EQ(load_domain("hhp").size(), 2u);
  EXPECT_THROW(load_domain("/nonexistent/domain.json"), ParseError);
}

TEST(DomainJson, StraightExtensionsAreNotSelfIntersections) {
  // Both ends continue along lines; far-apart collinear polyline pieces must not count as crossings.
  EXPECT_NO_THROW(load_domain(NQD_DATA_DIR "/parabola_samples.json"));
}
