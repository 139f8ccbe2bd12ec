#include <doctest.h>

#include <cmath>
#include <random>

#include "minfit/conic.hpp"

using namespace minfit;

namespace {

// Samples a conic given in implicit form by pushing plane points through a
// parametrization, used to build fit_conic inputs with known ground truth.
std::vector<Vec2> ellipse_points(double a, double b, std::initializer_list<double> ts) {
  std::vector<Vec2> v;
  for (double t : ts) v.emplace_back(a * std::cos(t), b * std::sin(t));
  return v;
}

}  // namespace

TEST_CASE("plane fitting and the plane frame") {
  std::mt19937_64 rng(61);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  const Vec3 n = Vec3(1, 2, -1).normalized();
  const Vec3 c(0.3, -0.5, 0.9);
  std::vector<Vec3> pts;
  const Vec3 e1 = n.cross(Vec3(0, 0, 1)).normalized(), e2 = n.cross(e1);
  for (int i = 0; i < 7; ++i) pts.push_back(c + u(rng) * e1 + u(rng) * e2);
  const PlaneFit f = fit_plane(pts);
  CHECK(f.max_residual < 1e-12);
  CHECK(std::abs(std::abs(f.normal.dot(n)) - 1.0) < 1e-12);
  const RigidMotion m = plane_frame(f);
  for (const auto& p : pts) CHECK(std::abs(m.apply(p).z()) < 1e-12);
}

TEST_CASE("conic least-squares interpolation through five points") {
  SUBCASE("five ellipse points reproduce the ellipse") {
    const auto pts = ellipse_points(2.0, 1.0, {0.1, 1.0, 2.2, 3.5, 5.0});
    const auto c = fit_conic(pts);
    REQUIRE(c.has_value());
    // A sixth point of the same ellipse satisfies the fitted equation.
    const Vec2 extra(2.0 * std::cos(4.2), std::sin(4.2));
    CHECK(std::abs(c->eval(extra)) < 1e-10);
  }
  SUBCASE("fewer than five distinct points do not determine a conic") {
    std::vector<Vec2> pts = {Vec2(0, 0), Vec2(1, 0), Vec2(0, 1), Vec2(1, 0), Vec2(0, 0)};
    CHECK(!fit_conic(pts).has_value());
  }
  SUBCASE("interpolation gap separates cocircular from generic sextuples") {
    auto on = ellipse_points(1.0, 1.0, {0.0, 1.0, 2.0, 3.0, 4.0, 5.0});
    CHECK(conic_interpolation_gap(on) < 1e-12);
    std::mt19937_64 rng(67);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::vector<Vec2> off(6);
    for (auto& p : off) p = Vec2(u(rng), u(rng));
    CHECK(conic_interpolation_gap(off) > 1e-6);
  }
}

TEST_CASE("conic classification and canonicalization") {
  auto fit_and_canonicalize = [](const std::vector<Vec2>& pts) {
    const auto c = fit_conic(pts);
    REQUIRE(c.has_value());
    return canonicalize_conic(*c);
  };
  SUBCASE("circle") {
    const auto cc = fit_and_canonicalize(ellipse_points(1.5, 1.5, {0.0, 1.1, 2.3, 3.6, 4.9}));
    CHECK(cc.type == ConicType::Circle);
    CHECK(cc.alpha == doctest::Approx(1.0 / 2.25).epsilon(1e-9));
    CHECK(cc.beta == doctest::Approx(1.0 / 2.25).epsilon(1e-9));
  }
  SUBCASE("ellipse, semi-axes recovered with alpha >= beta") {
    const auto cc = fit_and_canonicalize(ellipse_points(2.0, 1.0, {0.1, 1.0, 2.2, 3.5, 5.0}));
    CHECK(cc.type == ConicType::Ellipse);
    CHECK(cc.alpha >= cc.beta);
    CHECK(cc.alpha == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(cc.beta == doctest::Approx(0.25).epsilon(1e-9));
    // Canonical samples transported by to_data land on the original ellipse.
    for (double t : {0.3, 2.0, 4.4}) {
      const Vec3 q = cc.to_data.apply(
          Vec3(std::cos(t) / std::sqrt(cc.alpha), std::sin(t) / std::sqrt(cc.beta), 0.0));
      CHECK(std::abs(q.x() * q.x() / 4.0 + q.y() * q.y() - 1.0) < 1e-9);
    }
  }
  SUBCASE("hyperbola") {
    std::vector<Vec2> pts;
    for (double t : {-1.0, -0.4, 0.0, 0.6, 1.2}) pts.emplace_back(std::cosh(t), std::sinh(t));
    const auto cc = fit_and_canonicalize(pts);
    CHECK(cc.type == ConicType::Hyperbola);
    CHECK(cc.alpha == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(cc.beta == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("parabola") {
    std::vector<Vec2> pts;
    for (double t : {-1.0, -0.5, 0.0, 0.7, 1.3}) pts.emplace_back(t, 0.5 * t * t);
    const auto cc = fit_and_canonicalize(pts);
    CHECK(cc.type == ConicType::Parabola);
    CHECK(cc.alpha == doctest::Approx(2.0).epsilon(1e-9));  // x^2 = 2 y
  }
  SUBCASE("degenerate conic (two lines) is flagged") {
    // Points on the pair of lines x*y = 0.
    std::vector<Vec2> pts = {Vec2(0, 1), Vec2(0, -1), Vec2(1, 0), Vec2(-1, 0), Vec2(2, 0)};
    const auto cc = fit_and_canonicalize(pts);
    CHECK(cc.type == ConicType::Degenerate);
  }
}
