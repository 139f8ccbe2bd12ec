#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "minfit/poly.hpp"

using namespace minfit;

namespace {

bool projectively_close(double l1, double m1, double l2, double m2, double tol = 1e-12) {
  return std::min(std::hypot(l1 - l2, m1 - m2), std::hypot(l1 + l2, m1 + m2)) <= tol;
}

BiPoly random_bipoly(std::mt19937_64& rng, int du, int dv) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  BiPoly f;
  for (int i = 0; i <= du; ++i)
    for (int j = 0; j <= dv; ++j) f.add_term(i, j, u(rng));
  return f;
}

// Numeric Sylvester matrix of two univariate polynomials, built directly from
// their coefficient lists as an independent cross-check of the MatPoly route.
Eigen::MatrixXd numeric_sylvester(const std::vector<double>& a, const std::vector<double>& b) {
  const int da = (int)a.size() - 1, db = (int)b.size() - 1;
  Eigen::MatrixXd S = Eigen::MatrixXd::Zero(da + db, da + db);
  for (int r = 0; r < db; ++r)
    for (int k = 0; k <= da; ++k) S(r, r + k) = a[da - k];
  for (int r = 0; r < da; ++r)
    for (int k = 0; k <= db; ++k) S(db + r, r + k) = b[db - k];
  return S;
}

}  // namespace

TEST_CASE("homogeneous quadratic roots follow the discriminant classification") {
  SUBCASE("l^2 - m^2 has the two diagonal directions") {
    const auto roots = quad_homogeneous_roots(1, 0, -1);
    REQUIRE(roots.size() == 2);
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(projectively_close(roots[0].l, roots[0].m, s, s));
    CHECK(projectively_close(roots[1].l, roots[1].m, -s, s));
  }
  SUBCASE("l^2 + m^2 has no real roots") {
    CHECK(quad_homogeneous_roots(1, 0, 1).empty());
  }
  SUBCASE("a = 0 branch yields (1,0) and (-c,b) normalized") {
    const auto roots = quad_homogeneous_roots(0, 1, 1);
    REQUIRE(roots.size() == 2);
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(projectively_close(roots[0].l, roots[0].m, 1, 0));
    CHECK(projectively_close(roots[1].l, roots[1].m, -s, s));
  }
  SUBCASE("zero discriminant gives one double root") {
    const auto roots = quad_homogeneous_roots(1, -2, 1);
    REQUIRE(roots.size() == 1);
    CHECK(roots[0].multiplicity == 2);
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(projectively_close(roots[0].l, roots[0].m, s, s));
  }
  SUBCASE("all-zero coefficients are rejected") {
    CHECK_THROWS_AS(quad_homogeneous_roots(0, 0, 0), MinfitError);
  }
}

TEST_CASE("univariate real roots") {
  SUBCASE("x^2 - 4") {
    auto r = real_roots(UniPoly({-4, 0, 1}));
    std::sort(r.begin(), r.end());
    REQUIRE(r.size() == 2);
    CHECK(r[0] == doctest::Approx(-2.0).epsilon(1e-12));
    CHECK(r[1] == doctest::Approx(2.0).epsilon(1e-12));
  }
  SUBCASE("x^2 + 1 has none") { CHECK(real_roots(UniPoly({1, 0, 1})).empty()); }
  SUBCASE("planted quartic roots recovered within 1e-10") {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    for (int t = 0; t < 25; ++t) {
      double planted[4];
      for (auto& x : planted) x = u(rng);
      UniPoly p = UniPoly::constant(1.0);
      for (double x : planted) p = p * UniPoly({-x, 1});
      auto found = real_roots(p);
      for (double x : planted) {
        double best = 1e9;
        for (double f : found) best = std::min(best, std::abs(f - x));
        CHECK(best < 1e-10);
      }
    }
  }
  SUBCASE("zero polynomial is rejected") {
    CHECK_THROWS_AS(real_roots(UniPoly()), MinfitError);
  }
}

TEST_CASE("Sylvester matrix determinant equals the resultant") {
  SUBCASE("u - v and u + v eliminating v: 2x2 with determinant proportional to u") {
    BiPoly f = BiPoly::monomial(1, 0, 1) + BiPoly::monomial(0, 1, -1);
    BiPoly g = BiPoly::monomial(1, 0, 1) + BiPoly::monomial(0, 1, 1);
    const MatPoly S = sylvester(f, g, Var::V);
    CHECK(S.size() == 2);
    CHECK(S.degree() == 1);
    // The determinant is +-2u; the ratio to u must be a constant +-2.
    const double r1 = S.eval(3.0).determinant() / 3.0;
    const double r2 = S.eval(-1.7).determinant() / -1.7;
    CHECK(std::abs(std::abs(r1) - 2.0) < 1e-12);
    CHECK(std::abs(r1 - r2) < 1e-12);
  }
  SUBCASE("instantiated matrix matches a directly built numeric Sylvester matrix") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 20; ++t) {
      const BiPoly f = random_bipoly(rng, 2, 2), g = random_bipoly(rng, 2, 2);
      const MatPoly S = sylvester(f, g, Var::V);
      const double x0 = u(rng);
      auto instantiate = [&](const BiPoly& p) {
        std::vector<double> c;
        for (const auto& cp : p.coeffs_in_v()) c.push_back(cp.eval(x0));
        return c;
      };
      const Eigen::MatrixXd direct = numeric_sylvester(instantiate(f), instantiate(g));
      CHECK(std::abs(std::abs(S.eval(x0).determinant()) - std::abs(direct.determinant())) <
            1e-10);
    }
  }
  SUBCASE("zero polynomial input is rejected") {
    CHECK_THROWS_AS(sylvester(BiPoly(), BiPoly::monomial(0, 1, 1), Var::V), MinfitError);
  }
}

TEST_CASE("companion linearization") {
  SUBCASE("scalar quadratic: pencil eigenvalues are the quadratic roots") {
    // 2x^2 - 3x + 1 = 0 has roots 1 and 1/2.
    MatPoly mp;
    mp.M = {Eigen::MatrixXd::Constant(1, 1, 1.0), Eigen::MatrixXd::Constant(1, 1, -3.0),
            Eigen::MatrixXd::Constant(1, 1, 2.0)};
    const auto eig = pencil_eigen(linearize(mp));
    std::vector<double> vals;
    for (const auto& e : eig)
      if (e.finite && std::abs(e.eigenvalue.imag()) < 1e-10) vals.push_back(e.eigenvalue.real());
    std::sort(vals.begin(), vals.end());
    REQUIRE(vals.size() == 2);
    CHECK(vals[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(vals[1] == doctest::Approx(1.0).epsilon(1e-12));
  }
  SUBCASE("degree-2 size-5 input linearizes to a 10x10 pencil") {
    std::mt19937_64 rng(43);
    MatPoly mp;
    for (int d = 0; d < 3; ++d) {
      Eigen::MatrixXd M(5, 5);
      std::uniform_real_distribution<double> u(-1.0, 1.0);
      for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) M(i, j) = u(rng);
      mp.M.push_back(M);
    }
    const Pencil p = linearize(mp);
    CHECK(p.A.rows() == 10);
    CHECK(p.B.rows() == 10);
    // det(A - x B) is proportional to det(mp(x)) with a constant factor.
    const double x1 = 0.37, x2 = -1.21;
    const double r1 = (p.A - x1 * p.B).determinant() / mp.eval(x1).determinant();
    const double r2 = (p.A - x2 * p.B).determinant() / mp.eval(x2).determinant();
    CHECK(r1 == doctest::Approx(r2).epsilon(1e-8));
  }
  SUBCASE("degree-0 input is rejected") {
    MatPoly mp;
    mp.M = {Eigen::MatrixXd::Identity(2, 2)};
    CHECK_THROWS_AS(linearize(mp), MinfitError);
  }
}

TEST_CASE("generalized eigen solving on pencils") {
  SUBCASE("diagonal pencil") {
    Pencil p;
    p.A = Eigen::Vector2d(1, 2).asDiagonal();
    p.B = Eigen::MatrixXd::Identity(2, 2);
    auto eig = pencil_eigen(p);
    std::vector<double> vals;
    for (const auto& e : eig)
      if (e.finite) vals.push_back(e.eigenvalue.real());
    std::sort(vals.begin(), vals.end());
    REQUIRE(vals.size() == 2);
    CHECK(vals[0] == doctest::Approx(1.0));
    CHECK(vals[1] == doctest::Approx(2.0));
  }
  SUBCASE("singular B produces an infinite eigenvalue flag") {
    Pencil p;
    p.A = Eigen::MatrixXd::Identity(2, 2);
    p.B = Eigen::Vector2d(1, 0).asDiagonal();
    const auto eig = pencil_eigen(p);
    int finite = 0, infinite = 0;
    for (const auto& e : eig) (e.finite ? finite : infinite)++;
    CHECK(finite == 1);
    CHECK(infinite == 1);
  }
  SUBCASE("eigenpair residuals are backward small") {
    std::mt19937_64 rng(47);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int t = 0; t < 10; ++t) {
      Pencil p;
      p.A.resize(6, 6);
      p.B.resize(6, 6);
      for (int i = 0; i < 6; ++i)
        for (int j = 0; j < 6; ++j) {
          p.A(i, j) = u(rng);
          p.B(i, j) = u(rng) + (i == j ? 2.0 : 0.0);
        }
      for (const auto& e : pencil_eigen(p)) {
        if (!e.finite) continue;
        const double res = ((p.A.cast<std::complex<double>>() -
                             e.eigenvalue * p.B.cast<std::complex<double>>()) *
                            e.eigenvector)
                               .norm();
        CHECK(res <= 1e-9 * (p.A.norm() + std::abs(e.eigenvalue) * p.B.norm()));
      }
    }
  }
}

TEST_CASE("bivariate solving by the hidden-variable method") {
  SUBCASE("circle and diagonal line") {
    BiPoly f = BiPoly::monomial(2, 0, 1) + BiPoly::monomial(0, 2, 1) + BiPoly::constant(-1);
    BiPoly g = BiPoly::monomial(1, 0, 1) + BiPoly::monomial(0, 1, -1);
    auto roots = bivariate_solve(f, g);
    REQUIRE(roots.size() == 2);
    const double s = 1.0 / std::sqrt(2.0);
    std::sort(roots.begin(), roots.end());
    CHECK(roots[0].first == doctest::Approx(-s).epsilon(1e-10));
    CHECK(roots[0].second == doctest::Approx(-s).epsilon(1e-10));
    CHECK(roots[1].first == doctest::Approx(s).epsilon(1e-10));
    CHECK(roots[1].second == doctest::Approx(s).epsilon(1e-10));
  }
  SUBCASE("two independent quadratics give the four corners") {
    BiPoly f = BiPoly::monomial(2, 0, 1) + BiPoly::constant(-1);
    BiPoly g = BiPoly::monomial(0, 2, 1) + BiPoly::constant(-1);
    auto roots = bivariate_solve(f, g);
    CHECK(roots.size() == 4);
    for (auto [u, v] : roots) {
      CHECK(std::abs(std::abs(u) - 1.0) < 1e-10);
      CHECK(std::abs(std::abs(v) - 1.0) < 1e-10);
    }
  }
  SUBCASE("planted roots of random systems are recovered and verified") {
    std::mt19937_64 rng(53);
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    for (int t = 0; t < 25; ++t) {
      // f and g are products of lines through two planted points, plus a
      // quadratic with no more common roots in general position.
      const double u1 = u(rng), v1 = u(rng), u2 = u(rng), v2 = u(rng);
      auto lines = [&](double au, double av) {
        BiPoly l1 = BiPoly::monomial(1, 0, au) + BiPoly::monomial(0, 1, av) +
                    BiPoly::constant(-(au * u1 + av * v1));
        BiPoly l2 = BiPoly::monomial(1, 0, av) + BiPoly::monomial(0, 1, -au) +
                    BiPoly::constant(-(av * u2 - au * v2));
        return l1 * l2;
      };
      const BiPoly f = lines(u(rng) + 2.0, u(rng));
      const BiPoly g = lines(u(rng), u(rng) + 2.0);
      const auto roots = bivariate_solve(f, g);
      for (auto [planted_u, planted_v] : {std::pair{u1, v1}, std::pair{u2, v2}}) {
        double best = 1e9;
        for (auto [ru, rv] : roots) best = std::min(best, std::hypot(ru - planted_u, rv - planted_v));
        CHECK(best < 1e-7);
      }
      for (auto [ru, rv] : roots) {
        CHECK(std::abs(f.eval(ru, rv)) <= residual_tolerance(f, ru, rv));
        CHECK(std::abs(g.eval(ru, rv)) <= residual_tolerance(g, ru, rv));
      }
    }
  }
  SUBCASE("root lists are deterministic and sorted") {
    BiPoly f = BiPoly::monomial(2, 0, 1) + BiPoly::constant(-1);
    BiPoly g = BiPoly::monomial(0, 2, 1) + BiPoly::constant(-1);
    const auto a = bivariate_solve(f, g), b = bivariate_solve(f, g);
    REQUIRE(a.size() == b.size());
    CHECK(std::is_sorted(a.begin(), a.end()));
    for (size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].first == b[i].first);
      CHECK(a[i].second == b[i].second);
    }
  }
}

TEST_CASE("polynomial container basics") {
  SUBCASE("TriPoly dehomogenization and evenness") {
    TriPoly h = TriPoly::monomial(2, 0, 0, 1.0) + TriPoly::monomial(0, 1, 1, -2.0);
    CHECK(h.is_even());
    const BiPoly d = h.at_n1();
    CHECK(d.eval(0.5, 0.25) == doctest::Approx(0.25 - 0.5));
    h.add_term(1, 0, 0, 3.0);
    CHECK(!h.is_even());
  }
  SUBCASE("BiPoly arithmetic and norms") {
    const BiPoly f = BiPoly::monomial(1, 1, 2.0) + BiPoly::constant(-3.0);
    CHECK(f.eval(2.0, 0.5) == doctest::Approx(-1.0));
    CHECK(f.one_norm() == doctest::Approx(5.0));
    CHECK((f * f).degree() == 4);
    CHECK(f.du().eval(7.0, 0.5) == doctest::Approx(1.0));
  }
}
