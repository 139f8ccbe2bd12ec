/**
 * @file poly.hpp
 * @brief Small dense polynomial-system engine: homogeneous quadratic roots,
 *        Sylvester matrices, matrix-polynomial linearization to generalized
 *        eigenvalue pencils, and real-root filtering.
 */
#ifndef MINFIT_POLY_HPP
#define MINFIT_POLY_HPP

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <map>
#include <vector>

#include "minfit/geom.hpp"

namespace minfit {

/// Dense univariate polynomial, coefficients in ascending degree.
class UniPoly {
 public:
  UniPoly() = default;
  explicit UniPoly(std::vector<double> coeffs) : c_(std::move(coeffs)) { trim(); }
  static UniPoly constant(double v) { return UniPoly({v}); }

  int degree() const { return static_cast<int>(c_.size()) - 1; }  // -1 for zero poly
  bool is_zero() const { return c_.empty(); }
  double coeff(int k) const { return k >= 0 && k < (int)c_.size() ? c_[k] : 0.0; }
  const std::vector<double>& coeffs() const { return c_; }

  double eval(double x) const;
  std::complex<double> eval(std::complex<double> x) const;
  UniPoly derivative() const;
  double one_norm() const;

  UniPoly operator+(const UniPoly& o) const;
  UniPoly operator-(const UniPoly& o) const;
  UniPoly operator*(const UniPoly& o) const;
  UniPoly operator*(double s) const;

 private:
  void trim();
  std::vector<double> c_;  // ascending; empty == zero polynomial
};

/// Sparse bivariate polynomial, monomials u^i v^j.
class BiPoly {
 public:
  BiPoly() = default;
  static BiPoly monomial(int i, int j, double c);
  static BiPoly constant(double c) { return monomial(0, 0, c); }

  void add_term(int i, int j, double c);
  double coeff(int i, int j) const;
  bool is_zero() const { return terms_.empty(); }
  int degree() const;    // total degree, -1 for zero
  int degree_u() const;
  int degree_v() const;
  double one_norm() const;

  double eval(double u, double v) const;
  std::complex<double> eval(std::complex<double> u, std::complex<double> v) const;

  /// Partial derivatives (for Newton polishing).
  BiPoly du() const;
  BiPoly dv() const;

  /// Coefficients as a univariate polynomial in v (resp. u), each coefficient
  /// a UniPoly in the other variable. Index = power of the chosen variable.
  std::vector<UniPoly> coeffs_in_v() const;
  std::vector<UniPoly> coeffs_in_u() const;

  BiPoly operator+(const BiPoly& o) const;
  BiPoly operator-(const BiPoly& o) const;
  BiPoly operator*(const BiPoly& o) const;
  BiPoly operator*(double s) const;

  const std::map<std::pair<int, int>, double>& terms() const { return terms_; }

 private:
  std::map<std::pair<int, int>, double> terms_;  // no explicit zeros
};

/// Sparse trivariate polynomial in (l, m, n); used for the homogeneous
/// cylinder/cone condition polynomials.
class TriPoly {
 public:
  TriPoly() = default;
  static TriPoly monomial(int i, int j, int k, double c);
  static TriPoly constant(double c) { return monomial(0, 0, 0, c); }

  void add_term(int i, int j, int k, double c);
  double coeff(int i, int j, int k) const;
  bool is_zero() const { return terms_.empty(); }
  int degree() const;
  double one_norm() const;

  double eval(double l, double m, double n) const;

  /// Substitution n := 1 (dehomogenization), yielding a BiPoly in (l, m).
  BiPoly at_n1() const;
  /// Substitution n := 0, yielding a BiPoly in (l, m).
  BiPoly at_n0() const;
  /// True if every stored monomial has even total degree.
  bool is_even() const;

  TriPoly operator+(const TriPoly& o) const;
  TriPoly operator-(const TriPoly& o) const;
  TriPoly operator*(const TriPoly& o) const;
  TriPoly operator*(double s) const;

  const std::map<std::array<int, 3>, double>& terms() const { return terms_; }

 private:
  std::map<std::array<int, 3>, double> terms_;
};

/// Matrix polynomial M_0 + M_1 x + ... + M_d x^d, all square of equal size.
struct MatPoly {
  std::vector<Eigen::MatrixXd> M;  // ascending degree

  int degree() const { return static_cast<int>(M.size()) - 1; }
  int size() const { return M.empty() ? 0 : static_cast<int>(M.front().rows()); }
  Eigen::MatrixXd eval(double x) const;
  Eigen::MatrixXcd eval(std::complex<double> x) const;
  MatPoly transposed() const;
};

struct Pencil {
  Eigen::MatrixXd A, B;
};

struct EigenSolution {
  std::complex<double> eigenvalue;
  Eigen::VectorXcd eigenvector;  // unit length
  bool finite = true;            // false marks B-kernel directions
};

struct HomogeneousRoot {
  double l, m;       // unit length
  int multiplicity;  // 1 or 2
};

/// Tolerances used by the root pipeline.
struct SolveTols {
  double im_tol = 1e-7;
  double dedup_tol = 1e-6;
  double res_scale = 1e-7;  // res_tol = res_scale*(1+|f|_1)*(1+|(u,v)|)^deg
};

/// Real homogeneous roots of a l^2 + b l m + c m^2, classified by the
/// discriminant b^2 - 4ac. Throws DegenerateQuadratic if a = b = c = 0.
std::vector<HomogeneousRoot> quad_homogeneous_roots(double a, double b, double c);

enum class Var { U, V };

/// Sylvester matrix of f and g viewed as univariate polynomials in
/// `eliminated`; entries are polynomials in the kept variable.
/// det(sylvester(f,g)) equals the resultant.
MatPoly sylvester(const BiPoly& f, const BiPoly& g, Var eliminated);

/// Block companion pencil of a matrix polynomial: for degree 2,
/// A = [[0, I], [M0^t, M1^t]], B = [[I, 0], [0, -M2^t]].
Pencil linearize(const MatPoly& mp);

/// All generalized eigenpairs of the pencil. Pairs with |beta| <= 1e-10*|B|
/// are flagged finite=false. Throws SingularPencil when det(A - x B) == 0.
std::vector<EigenSolution> pencil_eigen(const Pencil& p);

/// Common real roots of {f = 0, g = 0} via the hidden-variable method.
std::vector<std::pair<double, double>> bivariate_solve(const BiPoly& f, const BiPoly& g,
                                                       const SolveTols& tols = {});

/// All real roots (with multiplicity) via companion-matrix eigenvalues plus a
/// Newton polish step.
std::vector<double> real_roots(const UniPoly& p, double im_tol = 1e-7);

/// Verification bound used by bivariate_solve, exposed for tests.
double residual_tolerance(const BiPoly& f, double u, double v, double res_scale = 1e-7);

}  // namespace minfit

#endif  // MINFIT_POLY_HPP
