#include "minfit/poly.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace minfit {

// ---------------------------------------------------------------------------
// UniPoly

void UniPoly::trim() {
  while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
}

double UniPoly::eval(double x) const {
  double r = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
  return r;
}

std::complex<double> UniPoly::eval(std::complex<double> x) const {
  std::complex<double> r = 0.0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = r * x + *it;
  return r;
}

UniPoly UniPoly::derivative() const {
  if (c_.size() <= 1) return UniPoly();
  std::vector<double> d(c_.size() - 1);
  for (size_t k = 1; k < c_.size(); ++k) d[k - 1] = c_[k] * static_cast<double>(k);
  return UniPoly(std::move(d));
}

double UniPoly::one_norm() const {
  double s = 0.0;
  for (double v : c_) s += std::abs(v);
  return s;
}

UniPoly UniPoly::operator+(const UniPoly& o) const {
  std::vector<double> r(std::max(c_.size(), o.c_.size()), 0.0);
  for (size_t k = 0; k < c_.size(); ++k) r[k] += c_[k];
  for (size_t k = 0; k < o.c_.size(); ++k) r[k] += o.c_[k];
  return UniPoly(std::move(r));
}

UniPoly UniPoly::operator-(const UniPoly& o) const { return *this + o * -1.0; }

UniPoly UniPoly::operator*(const UniPoly& o) const {
  if (is_zero() || o.is_zero()) return UniPoly();
  std::vector<double> r(c_.size() + o.c_.size() - 1, 0.0);
  for (size_t i = 0; i < c_.size(); ++i)
    for (size_t j = 0; j < o.c_.size(); ++j) r[i + j] += c_[i] * o.c_[j];
  return UniPoly(std::move(r));
}

UniPoly UniPoly::operator*(double s) const {
  std::vector<double> r = c_;
  for (double& v : r) v *= s;
  return UniPoly(std::move(r));
}

// ---------------------------------------------------------------------------
// BiPoly

BiPoly BiPoly::monomial(int i, int j, double c) {
  BiPoly p;
  p.add_term(i, j, c);
  return p;
}

void BiPoly::add_term(int i, int j, double c) {
  if (c == 0.0) return;
  auto key = std::make_pair(i, j);
  auto [it, inserted] = terms_.try_emplace(key, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

double BiPoly::coeff(int i, int j) const {
  auto it = terms_.find({i, j});
  return it == terms_.end() ? 0.0 : it->second;
}

int BiPoly::degree() const {
  int d = -1;
  for (const auto& [k, v] : terms_) d = std::max(d, k.first + k.second);
  return d;
}

int BiPoly::degree_u() const {
  int d = 0;
  for (const auto& [k, v] : terms_) d = std::max(d, k.first);
  return terms_.empty() ? -1 : d;
}

int BiPoly::degree_v() const {
  int d = 0;
  for (const auto& [k, v] : terms_) d = std::max(d, k.second);
  return terms_.empty() ? -1 : d;
}

double BiPoly::one_norm() const {
  double s = 0.0;
  for (const auto& [k, v] : terms_) s += std::abs(v);
  return s;
}

double BiPoly::eval(double u, double v) const {
  double s = 0.0;
  for (const auto& [k, c] : terms_) s += c * std::pow(u, k.first) * std::pow(v, k.second);
  return s;
}

std::complex<double> BiPoly::eval(std::complex<double> u, std::complex<double> v) const {
  std::complex<double> s = 0.0;
  for (const auto& [k, c] : terms_) s += c * std::pow(u, k.first) * std::pow(v, k.second);
  return s;
}

BiPoly BiPoly::du() const {
  BiPoly r;
  for (const auto& [k, c] : terms_)
    if (k.first > 0) r.add_term(k.first - 1, k.second, c * k.first);
  return r;
}

BiPoly BiPoly::dv() const {
  BiPoly r;
  for (const auto& [k, c] : terms_)
    if (k.second > 0) r.add_term(k.first, k.second - 1, c * k.second);
  return r;
}

std::vector<UniPoly> BiPoly::coeffs_in_v() const {
  int dv = std::max(degree_v(), 0);
  std::vector<std::vector<double>> raw(dv + 1);
  for (const auto& [k, c] : terms_) {
    auto& cu = raw[k.second];
    if ((int)cu.size() <= k.first) cu.resize(k.first + 1, 0.0);
    cu[k.first] += c;
  }
  std::vector<UniPoly> out;
  out.reserve(raw.size());
  for (auto& cu : raw) out.emplace_back(std::move(cu));
  return out;
}

std::vector<UniPoly> BiPoly::coeffs_in_u() const {
  int du = std::max(degree_u(), 0);
  std::vector<std::vector<double>> raw(du + 1);
  for (const auto& [k, c] : terms_) {
    auto& cv = raw[k.first];
    if ((int)cv.size() <= k.second) cv.resize(k.second + 1, 0.0);
    cv[k.second] += c;
  }
  std::vector<UniPoly> out;
  out.reserve(raw.size());
  for (auto& cv : raw) out.emplace_back(std::move(cv));
  return out;
}

BiPoly BiPoly::operator+(const BiPoly& o) const {
  BiPoly r = *this;
  for (const auto& [k, c] : o.terms_) r.add_term(k.first, k.second, c);
  return r;
}

BiPoly BiPoly::operator-(const BiPoly& o) const {
  BiPoly r = *this;
  for (const auto& [k, c] : o.terms_) r.add_term(k.first, k.second, -c);
  return r;
}

BiPoly BiPoly::operator*(const BiPoly& o) const {
  BiPoly r;
  for (const auto& [ka, ca] : terms_)
    for (const auto& [kb, cb] : o.terms_)
      r.add_term(ka.first + kb.first, ka.second + kb.second, ca * cb);
  return r;
}

BiPoly BiPoly::operator*(double s) const {
  BiPoly r;
  for (const auto& [k, c] : terms_) r.add_term(k.first, k.second, c * s);
  return r;
}

// ---------------------------------------------------------------------------
// TriPoly

TriPoly TriPoly::monomial(int i, int j, int k, double c) {
  TriPoly p;
  p.add_term(i, j, k, c);
  return p;
}

void TriPoly::add_term(int i, int j, int k, double c) {
  if (c == 0.0) return;
  std::array<int, 3> key{i, j, k};
  auto [it, inserted] = terms_.try_emplace(key, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

double TriPoly::coeff(int i, int j, int k) const {
  auto it = terms_.find({i, j, k});
  return it == terms_.end() ? 0.0 : it->second;
}

int TriPoly::degree() const {
  int d = -1;
  for (const auto& [k, v] : terms_) d = std::max(d, k[0] + k[1] + k[2]);
  return d;
}

double TriPoly::one_norm() const {
  double s = 0.0;
  for (const auto& [k, v] : terms_) s += std::abs(v);
  return s;
}

double TriPoly::eval(double l, double m, double n) const {
  double s = 0.0;
  for (const auto& [k, c] : terms_)
    s += c * std::pow(l, k[0]) * std::pow(m, k[1]) * std::pow(n, k[2]);
  return s;
}

BiPoly TriPoly::at_n1() const {
  BiPoly r;
  for (const auto& [k, c] : terms_) r.add_term(k[0], k[1], c);
  return r;
}

BiPoly TriPoly::at_n0() const {
  BiPoly r;
  for (const auto& [k, c] : terms_)
    if (k[2] == 0) r.add_term(k[0], k[1], c);
  return r;
}

bool TriPoly::is_even() const {
  for (const auto& [k, c] : terms_)
    if ((k[0] + k[1] + k[2]) % 2 != 0) return false;
  return true;
}

TriPoly TriPoly::operator+(const TriPoly& o) const {
  TriPoly r = *this;
  for (const auto& [k, c] : o.terms_) r.add_term(k[0], k[1], k[2], c);
  return r;
}

TriPoly TriPoly::operator-(const TriPoly& o) const {
  TriPoly r = *this;
  for (const auto& [k, c] : o.terms_) r.add_term(k[0], k[1], k[2], -c);
  return r;
}

TriPoly TriPoly::operator*(const TriPoly& o) const {
  TriPoly r;
  for (const auto& [ka, ca] : terms_)
    for (const auto& [kb, cb] : o.terms_)
      r.add_term(ka[0] + kb[0], ka[1] + kb[1], ka[2] + kb[2], ca * cb);
  return r;
}

TriPoly TriPoly::operator*(double s) const {
  TriPoly r;
  for (const auto& [k, c] : terms_) r.add_term(k[0], k[1], k[2], c * s);
  return r;
}

// ---------------------------------------------------------------------------
// MatPoly / Pencil

Eigen::MatrixXd MatPoly::eval(double x) const {
  Eigen::MatrixXd r = Eigen::MatrixXd::Zero(size(), size());
  for (int d = degree(); d >= 0; --d) r = r * x + M[d];
  return r;
}

Eigen::MatrixXcd MatPoly::eval(std::complex<double> x) const {
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(size(), size());
  for (int d = degree(); d >= 0; --d) r = r * x + M[d].cast<std::complex<double>>();
  return r;
}

MatPoly MatPoly::transposed() const {
  MatPoly r;
  r.M.reserve(M.size());
  for (const auto& m : M) r.M.push_back(m.transpose());
  return r;
}

// ---------------------------------------------------------------------------
// quad_homogeneous_roots

std::vector<HomogeneousRoot> quad_homogeneous_roots(double a, double b, double c) {
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
  if (!(scale > 0.0))
    throw MinfitError(ErrorCode::DegenerateQuadratic, "a = b = c = 0");
  auto unit = [](double l, double m) {
    double n = std::hypot(l, m);
    return HomogeneousRoot{l / n, m / n, 1};
  };
  std::vector<HomogeneousRoot> roots;
  const double zero_tol = 1e-14 * scale;
  if (std::abs(a) <= zero_tol) {
    // b l m + c m^2 = 0: directions (1,0) and (-c,b).
    if (std::abs(b) <= zero_tol) {
      roots.push_back(unit(1, 0));
      roots.back().multiplicity = 2;
    } else {
      roots.push_back(unit(1, 0));
      roots.push_back(unit(-c, b));
    }
    return roots;
  }
  if (std::abs(c) <= zero_tol) {
    if (std::abs(b) <= zero_tol) {
      roots.push_back(unit(0, 1));
      roots.back().multiplicity = 2;
    } else {
      roots.push_back(unit(0, 1));
      roots.push_back(unit(-b, a));
    }
    return roots;
  }
  const double delta = b * b - 4.0 * a * c;
  const double delta_tol = 1e-10 * scale * scale;
  if (delta < -delta_tol) return roots;  // no real direction
  if (std::abs(delta) <= delta_tol) {
    roots.push_back(unit(-b, 2.0 * a));
    roots.back().multiplicity = 2;
    return roots;
  }
  const double sq = std::sqrt(delta);
  roots.push_back(unit((-b + sq) / (2.0 * a), 1.0));
  roots.push_back(unit((-b - sq) / (2.0 * a), 1.0));
  return roots;
}

// ---------------------------------------------------------------------------
// sylvester

namespace {

std::vector<UniPoly> coeffs_in(const BiPoly& p, Var eliminated) {
  return eliminated == Var::V ? p.coeffs_in_v() : p.coeffs_in_u();
}

}  // namespace

MatPoly sylvester(const BiPoly& f, const BiPoly& g, Var eliminated) {
  if (f.is_zero() || g.is_zero())
    throw MinfitError(ErrorCode::ZeroInput, "sylvester: zero polynomial");
  const auto fc = coeffs_in(f, eliminated);
  const auto gc = coeffs_in(g, eliminated);
  const int p = static_cast<int>(fc.size()) - 1;
  const int q = static_cast<int>(gc.size()) - 1;
  if (p < 1 || q < 1)
    throw MinfitError(ErrorCode::ZeroInput, "sylvester: degree < 1 in eliminated variable");
  const int k = p + q;
  // Entry degrees in the kept variable.
  int maxdeg = 0;
  for (const auto& c : fc) maxdeg = std::max(maxdeg, c.degree());
  for (const auto& c : gc) maxdeg = std::max(maxdeg, c.degree());
  maxdeg = std::max(maxdeg, 0);
  MatPoly out;
  out.M.assign(maxdeg + 1, Eigen::MatrixXd::Zero(k, k));
  // Columns correspond to descending powers of the eliminated variable; the
  // kernel of the instantiated matrix carries (x^{k-1}, ..., x, 1).
  auto put = [&](int row, int col, const UniPoly& c) {
    for (int d = 0; d <= c.degree(); ++d) out.M[d](row, col) += c.coeff(d);
  };
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < k; ++j) {
      int idx = p + i - j;
      if (idx >= 0 && idx <= p) put(i, j, fc[idx]);
    }
  for (int i = 0; i < p; ++i)
    for (int j = 0; j < k; ++j) {
      int idx = q + i - j;
      if (idx >= 0 && idx <= q) put(q + i, j, gc[idx]);
    }
  while (out.M.size() > 1 && out.M.back().isZero(0.0)) out.M.pop_back();
  return out;
}

// ---------------------------------------------------------------------------
// linearize

Pencil linearize(const MatPoly& mp) {
  const int d = mp.degree();
  const int k = mp.size();
  if (d < 1 || k < 1)
    throw MinfitError(ErrorCode::NotAPolynomialMatrix, "linearize: degree must be >= 1");
  const int n = k * d;
  Pencil p;
  p.A = Eigen::MatrixXd::Zero(n, n);
  p.B = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i + 1 < d; ++i)
    p.A.block(i * k, (i + 1) * k, k, k) = Eigen::MatrixXd::Identity(k, k);
  for (int i = 0; i < d; ++i)
    p.A.block((d - 1) * k, i * k, k, k) = mp.M[i].transpose();
  p.B.block((d - 1) * k, (d - 1) * k, k, k) = -mp.M[d].transpose();
  return p;
}

// ---------------------------------------------------------------------------
// pencil_eigen

std::vector<EigenSolution> pencil_eigen(const Pencil& p) {
  if (p.A.rows() != p.A.cols() || p.B.rows() != p.B.cols() || p.A.rows() != p.B.rows())
    throw MinfitError(ErrorCode::ZeroInput, "pencil_eigen: non-square pencil");
  Eigen::GeneralizedEigenSolver<Eigen::MatrixXd> ges;
  ges.compute(p.A, p.B, true);
  if (ges.info() != Eigen::Success)
    throw MinfitError(ErrorCode::NumericalFailure, "generalized eigensolver failed");
  const double normA = p.A.norm();
  const double normB = p.B.norm();
  std::vector<EigenSolution> out;
  int indeterminate = 0;
  for (int i = 0; i < p.A.rows(); ++i) {
    EigenSolution sol;
    const std::complex<double> alpha = ges.alphas()(i);
    const double beta = ges.betas()(i);
    sol.finite = std::abs(beta) > 1e-10 * std::max(normB, 1e-300);
    if (std::abs(alpha) <= 1e-12 * std::max(normA, 1e-300) && !sol.finite) ++indeterminate;
    sol.eigenvalue = sol.finite ? alpha / beta
                                : std::complex<double>(std::numeric_limits<double>::infinity(), 0);
    sol.eigenvector = ges.eigenvectors().col(i);
    double vn = sol.eigenvector.norm();
    if (vn > 0) sol.eigenvector /= vn;
    out.push_back(std::move(sol));
  }
  if (indeterminate == p.A.rows() && p.A.rows() > 0)
    throw MinfitError(ErrorCode::SingularPencil, "pencil is singular");
  return out;
}

// ---------------------------------------------------------------------------
// real_roots

std::vector<double> real_roots(const UniPoly& p, double im_tol) {
  if (p.is_zero()) throw MinfitError(ErrorCode::ZeroInput, "real_roots: zero polynomial");
  std::vector<double> c = p.coeffs();
  double maxc = 0.0;
  for (double v : c) maxc = std::max(maxc, std::abs(v));
  // Drop numerically negligible leading coefficients; they only produce
  // spurious near-infinite companion eigenvalues.
  while (c.size() > 1 && std::abs(c.back()) <= 1e-13 * maxc) c.pop_back();
  const int deg = static_cast<int>(c.size()) - 1;
  if (deg < 1) return {};
  Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -c[i] / c[deg];
  Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
  if (es.info() != Eigen::Success)
    throw MinfitError(ErrorCode::NumericalFailure, "companion eigensolver failed");
  UniPoly trimmed(c);
  UniPoly dp = trimmed.derivative();
  std::vector<double> roots;
  for (int i = 0; i < deg; ++i) {
    std::complex<double> z = es.eigenvalues()(i);
    if (std::abs(z.imag()) > im_tol * (1.0 + std::abs(z.real()))) continue;
    double x = z.real();
    // One Newton polish step (a couple extra iterations cost nothing).
    for (int it = 0; it < 3; ++it) {
      double fd = dp.eval(x);
      if (std::abs(fd) < 1e-300) break;
      double step = trimmed.eval(x) / fd;
      if (!std::isfinite(step)) break;
      x -= step;
    }
    roots.push_back(x);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

// ---------------------------------------------------------------------------
// bivariate_solve

double residual_tolerance(const BiPoly& f, double u, double v, double res_scale) {
  return res_scale * (1.0 + f.one_norm()) *
         std::pow(1.0 + std::hypot(u, v), std::max(f.degree(), 0));
}

namespace {

UniPoly slice(const BiPoly& p, Var eliminated, double kept_value) {
  // Polynomial in the eliminated variable with the kept variable instantiated.
  const auto cs = coeffs_in(p, eliminated);
  std::vector<double> out(cs.size());
  for (size_t i = 0; i < cs.size(); ++i) out[i] = cs[i].eval(kept_value);
  return UniPoly(std::move(out));
}

void newton_polish(const BiPoly& f, const BiPoly& g, double& u, double& v) {
  const BiPoly fu = f.du(), fv = f.dv(), gu = g.du(), gv = g.dv();
  for (int it = 0; it < 6; ++it) {
    const double a = fu.eval(u, v), b = fv.eval(u, v);
    const double c = gu.eval(u, v), d = gv.eval(u, v);
    const double det = a * d - b * c;
    if (std::abs(det) < 1e-300) return;
    const double r0 = f.eval(u, v), r1 = g.eval(u, v);
    const double du_ = (d * r0 - b * r1) / det;
    const double dv_ = (-c * r0 + a * r1) / det;
    if (!std::isfinite(du_) || !std::isfinite(dv_)) return;
    u -= du_;
    v -= dv_;
    if (std::abs(du_) + std::abs(dv_) < 1e-14 * (1.0 + std::abs(u) + std::abs(v))) break;
  }
}

std::vector<std::pair<double, double>> solve_separable(const BiPoly& f, const BiPoly& g,
                                                       Var elim, const SolveTols& tols) {
  // f does not involve the eliminated variable: solve f in the kept variable,
  // then g restricted to each root.
  std::vector<double> kept_coeffs;
  const auto cs = elim == Var::V ? f.coeffs_in_u() : f.coeffs_in_v();
  for (const auto& c : cs) kept_coeffs.push_back(c.coeff(0));
  UniPoly fk(std::move(kept_coeffs));
  std::vector<std::pair<double, double>> out;
  if (fk.degree() < 1) throw MinfitError(ErrorCode::SingularPencil, "degenerate system");
  for (double k : real_roots(fk, tols.im_tol)) {
    UniPoly gs = slice(g, elim, k);
    if (gs.degree() < 1) continue;
    for (double e : real_roots(gs, tols.im_tol)) {
      double u = elim == Var::V ? k : e;
      double v = elim == Var::V ? e : k;
      out.emplace_back(u, v);
    }
  }
  return out;
}

}  // namespace

std::vector<std::pair<double, double>> bivariate_solve(const BiPoly& f, const BiPoly& g,
                                                       const SolveTols& tols) {
  if (f.is_zero() || g.is_zero())
    throw MinfitError(ErrorCode::ZeroInput, "bivariate_solve: zero polynomial");

  // Eliminate the variable of higher degree; tie eliminates v.
  const int du = std::max(f.degree_u(), g.degree_u());
  const int dv = std::max(f.degree_v(), g.degree_v());
  const Var elim = du > dv ? Var::U : Var::V;

  const int fde = elim == Var::V ? f.degree_v() : f.degree_u();
  const int gde = elim == Var::V ? g.degree_v() : g.degree_u();

  std::vector<std::pair<double, double>> candidates;
  if (fde < 1 || gde < 1) {
    const BiPoly& flat = fde < 1 ? f : g;
    const BiPoly& other = fde < 1 ? g : f;
    candidates = solve_separable(flat, other, elim, tols);
  } else {
    const MatPoly smat = sylvester(f, g, elim);
    if (smat.degree() < 1)
      throw MinfitError(ErrorCode::SingularPencil, "resultant is constant in the kept variable");
    // Linearize the transposed Sylvester matrix: the pencil eigenvector then
    // carries descending powers of the eliminated variable in its first block.
    const Pencil pencil = linearize(smat.transposed());
    const int k = smat.size();
    for (const EigenSolution& sol : pencil_eigen(pencil)) {
      if (!sol.finite) continue;
      const std::complex<double> lam = sol.eigenvalue;
      if (std::abs(lam.imag()) > tols.im_tol * (1.0 + std::abs(lam.real()))) continue;
      const double kept = lam.real();
      const Eigen::VectorXcd block = sol.eigenvector.head(k);
      double bmax = 0.0;
      for (int i = 0; i < k; ++i) bmax = std::max(bmax, std::abs(block(i)));
      std::complex<double> acc = 0.0;
      int cnt = 0;
      for (int i = 0; i + 1 < k; ++i) {
        if (std::abs(block(i + 1)) > 0.1 * bmax) {
          acc += block(i) / block(i + 1);
          ++cnt;
        }
      }
      auto push = [&](double e) {
        double u = elim == Var::V ? kept : e;
        double v = elim == Var::V ? e : kept;
        candidates.emplace_back(u, v);
      };
      if (cnt > 0) {
        const std::complex<double> e = acc / static_cast<double>(cnt);
        if (std::abs(e.imag()) <= tols.im_tol * (1.0 + std::abs(e.real()))) push(e.real());
      }
      // Near-multiple roots can mix kernel directions; the univariate slice
      // supplies the remaining candidates, all filtered by residuals below.
      UniPoly fs = slice(f, elim, kept);
      if (fs.degree() >= 1)
        for (double e : real_roots(fs, tols.im_tol)) push(e);
    }
  }

  std::vector<std::pair<double, double>> roots;
  for (auto [u, v] : candidates) {
    if (!std::isfinite(u) || !std::isfinite(v)) continue;
    newton_polish(f, g, u, v);
    if (std::abs(f.eval(u, v)) > residual_tolerance(f, u, v, tols.res_scale)) continue;
    if (std::abs(g.eval(u, v)) > residual_tolerance(g, u, v, tols.res_scale)) continue;
    roots.emplace_back(u, v);
  }
  std::sort(roots.begin(), roots.end());
  std::vector<std::pair<double, double>> dedup;
  for (const auto& r : roots) {
    bool dup = false;
    for (const auto& d : dedup)
      if (std::hypot(r.first - d.first, r.second - d.second) <= tols.dedup_tol) {
        dup = true;
        break;
      }
    if (!dup) dedup.push_back(r);
  }
  return dedup;
}

}  // namespace minfit
