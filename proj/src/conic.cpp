#include "minfit/conic.hpp"

#include <cmath>

namespace minfit {

PlaneFit fit_plane(std::span<const Vec3> pts) {
  PlaneFit out;
  out.centroid = Vec3::Zero();
  for (const auto& p : pts) out.centroid += p;
  out.centroid /= static_cast<double>(pts.size());
  Eigen::MatrixXd M(pts.size(), 3);
  for (size_t i = 0; i < pts.size(); ++i) M.row(i) = (pts[i] - out.centroid).transpose();
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
  out.normal = svd.matrixV().col(2);
  out.max_residual = 0.0;
  for (const auto& p : pts)
    out.max_residual = std::max(out.max_residual, std::abs((p - out.centroid).dot(out.normal)));
  return out;
}

RigidMotion plane_frame(const PlaneFit& plane) {
  const Vec3 n = plane.normal;
  Vec3 aux = std::abs(n.z()) > 0.9 ? Vec3(1, 0, 0) : Vec3(0, 0, 1);
  Vec3 ex = (aux - aux.dot(n) * n).normalized();
  Vec3 ey = n.cross(ex);
  RigidMotion m;
  m.R.row(0) = ex;
  m.R.row(1) = ey;
  m.R.row(2) = n;
  m.t = -(m.R * plane.centroid);
  return m;
}

namespace {

Eigen::MatrixXd conic_design(std::span<const Vec2> pts) {
  Eigen::MatrixXd M(pts.size(), 6);
  for (size_t i = 0; i < pts.size(); ++i) {
    const double x = pts[i].x(), y = pts[i].y();
    M.row(i) << x * x, x * y, y * y, x, y, 1.0;
  }
  return M;
}

}  // namespace

std::optional<ConicCoeffs> fit_conic(std::span<const Vec2> pts) {
  if (pts.size() < 5) return std::nullopt;
  Eigen::MatrixXd M = conic_design(pts);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (s(s.size() - 2) <= 1e-10 * s(0)) return std::nullopt;  // pencil of conics fits
  Eigen::VectorXd v = svd.matrixV().col(5);
  return ConicCoeffs{v(0), v(1), v(2), v(3), v(4), v(5)};
}

double conic_interpolation_gap(std::span<const Vec2> pts) {
  Eigen::MatrixXd M = conic_design(pts);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const auto& s = svd.singularValues();
  return s(s.size() - 1) / std::max(s(0), 1e-300);
}

CanonicalConic canonicalize_conic(const ConicCoeffs& c) {
  CanonicalConic out;
  out.type = ConicType::Degenerate;

  Eigen::Matrix2d Q;
  Q << c.A, c.B / 2.0, c.B / 2.0, c.C;
  Vec2 b(c.D / 2.0, c.E / 2.0);
  Eigen::Matrix3d full;
  full << c.A, c.B / 2.0, c.D / 2.0, c.B / 2.0, c.C, c.E / 2.0, c.D / 2.0, c.E / 2.0, c.F;
  if (std::abs(full.determinant()) <= 1e-10) return out;  // degenerate conic (line pair)

  const double discQ = Q.determinant();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(Q);
  Eigen::Vector2d lam = es.eigenvalues();       // ascending
  Eigen::Matrix2d R = es.eigenvectors();        // columns
  if (R.determinant() < 0) R.col(1) *= -1.0;

  auto embed = [](const Eigen::Matrix2d& R2, const Vec2& t2) {
    RigidMotion m;
    m.R = Mat3::Identity();
    m.R.topLeftCorner<2, 2>() = R2;
    m.t = Vec3(t2.x(), t2.y(), 0.0);
    return m;
  };
  const Eigen::Matrix2d rot90 = (Eigen::Matrix2d() << 0, 1, -1, 0).finished();

  if (std::abs(discQ) <= 1e-9) {
    // Parabola: rank-1 quadratic part.
    int iq = std::abs(lam(0)) > std::abs(lam(1)) ? 0 : 1;  // the nonzero eigenvalue
    const double L = lam(iq);
    if (std::abs(L) <= 1e-12) return out;
    Eigen::Matrix2d Rp;
    Rp.col(0) = R.col(iq);
    Rp.col(1) = R.col(1 - iq);
    if (Rp.determinant() < 0) Rp.col(1) *= -1.0;
    const Vec2 lin = 2.0 * (Rp.transpose() * b);  // (d', e') of L x'^2 + d'x' + e'y' + F
    const double dp = lin(0), ep = lin(1);
    if (std::abs(ep) <= 1e-12) return out;  // parallel lines
    double alpha = -ep / L;
    Vec2 shift(-dp / (2.0 * L), -(c.F - dp * dp / (4.0 * L)) / ep);
    Eigen::Matrix2d Rc = Rp;
    if (alpha < 0) {
      // Rotate canonical frame by pi so the parabola opens toward +y.
      alpha = -alpha;
      Rc = Rp * (-Eigen::Matrix2d::Identity());
      // shift is applied in the pre-flip frame: data = Rp (flip(pc) + shift)
      // = Rc pc + Rp shift.
    }
    out.type = ConicType::Parabola;
    out.alpha = alpha;
    RigidMotion m;
    m.R = Mat3::Identity();
    m.R.topLeftCorner<2, 2>() = Rc;
    m.t = Vec3((Rp * shift).x(), (Rp * shift).y(), 0.0);
    out.to_data = m;
    return out;
  }

  // Central conic.
  const Vec2 center = Q.ldlt().solve(-b);
  const double Fc = ConicCoeffs{c.A, c.B, c.C, c.D, c.E, c.F}.eval(center);
  if (std::abs(Fc) <= 1e-12) return out;  // conic through its own center: line pair
  const double a1 = -lam(0) / Fc;
  const double a2 = -lam(1) / Fc;

  if (discQ > 0) {
    if (a1 <= 0 || a2 <= 0) return out;  // imaginary ellipse
    out.alpha = a1;
    out.beta = a2;
    out.type = std::abs(a1 - a2) <= 1e-7 * std::max(a1, a2) ? ConicType::Circle
                                                            : ConicType::Ellipse;
    out.to_data = embed(R, center);
    return out;
  }

  // Hyperbola: put the positive coefficient on x^2.
  if (a1 > 0) {
    out.alpha = a1;
    out.beta = -a2;
    out.to_data = embed(R, center);
  } else {
    out.alpha = a2;
    out.beta = -a1;
    out.to_data = embed(R * rot90.transpose(), center);
  }
  out.type = ConicType::Hyperbola;
  return out;
}

}  // namespace minfit
