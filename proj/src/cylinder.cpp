#include "minfit/cylinder.hpp"

#include <algorithm>
#include <cmath>

#include "minfit/conic.hpp"

namespace minfit {

namespace {

constexpr double kCoplanarTol = 1e-9;   // unit-scaled coordinates
constexpr double kVerifyTol = 1e-6;     // circumcircle verification of q4, q5
constexpr double kDegenerateTol = 1e-9; // a = b = c = 0 test

/// Orthonormal basis of the plane orthogonal to t.
void plane_basis(const Vec3& t, Vec3& u, Vec3& v) {
  Vec3 aux = std::abs(t.z()) > 0.9 ? Vec3(1, 0, 0) : Vec3(0, 0, 1);
  u = (aux - aux.dot(t) * t).normalized();
  v = t.cross(u);
}

/// Projects the points along t and interpolates a cylinder if the five
/// projections are cocyclic (circle through q1,q2,q3 checked on q4,q5).
std::optional<Cylinder> cylinder_from_direction(std::span<const Vec3> pts, const Vec3& t,
                                                double verify_tol) {
  Vec3 u, v;
  plane_basis(t, u, v);
  std::vector<Vec2> q(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) q[i] = Vec2(pts[i].dot(u), pts[i].dot(v));
  const Vec2 b = q[1] - q[0], c = q[2] - q[0];
  const double det = 2.0 * (b.x() * c.y() - b.y() * c.x());
  if (std::abs(det) <= 1e-12) return std::nullopt;  // projections collinear
  const double bb = b.squaredNorm(), cc = c.squaredNorm();
  const Vec2 center = q[0] + Vec2(c.y() * bb - b.y() * cc, b.x() * cc - c.x() * bb) / det;
  const double r = (q[0] - center).norm();
  if (!(r > 1e-12)) return std::nullopt;
  for (size_t i = 3; i < pts.size(); ++i)
    if (std::abs((q[i] - center).norm() - r) > verify_tol) return std::nullopt;
  return Cylinder(center.x() * u + center.y() * v, t, r);
}

}  // namespace

Cyl1N2PCoeffs cylinder_direction_quadratic(const Vec3& p2, const Vec3& p3) {
  const double x2 = p2.x(), y2 = p2.y(), z2 = p2.z();
  const double x3 = p3.x(), y3 = p3.y(), z3 = p3.z();
  Cyl1N2PCoeffs c;
  c.a = (y2 * y2 + z2 * z2) * z3 - (y3 * y3 + z3 * z3) * z2;
  c.b = -2.0 * (x2 * y2 * z3 - x3 * y3 * z2);
  c.c = (x2 * x2 + z2 * z2) * z3 - (x3 * x3 + z3 * z3) * z2;
  c.delta = c.b * c.b - 4.0 * c.a * c.c;
  return c;
}

CylinderSolutions cylinder_from_oriented_and_two_points(const OrientedPoint& op1,
                                                        const Vec3& p2, const Vec3& p3) {
  if (!op1.n) throw MinfitError(ErrorCode::MissingNormal, "first point must carry a normal");
  const Vec3 raw[3] = {op1.p, p2, p3};
  const UnitScale scale = UnitScale::of(raw);
  OrientedPoint sp1(scale.to_unit(op1.p));
  sp1.n = op1.n;
  const RigidMotion M = canonical_frame_oriented(sp1);
  const Vec3 q2 = M.apply(scale.to_unit(p2));
  const Vec3 q3 = M.apply(scale.to_unit(p3));

  if (q2.norm() <= kCoplanarTol && q3.norm() <= kCoplanarTol)
    return CylinderSolutions::infinite(Reason::CoincidentPoints, "all three points coincide");

  const Cyl1N2PCoeffs co = cylinder_direction_quadratic(q2, q3);
  if (std::max({std::abs(co.a), std::abs(co.b), std::abs(co.c)}) <= kDegenerateTol) {
    // Flat/infinite family: classify which condition of the degeneracy
    // trichotomy failed.
    if (q2.norm() <= kCoplanarTol || q3.norm() <= kCoplanarTol ||
        (q2 - q3).norm() <= kCoplanarTol)
      return CylinderSolutions::infinite(Reason::CoincidentPoints, "coincident input points");
    if (std::abs(q2.z()) <= kCoplanarTol && std::abs(q3.z()) <= kCoplanarTol)
      return CylinderSolutions::infinite(Reason::NormalPlaneCoplanar,
                                         "points lie in the normal plane of p1");
    if ((q3 - Vec3(-q2.x(), -q2.y(), q2.z())).norm() <= 1e-7)
      return CylinderSolutions::infinite(Reason::MirrorSymmetric,
                                         "p2, p3 symmetric about the normal line");
    return CylinderSolutions::infinite(Reason::Generic, "direction quadratic vanished");
  }

  if (q2.z() * q3.z() < 0.0)
    return CylinderSolutions::empty(Reason::OppositeSides,
                                    "p2, p3 on opposite sides of the normal plane");

  std::vector<HomogeneousRoot> roots = quad_homogeneous_roots(co.a, co.b, co.c);
  if (roots.empty())
    return CylinderSolutions::empty(Reason::NoRealRoot, "negative discriminant");

  const RigidMotion back = M.inverse();
  std::vector<Cylinder> cyls;
  Diagnosis diag;
  for (const HomogeneousRoot& root : roots) {
    // Radius from whichever of z2, z3 is better conditioned.
    const Vec3& q = std::abs(q2.z()) >= std::abs(q3.z()) ? q2 : q3;
    const double yp = -q.x() * root.m + q.y() * root.l;  // rho = 1 for unit roots
    if (std::abs(q.z()) <= 1e-300) continue;
    const double r = (yp * yp + q.z() * q.z()) / (2.0 * q.z());
    if (!(std::abs(r) > 1e-12) || !std::isfinite(r)) continue;
    Cylinder canon(Vec3(0, 0, r), Vec3(root.l, root.m, 0), std::abs(r));
    cyls.push_back(scale.from_unit(transform(back, canon)));
    if (root.multiplicity == 2) diag.note = "multiplicity 2";
  }
  if (cyls.empty()) return CylinderSolutions::empty(Reason::NoRealRoot, "no valid radius");
  return CylinderSolutions::finite(std::move(cyls), std::move(diag));
}

Circle3D circumcircle(const Vec3& q1, const Vec3& q2, const Vec3& q3) {
  const Vec3 b = q2 - q1, c = q3 - q1;
  const Vec3 w = b.cross(c);
  const double scale = std::max(b.norm(), c.norm());
  if (w.norm() <= 1e-12 * std::max(scale * scale, 1e-300))
    throw MinfitError(ErrorCode::FlatCircle, "circumcircle of collinear points");
  const Vec3 n = w.normalized();
  // Solve 2 b.x = |b|^2, 2 c.x = |c|^2 in the plane.
  Eigen::Matrix3d A;
  A.row(0) = 2.0 * b.transpose();
  A.row(1) = 2.0 * c.transpose();
  A.row(2) = n.transpose();
  Vec3 rhs(b.squaredNorm(), c.squaredNorm(), 0.0);
  const Vec3 x = A.partialPivLu().solve(rhs);
  Circle3D out;
  out.center = q1 + x;
  out.radius = x.norm();
  out.plane_normal = normalize_axis_sign(n);
  return out;
}

TriPoly cylinder_cocyclicity_cubic(std::span<const Vec3, 4> p) {
  const double x2 = p[1].x();
  const double x3 = p[2].x(), y3 = p[2].y();
  const double x4 = p[3].x(), y4 = p[3].y(), z4 = p[3].z();

  const TriPoly l = TriPoly::monomial(1, 0, 0, 1.0);
  const TriPoly m = TriPoly::monomial(0, 1, 0, 1.0);
  const TriPoly n = TriPoly::monomial(0, 0, 1, 1.0);
  const TriPoly tt = l * l + m * m + n * n;

  auto tnorm = [&](const Vec3& q) {
    // |t|^2 |q|^2 - (t.q)^2
    TriPoly dot = l * q.x() + m * q.y() + n * q.z();
    return tt * q.squaredNorm() - dot * dot;
  };
  const TriPoly T3 = tnorm(p[2]);
  const TriPoly T4 = tnorm(p[3]);

  // det | l x3 x4 ; m y3 y4 ; n 0 z4 |
  const TriPoly det1 = l * (y3 * z4) - m * (x3 * z4) + n * (x3 * y4 - x4 * y3);
  // det | m y3 y4 ; n 0 z4 ; 0 T3 T4 |
  const TriPoly det2 = m * (T3 * (-z4)) - n * (T4 * y3 - T3 * y4);

  return (m * m + n * n) * det1 * (x2 * x2) - det2 * x2;
}

Cyl5PSystem cylinder_five_point_system(std::span<const Vec3, 5> p) {
  Cyl5PSystem sys;
  sys.C4 = cylinder_cocyclicity_cubic(std::span<const Vec3, 4>(p.data(), 4));
  const Vec3 quad5[4] = {p[0], p[1], p[2], p[4]};
  sys.C5 = cylinder_cocyclicity_cubic(quad5);

  const double x2 = p[1].x();
  const double x3 = p[2].x(), y3 = p[2].y();
  auto D = [&](const Vec3& pj) {
    const double xj = pj.x(), yj = pj.y(), zj = pj.z();
    TriPoly d;
    d.add_term(2, 0, 0, -yj * y3 * y3 + yj * yj * y3 + zj * zj * y3);
    d.add_term(1, 1, 0, 2.0 * yj * y3 * x3 - 2.0 * yj * xj * y3);
    d.add_term(1, 0, 1, zj * (x2 * y3 - 2.0 * xj * y3));
    d.add_term(0, 2, 0, x2 * yj * x3 - x2 * xj * y3 - yj * x3 * x3 + xj * xj * y3 + zj * zj * y3);
    d.add_term(0, 1, 1, zj * (-x2 * x3 + x3 * x3 + y3 * y3 - 2.0 * yj * y3));
    d.add_term(0, 0, 2, x2 * yj * x3 - x2 * xj * y3 - yj * x3 * x3 + xj * xj * y3 -
                            yj * y3 * y3 + yj * yj * y3);
    return d;
  };
  sys.D4 = D(p[3]);
  sys.D5 = D(p[4]);
  sys.delta = sys.D4 * p[4].z() - sys.D5 * p[3].z();
  sys.pivot = std::abs(p[3].z()) >= std::abs(p[4].z()) ? 4 : 5;

  sys.F = TriPoly::monomial(0, 0, 1, x2);
  const TriPoly m = TriPoly::monomial(0, 1, 0, 1.0);
  const TriPoly l = TriPoly::monomial(1, 0, 0, 1.0);
  sys.G = (m * (x3 - x2) - l * y3) * (m * x3 - l * y3) * m * x2;
  return sys;
}

CylinderSolutions cylinder_from_five_points(std::span<const Vec3> pts) {
  if (pts.size() != 5)
    throw MinfitError(ErrorCode::UsageError, "cylinder_from_five_points needs 5 points");
  const UnitScale scale = UnitScale::of(pts);
  std::vector<Vec3> u(5);
  for (int i = 0; i < 5; ++i) u[i] = scale.to_unit(pts[i]);
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j)
      if ((u[i] - u[j]).norm() <= 1e-12)
        throw MinfitError(ErrorCode::CoincidentPoints, "coincident input points");

  // Reorder so the frame triple is not collinear (keep input order otherwise).
  std::vector<int> order = {0, 1, 2, 3, 4};
  {
    const Vec3 e = (u[1] - u[0]).normalized();
    int k3 = -1;
    for (int k = 2; k < 5; ++k)
      if (e.cross(u[k] - u[0]).norm() > 1e-10) {
        k3 = k;
        break;
      }
    if (k3 < 0)
      return CylinderSolutions::infinite(Reason::CollinearPoints, "all five points collinear");
    if (k3 != 2) std::swap(order[2], order[k3]);
  }
  std::vector<Vec3> w(5);
  for (int i = 0; i < 5; ++i) w[i] = u[order[i]];
  const RigidMotion M = canonical_frame_points(std::span<const Vec3>(w.data(), 3));
  for (auto& p : w) p = M.apply(p);

  if (std::abs(w[3].z()) <= kCoplanarTol && std::abs(w[4].z()) <= kCoplanarTol)
    return cylinder_from_coplanar_five(pts);
  if (std::abs(w[3].z()) < std::abs(w[4].z())) std::swap(w[3], w[4]);

  const Cyl5PSystem sys = cylinder_five_point_system(std::span<const Vec3, 5>(w.data(), 5));
  const TriPoly& C = sys.pivot == 4 ? sys.C4 : sys.C5;

  // Union of both elimination orders: a root pair sharing one coordinate can
  // defeat the eigenvector recovery in a single order; duplicates and junk
  // are removed by the dedup/verification below.
  auto swap_vars = [](const BiPoly& f) {
    BiPoly g;
    for (const auto& [ij, c] : f.terms()) g.add_term(ij.second, ij.first, c);
    return g;
  };
  std::vector<Vec3> dirs;
  for (auto [l, m] : bivariate_solve(C.at_n1(), sys.delta.at_n1()))
    dirs.push_back(Vec3(l, m, 1.0).normalized());
  try {
    for (auto [m, l] : bivariate_solve(swap_vars(C.at_n1()), swap_vars(sys.delta.at_n1())))
      dirs.push_back(Vec3(l, m, 1.0).normalized());
  } catch (const MinfitError&) {
  }
  // The n = 0 candidates are the three chord directions of the frame triple;
  // the decision is the evaluation of delta there.
  const double n0_tol = 1e-9 * (1.0 + sys.delta.one_norm());
  const Vec3 chords[3] = {Vec3(1, 0, 0), Vec3(w[2].x(), w[2].y(), 0).normalized(),
                          Vec3(w[2].x() - w[1].x(), w[2].y(), 0).normalized()};
  for (const Vec3& d : chords)
    if (std::abs(sys.delta.eval(d.x(), d.y(), d.z())) <= n0_tol) dirs.push_back(d);

  // Deduplicate directions (projective). One root can surface twice with a
  // small numerical offset (eigen route + chord test or clustered
  // eigenvalues), so merge coarsely and keep the best system residual.
  auto sys_res = [&](const Vec3& d) {
    return std::abs(C.eval(d.x(), d.y(), d.z())) +
           std::abs(sys.delta.eval(d.x(), d.y(), d.z()));
  };
  std::vector<Vec3> uniq;
  for (const Vec3& d : dirs) {
    bool dup = false;
    for (Vec3& e : uniq)
      if (std::min((d - e).norm(), (d + e).norm()) <= 1e-4) {
        if (sys_res(d) < sys_res(e)) e = d;
        dup = true;
        break;
      }
    if (!dup) uniq.push_back(d);
  }

  std::vector<Cylinder> cyls;
  for (const Vec3& d : uniq)
    if (auto cyl = cylinder_from_direction(std::span<const Vec3>(w.data(), 5), d, kVerifyTol))
      cyls.push_back(*cyl);

  Diagnosis diag;
  if (cyls.size() % 2 != 0) diag.note = "odd count: multiplicity merge suspected";

  const RigidMotion back = M.inverse();
  for (auto& c : cyls) c = scale.from_unit(transform(back, c));
  std::sort(cyls.begin(), cyls.end(), [](const Cylinder& a, const Cylinder& b) {
    if (a.radius != b.radius) return a.radius < b.radius;
    return std::lexicographical_compare(a.axis_dir.data(), a.axis_dir.data() + 3,
                                        b.axis_dir.data(), b.axis_dir.data() + 3);
  });
  if (cyls.empty()) return CylinderSolutions::empty(Reason::NoRealRoot, "no cocyclic direction");
  return CylinderSolutions::finite(std::move(cyls), std::move(diag));
}

CylinderSolutions cylinder_from_coplanar_five(std::span<const Vec3> pts) {
  if (pts.size() != 5)
    throw MinfitError(ErrorCode::UsageError, "cylinder_from_coplanar_five needs 5 points");
  const UnitScale scale = UnitScale::of(pts);
  std::vector<Vec3> u(5);
  for (int i = 0; i < 5; ++i) u[i] = scale.to_unit(pts[i]);
  for (int i = 0; i < 5; ++i)
    for (int j = i + 1; j < 5; ++j)
      if ((u[i] - u[j]).norm() <= 1e-12)
        throw MinfitError(ErrorCode::CoincidentPoints, "coincident input points");

  const PlaneFit plane = fit_plane(u);
  if (plane.max_residual > 1e-7)
    throw MinfitError(ErrorCode::CoplanarInput, "points are not coplanar");
  const RigidMotion M = plane_frame(plane);
  std::vector<Vec2> q(5);
  bool collinear = true;
  for (int i = 0; i < 5; ++i) {
    const Vec3 p = M.apply(u[i]);
    q[i] = Vec2(p.x(), p.y());
  }
  for (int i = 2; i < 5 && collinear; ++i) {
    const Vec2 a = q[1] - q[0], b = q[i] - q[0];
    if (std::abs(a.x() * b.y() - a.y() * b.x()) > 1e-10) collinear = false;
  }
  if (collinear)
    return CylinderSolutions::infinite(Reason::CollinearPoints, "aligned coplanar points");

  const auto conic = fit_conic(q);
  if (!conic)
    return CylinderSolutions::empty(Reason::CoplanarConic, "points do not determine a conic");
  const CanonicalConic cc = canonicalize_conic(*conic);
  if (cc.type == ConicType::Hyperbola || cc.type == ConicType::Parabola ||
      cc.type == ConicType::Degenerate)
    return CylinderSolutions::empty(Reason::CoplanarConic,
                                    "interpolating conic is not an ellipse");

  // Semi-axes and in-plane principal directions of the ellipse.
  const double sx = 1.0 / std::sqrt(cc.alpha);
  const double sy = 1.0 / std::sqrt(cc.beta);
  const Vec3 ex = cc.to_data.R.col(0);
  const Vec3 ey = cc.to_data.R.col(1);
  const double A = std::max(sx, sy), B = std::min(sx, sy);
  const Vec3 major = sx >= sy ? ex : ey;
  const Vec3 center_plane = cc.to_data.t;

  const RigidMotion back = M.inverse();
  std::vector<Cylinder> canon;
  if (cc.type == ConicType::Circle) {
    canon.emplace_back(center_plane, Vec3(0, 0, 1), B);
  } else {
    // An ellipse is the planar slice of exactly two cylinders of radius B,
    // their axes tilted about the minor axis on either side of the plane.
    const double c = B / A;
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    canon.emplace_back(center_plane, (c * Vec3(0, 0, 1) + s * major).normalized(), B);
    canon.emplace_back(center_plane, (c * Vec3(0, 0, 1) - s * major).normalized(), B);
  }
  std::vector<Cylinder> cyls;
  for (const Cylinder& c : canon) {
    bool ok = true;
    for (int i = 0; i < 5 && ok; ++i)
      ok = cylinder_residual(c, M.apply(u[i])) <= 1e-9;
    if (ok) cyls.push_back(scale.from_unit(transform(back, c)));
  }
  if (cyls.empty())
    return CylinderSolutions::empty(Reason::CoplanarConic, "ellipse construction failed");
  Diagnosis diag;
  if (cc.type == ConicType::Circle) diag.note = "circle: the two cylinders coincide";
  return CylinderSolutions::finite(std::move(cyls), std::move(diag));
}

}  // namespace minfit
