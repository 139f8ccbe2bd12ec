#include "minfit/cone.hpp"

#include <algorithm>
#include <cmath>

#include "minfit/conic.hpp"

namespace minfit {

namespace {

constexpr double kPlaneTol = 1e-9;     // unit-scaled coordinates
constexpr double kApexGuard = 1e-9;    // apex must stay away from input points
constexpr double kVerifyTol = 1e-6;    // residual acceptance for candidates

bool residuals_ok(const Cone& c, std::span<const Vec3> pts, double tol = kVerifyTol) {
  for (const auto& p : pts) {
    if ((p - c.apex).norm() <= kApexGuard) return false;
    if (cone_residual(c, p) > tol) return false;
  }
  return true;
}

void dedup_and_sort(std::vector<Cone>& cones, Diagnosis& diag, std::span<const Vec3> pts) {
  // One root can surface twice with a small numerical offset (distinct
  // candidate sources, clustered eigenvalues); merge coarsely and keep the
  // representative with the smallest worst-case residual.
  auto worst = [&](const Cone& c) {
    double r = 0.0;
    for (const auto& p : pts) r = std::max(r, cone_residual(c, p));
    return r;
  };
  // The merge is scale-aware in the apex term: as the half-angle approaches
  // pi/2 the apex recedes to infinity and its position becomes ill-conditioned,
  // so two reconstructions of one root can land millimetres apart while the
  // axis direction and half-angle still agree to ~1e-5.
  auto same = [](const Cone& a, const Cone& b) {
    const double dir =
        std::acos(std::min(1.0, std::abs(a.axis_dir.dot(b.axis_dir))));
    const double ang = std::abs(a.half_angle - b.half_angle);
    if (dir > 1e-4 || ang > 1e-4) return false;
    const double open = std::max(std::cos(std::max(a.half_angle, b.half_angle)), 0.05);
    const double apex_tol = 1e-4 * (1.0 + a.apex.norm() + b.apex.norm()) / open;
    return (a.apex - b.apex).norm() <= apex_tol;
  };
  std::vector<Cone> uniq;
  for (const Cone& c : cones) {
    bool dup = false;
    for (Cone& e : uniq)
      if (same(c, e)) {
        if (worst(c) < worst(e)) e = c;
        dup = true;
        break;
      }
    if (!dup) uniq.push_back(c);
  }
  cones = std::move(uniq);
  std::sort(cones.begin(), cones.end(), [](const Cone& a, const Cone& b) {
    if (a.half_angle != b.half_angle) return a.half_angle < b.half_angle;
    return std::lexicographical_compare(a.apex.data(), a.apex.data() + 3, b.apex.data(),
                                        b.apex.data() + 3);
  });
  if (cones.size() % 2 != 0) diag.note = "odd count: multiplicity merge suspected";
}

BiPoly swap_vars(const BiPoly& f) {
  BiPoly g;
  for (const auto& [ij, c] : f.terms()) g.add_term(ij.second, ij.first, c);
  return g;
}

// Union of both elimination orders: a root pair sharing one coordinate can
// defeat the eigenvector recovery in a single order. Duplicates and spurious
// candidates are removed by the downstream verification/dedup.
std::vector<std::pair<double, double>> solve_both_orders(const BiPoly& f, const BiPoly& g) {
  std::vector<std::pair<double, double>> roots;
  try {
    roots = bivariate_solve(f, g);
  } catch (const MinfitError&) {
  }
  try {
    for (auto [v, u] : bivariate_solve(swap_vars(f), swap_vars(g))) roots.emplace_back(u, v);
  } catch (const MinfitError&) {
    if (roots.empty()) throw;
  }
  return roots;
}

}  // namespace

Cone2NGeometry cone_two_normal_geometry(const Vec3& p2, const Vec3& n2) {
  Cone2NGeometry g;
  g.L1 = {Vec3::Zero(), Vec3(0, 0, 1)};
  g.L2 = {p2, Dir3(n2).vec()};
  const Vec3 u = g.L2.dir;
  const double a2 = u.x(), b2 = u.y();
  const double pp = a2 * a2 + b2 * b2;
  if (pp > 1e-18) {
    const double rhs = p2.dot(u);
    Line3 locus;
    locus.point = Vec3(rhs * a2 / pp, rhs * b2 / pp, 0.0);
    locus.dir = Vec3(-b2, a2, 0).normalized();
    g.apex_locus = locus;
    if (std::abs(p2.y() * a2 - p2.x() * b2) <= kPlaneTol * (1.0 + p2.norm())) {
      const double lam2 = -(p2.x() * a2 + p2.y() * b2) / pp;
      g.intersect_q = Vec3(0, 0, p2.z() + lam2 * u.z());
    }
  }
  return g;
}

ConeSolutions cone_from_two_oriented_points(const OrientedPoint& op1,
                                            const OrientedPoint& op2) {
  if (!op1.n || !op2.n)
    throw MinfitError(ErrorCode::MissingNormal, "both points must carry normals");
  const Vec3 raw[2] = {op1.p, op2.p};
  const UnitScale scale = UnitScale::of(raw);
  if ((scale.to_unit(op1.p) - scale.to_unit(op2.p)).norm() <= 1e-12)
    throw MinfitError(ErrorCode::CoincidentPoints, "the two oriented points coincide");

  OrientedPoint sp1(scale.to_unit(op1.p));
  sp1.n = op1.n;
  const RigidMotion M = canonical_frame_oriented(sp1);
  const Vec3 p2 = M.apply(scale.to_unit(op2.p));
  const Vec3 n2 = M.apply_dir(op2.n->vec());
  const double a2 = n2.x(), b2 = n2.y(), c2 = n2.z();
  const RigidMotion back = M.inverse();

  if (a2 * a2 + b2 * b2 <= 1e-18) {
    // Normals parallel: a cone exists only if p2 sits on the normal plane of
    // p1, and then the generatrix through both points leaves the apex free.
    if (std::abs(p2.z()) > kPlaneTol)
      return ConeSolutions::empty(Reason::ParallelNormals,
                                  "parallel normals, p2 off the normal plane");
    return ConeSolutions::infinite(Reason::ParallelNormals,
                                   "parallel normals along a common generatrix");
  }

  std::vector<Cone> cones;
  const Cone2NGeometry geom = cone_two_normal_geometry(p2, n2);
  if (geom.intersect_q) {
    // The normal lines meet at q: both cones share the apex at the meeting
    // point of the in-plane perpendiculars, axes along the angle bisectors.
    const Vec3 q = *geom.intersect_q;
    if (std::abs(q.norm() - (q - p2).norm()) <= kPlaneTol * (1.0 + q.norm()))
      return ConeSolutions::infinite(Reason::EquidistantIntersection,
                                     "normal lines meet equidistant from both points");
    const Vec3 d1 = Vec3(a2, b2, 0).normalized();
    const Vec3 d2 = (Vec3(0, 0, 1) - c2 * n2).normalized();
    Eigen::Matrix<double, 3, 2> A;
    A.col(0) = d1;
    A.col(1) = -d2;
    const Eigen::Vector2d st = A.colPivHouseholderQr().solve(p2);
    const Vec3 omega = st(0) * d1;
    for (int sgn : {+1, -1}) {
      const Vec3 bis = d1 + double(sgn) * d2;
      if (bis.norm() <= 1e-12) continue;
      const double ang = std::acos(std::clamp(std::abs(bis.normalized().dot(d1)), 0.0, 1.0));
      if (!(ang > 1e-9) || !(ang < M_PI / 2.0 - 1e-12)) continue;
      if (omega.norm() <= kApexGuard || (omega - p2).norm() <= kApexGuard) continue;
      cones.emplace_back(omega, bis, ang);
    }
  } else {
    for (int sgn : {-1, +1}) {
      const double denom = c2 + double(sgn);  // n2 is unit, rho = 1
      if (std::abs(denom) <= 1e-14) continue;
      const double lam1 = p2.dot(n2) / denom;
      const double lam2 = -p2.z() / denom;
      const Vec3 q1(0, 0, lam1);
      const Vec3 q2 = p2 + lam2 * n2;
      const Vec3 axis = q2 - q1;
      const double d2 = p2.z() + lam2 * c2 - lam1;
      if (axis.norm() <= 1e-12 || std::abs(d2) <= 1e-14) continue;
      const Vec3 apex(-lam1 * (p2.x() + lam2 * a2) / d2, -lam1 * (p2.y() + lam2 * b2) / d2,
                      0.0);
      if (apex.norm() <= kApexGuard || (apex - p2).norm() <= kApexGuard) continue;
      const double ang =
          std::acos(std::clamp(std::abs((-apex).normalized().dot(axis.normalized())), 0.0, 1.0));
      if (!(ang > 1e-9) || !(ang < M_PI / 2.0 - 1e-12)) continue;
      cones.emplace_back(apex, axis, ang);
    }
  }

  if (cones.empty()) return ConeSolutions::empty(Reason::NoRealRoot, "no admissible branch");
  for (auto& c : cones) c = scale.from_unit(transform(back, c));
  Diagnosis diag;
  return ConeSolutions::finite(std::move(cones), std::move(diag));
}

std::pair<BiPoly, BiPoly> cone_apex_quadrics(const Vec3& p2, const Vec3& p3, const Vec3& p4) {
  const double x2 = p2.x(), y2 = p2.y(), z2 = p2.z();
  auto quadric = [&](const Vec3& pi) {
    const double xi = pi.x(), yi = pi.y(), zi = pi.z();
    BiPoly q;
    q.add_term(2, 0, y2 * y2 * zi - yi * yi * z2 + z2 * z2 * zi - z2 * zi * zi);
    q.add_term(1, 1, -(2.0 * x2 * y2 * zi - 2.0 * xi * yi * z2));
    q.add_term(1, 0, -(2.0 * x2 * z2 * zi - 2.0 * xi * z2 * zi));
    q.add_term(0, 2, x2 * x2 * zi - xi * xi * z2 + z2 * z2 * zi - z2 * zi * zi);
    q.add_term(0, 1, -(2.0 * y2 * z2 * zi - 2.0 * yi * z2 * zi));
    q.add_term(0, 0, -z2 * z2 * zi + z2 * zi * zi);
    return q;
  };
  return {quadric(p3), quadric(p4)};
}

ConeSolutions cone_from_oriented_and_three_points(const OrientedPoint& op1, const Vec3& p2,
                                                  const Vec3& p3, const Vec3& p4) {
  if (!op1.n) throw MinfitError(ErrorCode::MissingNormal, "first point must carry a normal");
  const Vec3 raw[4] = {op1.p, p2, p3, p4};
  const UnitScale scale = UnitScale::of(raw);
  Vec3 u[4];
  for (int i = 0; i < 4; ++i) u[i] = scale.to_unit(raw[i]);
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j)
      if ((u[i] - u[j]).norm() <= 1e-12)
        throw MinfitError(ErrorCode::CoincidentPoints, "coincident input points");

  OrientedPoint sp1(u[0]);
  sp1.n = op1.n;
  const RigidMotion M = canonical_frame_oriented(sp1);
  Vec3 q[3] = {M.apply(u[1]), M.apply(u[2]), M.apply(u[3])};
  // Reference point: the one farthest from the normal plane.
  std::sort(q, q + 3, [](const Vec3& a, const Vec3& b) {
    return std::abs(a.z()) > std::abs(b.z());
  });
  if (std::abs(q[0].z()) <= kPlaneTol) {
    // All three points in the normal plane: a cone meets its tangent plane at
    // p1 only along the generatrix through p1.
    const bool aligned = q[0].cross(q[1]).norm() <= 1e-10 && q[0].cross(q[2]).norm() <= 1e-10;
    if (aligned)
      return ConeSolutions::infinite(Reason::NormalPlaneCoplanar,
                                     "points aligned with p1 in its normal plane");
    return ConeSolutions::empty(Reason::NormalPlaneCoplanar,
                                "points in the normal plane of p1, not aligned");
  }

  const auto [Q3, Q4] = cone_apex_quadrics(q[0], q[1], q[2]);
  const double x2 = q[0].x(), y2 = q[0].y(), z2 = q[0].z();
  std::vector<Cone> cones;
  for (auto [a, b] : solve_both_orders(Q3, Q4)) {
    const double ab = a * a + b * b;
    if (ab <= 1e-12) continue;
    const double num =
        (ab - 1.0) * z2 * z2 - 2.0 * (a * x2 + b * y2) * z2 + std::pow(b * x2 - a * y2, 2);
    const double r = -num / (2.0 * ab * z2);
    if (!(std::abs(r) > kApexGuard) || !std::isfinite(r)) continue;
    const Vec3 apex(a * r, b * r, 0.0);
    const double ang = std::acos(std::sqrt(ab / (ab + 1.0)));
    if (!(ang > 1e-9) || !(ang < M_PI / 2.0 - 1e-12)) continue;
    Cone cand(apex, Vec3(a, b, 1.0), ang);
    if (!residuals_ok(cand, std::span<const Vec3>(q, 3))) continue;
    if (apex.norm() <= kApexGuard) continue;
    cones.push_back(cand);
  }

  Diagnosis diag;
  dedup_and_sort(cones, diag, std::span<const Vec3>(q, 3));
  if (cones.empty()) return ConeSolutions::empty(Reason::NoRealRoot, "no real apex direction");
  const RigidMotion back = M.inverse();
  for (auto& c : cones) c = scale.from_unit(transform(back, c));
  return ConeSolutions::finite(std::move(cones), std::move(diag));
}

Cone6PSystem cone_six_point_system(std::span<const Vec3, 6> p) {
  const double x2 = p[1].x();
  const double x3 = p[2].x(), y3 = p[2].y();
  const double x4 = p[3].x(), y4 = p[3].y(), z4 = p[3].z();
  if (std::abs(x2) <= 1e-14 || std::abs(y3) <= 1e-14 || std::abs(z4) <= 1e-14)
    throw MinfitError(ErrorCode::UsageError, "frame pattern violated");

  Cone6PSystem sys;
  const TriPoly l = TriPoly::monomial(1, 0, 0, 1.0);
  const TriPoly m = TriPoly::monomial(0, 1, 0, 1.0);
  const TriPoly n = TriPoly::monomial(0, 0, 1, 1.0);

  sys.A = (TriPoly::constant(1.0) - l * l) * (x2 / 2.0);
  {
    TriPoly t = l * l * (x3 * x2 - x3 * x3) - l * m * (2.0 * x3 * y3) - m * m * (y3 * y3);
    t.add_term(0, 0, 0, -x3 * x2 + x3 * x3 + y3 * y3);
    sys.B = t * (1.0 / (2.0 * y3));
  }
  {
    TriPoly t = l * l * (-x2 * x3 * y4 + x2 * x4 * y3 + x3 * x3 * y4 - x4 * x4 * y3) +
                l * m * (2.0 * x3 * y3 * y4 - 2.0 * x4 * y4 * y3) +
                l * n * (-2.0 * x4 * z4 * y3) + m * m * (y3 * y3 * y4 - y4 * y4 * y3) +
                m * n * (-2.0 * y4 * z4 * y3) + n * n * (-z4 * z4 * y3);
    t.add_term(0, 0, 0, x2 * x3 * y4 - x2 * x4 * y3 - x3 * x3 * y4 + x4 * x4 * y3 -
                            y3 * y3 * y4 + y4 * y4 * y3 + z4 * z4 * y3);
    sys.Cpoly = t * (1.0 / (2.0 * y3 * z4));
  }

  const TriPoly s = l * l + m * m + n * n;
  const TriPoly W = sys.A * sys.A + sys.B * sys.B + sys.Cpoly * sys.Cpoly;
  const TriPoly N = sys.A * l + sys.B * m + sys.Cpoly * n;
  sys.H0 = (N * N - W * (s - TriPoly::constant(1.0))) * (4.0 * y3 * y3 * z4 * z4);

  auto Hi = [&](const Vec3& pi) {
    const double x = pi.x(), y = pi.y(), z = pi.z();
    TriPoly pure = l * m * (-2.0 * x * y) + l * n * (-2.0 * x * z) + m * n * (-2.0 * y * z) +
                   l * l * (-x * x) + m * m * (-y * y) + n * n * (-z * z);
    pure.add_term(0, 0, 0, x * x + y * y + z * z);
    return pure - (sys.A * x + sys.B * y + sys.Cpoly * z) * 2.0;
  };
  sys.H5 = Hi(p[4]);
  sys.H6 = Hi(p[5]);

  // Blow-down: l = u n, m = v n, w = n^2. Even total degree 2k contributes
  // u^i v^j to the w^k component.
  for (const auto& [key, c] : sys.H0.terms()) {
    const int d = key[0] + key[1] + key[2];
    if (d == 6) sys.P.add_term(key[0], key[1], c);
    else if (d == 4) sys.Q.add_term(key[0], key[1], c);
    else if (d == 2) sys.R.add_term(key[0], key[1], c);
    else sys.S += c;
  }
  auto blow2 = [](const TriPoly& h, BiPoly& quad, double& cst) {
    quad = BiPoly();
    cst = 0.0;
    for (const auto& [key, c] : h.terms()) {
      if (key[0] + key[1] + key[2] == 2) quad.add_term(key[0], key[1], c);
      else cst += c;
    }
  };
  blow2(sys.H5, sys.H, sys.C);
  blow2(sys.H6, sys.K, sys.D);

  const BiPoly H2 = sys.H * sys.H;
  sys.E0 = sys.P * (sys.C * sys.C * sys.C) - sys.Q * sys.H * (sys.C * sys.C) +
           sys.R * H2 * sys.C - H2 * sys.H * sys.S;
  sys.E1 = sys.H * sys.D - sys.K * sys.C;
  return sys;
}

ConeSolutions cone_from_six_points(std::span<const Vec3> pts) {
  if (pts.size() != 6)
    throw MinfitError(ErrorCode::UsageError, "cone_from_six_points needs 6 points");
  const UnitScale scale = UnitScale::of(pts);
  std::vector<Vec3> u(6);
  for (int i = 0; i < 6; ++i) u[i] = scale.to_unit(pts[i]);
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j)
      if ((u[i] - u[j]).norm() <= 1e-12)
        throw MinfitError(ErrorCode::CoincidentPoints, "coincident input points");

  // All six coplanar: cones exist iff a conic interpolates, and then a whole
  // family does.
  {
    const PlaneFit plane = fit_plane(u);
    if (plane.max_residual <= kPlaneTol) {
      const RigidMotion Mp = plane_frame(plane);
      std::vector<Vec2> q(6);
      bool collinear = true;
      for (int i = 0; i < 6; ++i) {
        const Vec3 w = Mp.apply(u[i]);
        q[i] = Vec2(w.x(), w.y());
      }
      for (int i = 2; i < 6 && collinear; ++i) {
        const Vec2 a = q[1] - q[0], b = q[i] - q[0];
        if (std::abs(a.x() * b.y() - a.y() * b.x()) > 1e-10) collinear = false;
      }
      if (collinear)
        return ConeSolutions::infinite(Reason::CollinearPoints, "all six points collinear");
      if (conic_interpolation_gap(q) <= 1e-9)
        return ConeSolutions::infinite(Reason::CoplanarConic,
                                       "six coplanar points on a common conic");
      return ConeSolutions::empty(Reason::CoplanarConic,
                                  "six coplanar points not on a conic");
    }
  }
  // Exactly five coplanar: handled through the interpolating conic.
  for (int excl = 5; excl >= 0; --excl) {
    std::vector<Vec3> five;
    for (int i = 0; i < 6; ++i)
      if (i != excl) five.push_back(pts[i]);
    std::vector<Vec3> five_u;
    for (int i = 0; i < 6; ++i)
      if (i != excl) five_u.push_back(u[i]);
    const PlaneFit plane = fit_plane(five_u);
    if (plane.max_residual <= kPlaneTol &&
        std::abs((u[excl] - plane.centroid).dot(plane.normal)) > 1e-7)
      return cones_from_coplanar_five(five, pts[excl]);
  }

  // Frame: greedy picks keeping x2, y3, z4 well away from zero.
  int i2 = 1, i3 = -1, i4 = -1;
  {
    double best = -1.0;
    for (int i = 1; i < 6; ++i)
      if ((u[i] - u[0]).norm() > best) {
        best = (u[i] - u[0]).norm();
        i2 = i;
      }
    const Vec3 e = (u[i2] - u[0]).normalized();
    best = -1.0;
    for (int i = 1; i < 6; ++i) {
      if (i == i2) continue;
      const double area = e.cross(u[i] - u[0]).norm();
      if (area > best) {
        best = area;
        i3 = i;
      }
    }
    if (best <= 1e-10)
      return ConeSolutions::infinite(Reason::CollinearPoints, "all six points collinear");
    const Vec3 nrm = e.cross(u[i3] - u[0]).normalized();
    best = -1.0;
    for (int i = 1; i < 6; ++i) {
      if (i == i2 || i == i3) continue;
      const double h = std::abs(nrm.dot(u[i] - u[0]));
      if (h > best) {
        best = h;
        i4 = i;
      }
    }
  }
  std::vector<int> order = {0, i2, i3, i4};
  for (int i = 1; i < 6; ++i)
    if (i != i2 && i != i3 && i != i4) order.push_back(i);
  std::vector<Vec3> w(6);
  for (int i = 0; i < 6; ++i) w[i] = u[order[i]];
  const RigidMotion M = canonical_frame_points(std::span<const Vec3>(w.data(), 3));
  for (auto& p : w) p = M.apply(p);

  const Cone6PSystem sys = cone_six_point_system(std::span<const Vec3, 6>(w.data(), 6));

  std::vector<Vec3> dirs;
  for (auto [uu, vv] : solve_both_orders(sys.E0, sys.E1)) {
    const double Hv = sys.H.eval(uu, vv);
    const double Kv = sys.K.eval(uu, vv);
    double wv;
    if (std::abs(Hv) >= std::abs(Kv)) {
      if (std::abs(Hv) <= 1e-14) continue;
      wv = -sys.C / Hv;
    } else {
      wv = -sys.D / Kv;
    }
    if (!(wv > 1e-12)) continue;
    const double nn = std::sqrt(wv);
    dirs.push_back(Vec3(uu * nn, vv * nn, nn));
  }
  // n = 0 branch: H5(l,m,0) = H6(l,m,0) = 0 via l = t m, linear in m^2.
  {
    const double e5ll = sys.H5.coeff(2, 0, 0), e5lm = sys.H5.coeff(1, 1, 0),
                 e5mm = sys.H5.coeff(0, 2, 0);
    const double e6ll = sys.H6.coeff(2, 0, 0), e6lm = sys.H6.coeff(1, 1, 0),
                 e6mm = sys.H6.coeff(0, 2, 0);
    const UniPoly h5({e5mm, e5lm, e5ll});
    const UniPoly h6({e6mm, e6lm, e6ll});
    const UniPoly res = h5 * sys.D - h6 * sys.C;
    for (double t : real_roots(res)) {
      const double d5 = h5.eval(t), d6 = h6.eval(t);
      double mm;
      if (std::abs(d5) >= std::abs(d6)) {
        if (std::abs(d5) <= 1e-14) continue;
        mm = -sys.C / d5;
      } else {
        mm = -sys.D / d6;
      }
      if (!(mm > 1e-12)) continue;
      const double mv = std::sqrt(mm);
      dirs.push_back(Vec3(t * mv, mv, 0.0));
    }
    // Direction along the x-axis escapes the l = t m chart.
    if (std::abs(e5ll) > 1e-14 && std::abs(e6ll) > 1e-14) {
      const double r5 = -sys.C / e5ll, r6 = -sys.D / e6ll;
      if (r5 > 1e-12 && std::abs(r5 - r6) <= 1e-7 * (1.0 + std::abs(r5)))
        dirs.push_back(Vec3(std::sqrt(r5), 0.0, 0.0));
    }
  }

  std::vector<Cone> cones;
  for (const Vec3& t : dirs) {
    const double s = t.squaredNorm();
    if (!(s > 1.0 + 1e-10)) continue;  // degenerate to a line
    const double h0tol = 1e-7 * (1.0 + sys.H0.one_norm()) * std::pow(1.0 + t.norm(), 6);
    if (std::abs(sys.H0.eval(t.x(), t.y(), t.z())) > h0tol) continue;
    Mat3 Amat = Mat3::Identity() - t * t.transpose();
    const Vec3 rhs(sys.A.eval(t.x(), t.y(), t.z()), sys.B.eval(t.x(), t.y(), t.z()),
                   sys.Cpoly.eval(t.x(), t.y(), t.z()));
    const Vec3 apex = Amat.partialPivLu().solve(rhs);
    const double ang = std::acos(std::clamp(1.0 / std::sqrt(s), 0.0, 1.0));
    if (!(ang > 1e-9) || !(ang < M_PI / 2.0 - 1e-12)) continue;
    Cone cand(apex, t, ang);
    if (!residuals_ok(cand, std::span<const Vec3>(w.data(), 6))) continue;
    cones.push_back(cand);
  }

  Diagnosis diag;
  dedup_and_sort(cones, diag, std::span<const Vec3>(w.data(), 6));
  if (cones.empty()) return ConeSolutions::empty(Reason::NoRealRoot, "no real axis direction");
  const RigidMotion back = M.inverse();
  for (auto& c : cones) c = scale.from_unit(transform(back, c));
  return ConeSolutions::finite(std::move(cones), std::move(diag));
}

ConeSolutions cones_from_coplanar_five(std::span<const Vec3> coplanar5, const Vec3& p6) {
  if (coplanar5.size() != 5)
    throw MinfitError(ErrorCode::UsageError, "cones_from_coplanar_five needs 5 + 1 points");
  std::vector<Vec3> all(coplanar5.begin(), coplanar5.end());
  all.push_back(p6);
  const UnitScale scale = UnitScale::of(all);
  std::vector<Vec3> u(6);
  for (int i = 0; i < 6; ++i) u[i] = scale.to_unit(all[i]);
  for (int i = 0; i < 6; ++i)
    for (int j = i + 1; j < 6; ++j)
      if ((u[i] - u[j]).norm() <= 1e-12)
        throw MinfitError(ErrorCode::CoincidentPoints, "coincident input points");

  const PlaneFit plane = fit_plane(std::span<const Vec3>(u.data(), 5));
  if (plane.max_residual > 1e-7)
    throw MinfitError(ErrorCode::CoplanarInput, "first five points are not coplanar");
  if (std::abs((u[5] - plane.centroid).dot(plane.normal)) <= 1e-7)
    throw MinfitError(ErrorCode::CoplanarInput, "sixth point lies in the plane");

  const RigidMotion Mp = plane_frame(plane);
  std::vector<Vec2> q(5);
  bool collinear = true;
  for (int i = 0; i < 5; ++i) {
    const Vec3 w = Mp.apply(u[i]);
    q[i] = Vec2(w.x(), w.y());
  }
  for (int i = 2; i < 5 && collinear; ++i) {
    const Vec2 a = q[1] - q[0], b = q[i] - q[0];
    if (std::abs(a.x() * b.y() - a.y() * b.x()) > 1e-10) collinear = false;
  }
  if (collinear)
    return ConeSolutions::infinite(Reason::CollinearPoints,
                                   "five aligned points span a generatrix");

  const auto conic = fit_conic(q);
  if (!conic)
    return ConeSolutions::empty(Reason::CoplanarConic, "points do not determine a conic");
  CanonicalConic cc = canonicalize_conic(*conic);
  if (cc.type == ConicType::Degenerate)
    return ConeSolutions::empty(Reason::CoplanarConic, "interpolating conic is degenerate");

  // Motion: conic-canonical coordinates -> unit-scaled data coordinates.
  RigidMotion to_unit = Mp.inverse().compose(cc.to_data);
  if ((cc.type == ConicType::Ellipse || cc.type == ConicType::Circle) &&
      cc.alpha < cc.beta) {
    // Conjugate by a quarter turn so the x^2 coefficient dominates.
    RigidMotion rot;
    rot.R << 0, -1, 0, 1, 0, 0, 0, 0, 1;
    to_unit = to_unit.compose(rot);
    std::swap(cc.alpha, cc.beta);
  }
  const RigidMotion to_canon = to_unit.inverse();
  std::vector<Vec3> w(6);
  for (int i = 0; i < 6; ++i) w[i] = to_canon.apply(u[i]);
  const double x0 = w[5].x(), y0 = w[5].y(), z0 = w[5].z();

  std::vector<Cone> cones;
  auto try_cone = [&](const Vec3& apex, const Vec3& axis, double s) {
    if (!(s > 1.0 + 1e-10)) return;
    const double ang = std::acos(std::clamp(1.0 / std::sqrt(s), 0.0, 1.0));
    if (!(ang > 1e-9) || !(ang < M_PI / 2.0 - 1e-12)) return;
    Cone cand(apex, axis, ang);
    if (!residuals_ok(cand, w)) return;
    cones.push_back(cand);
  };

  const double al = cc.alpha, be = cc.beta;
  if (cc.type == ConicType::Ellipse || cc.type == ConicType::Circle) {
    const double m = std::sqrt(std::max(0.0, 1.0 - be / al));
    // Sixth-point constraint, independent of the apex height c.
    const UniPoly phi2({-std::pow(m, 4) * y0 * y0 + m * m * x0 * x0 + 2.0 * m * m * y0 * y0 +
                            m * m * z0 * z0 - x0 * x0 - y0 * y0 - z0 * z0,
                        -2.0 * std::pow(m, 3) * y0 * z0 + 2.0 * m * y0 * z0,
                        -m * m * z0 * z0 + z0 * z0});
    const UniPoly g = phi2 * al + UniPoly::constant(be / al);
    const UniPoly lead({-be, 0.0, al});  // alpha n^2 - beta
    const UniPoly quartic = g * g - lead * (4.0 * z0 * z0 * be / al);
    for (double n : real_roots(quartic)) {
      const double denom = 2.0 * z0 * (al * n * n - be);
      if (std::abs(denom) <= 1e-12) continue;
      const double c = g.eval(n) / denom;
      if (std::abs((al * n * n - be) * c * c - be / al) > 1e-7 * (1.0 + c * c)) continue;
      const double b = (al / be) * c * m * n;
      try_cone(Vec3(0.0, b, c), Vec3(0.0, m, n), m * m + n * n);
    }
  } else if (cc.type == ConicType::Hyperbola) {
    const double L = std::sqrt(1.0 + al / be);
    const double gam = -(be / al) * L;
    // Unknowns (n, c) as the bivariate pair (u, v).
    BiPoly G1;
    G1.add_term(0, 2, L * L - 1.0);
    G1.add_term(2, 2, 1.0);
    G1.add_term(0, 0, -al / (be * be));
    const BiPoly U = BiPoly::monomial(1, 0, 1.0), V = BiPoly::monomial(0, 1, 1.0);
    const BiPoly X = BiPoly::constant(x0) - U * V * gam;
    const BiPoly Zc = BiPoly::constant(z0) - V;
    const BiPoly proj = X * L + U * Zc;
    const BiPoly G2 = X * X + BiPoly::constant(y0 * y0) + Zc * Zc - proj * proj;
    for (auto [n, c] : solve_both_orders(G1, G2))
      try_cone(Vec3(gam * n * c, 0.0, c), Vec3(L, 0.0, n), L * L + n * n);
  } else if (cc.type == ConicType::Parabola) {
    const UniPoly cubic({al * z0, -2.0 * y0 * al + 2.0 * x0 * x0 + 2.0 * z0 * z0,
                         -al * z0 - 4.0 * y0 * z0, -2.0 * z0 * z0});
    for (double n : real_roots(cubic)) {
      if (std::abs(n) <= 1e-9) continue;
      const double c = -al / (2.0 * n);
      const double b = -c * c * (1.0 - n * n) / al;
      try_cone(Vec3(0.0, b, c), Vec3(0.0, 1.0, n), 1.0 + n * n);
    }
  }

  Diagnosis diag;
  dedup_and_sort(cones, diag, std::span<const Vec3>(w.data(), 6));
  if (cones.empty())
    return ConeSolutions::empty(Reason::NoRealRoot, "no cone over the interpolating conic");
  for (auto& c : cones) c = scale.from_unit(transform(to_unit, c));
  return ConeSolutions::finite(std::move(cones), std::move(diag));
}

}  // namespace minfit
