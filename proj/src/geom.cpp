#include "minfit/geom.hpp"

#include <algorithm>
#include <cmath>

namespace minfit {

std::string to_string(Reason r) {
  switch (r) {
    case Reason::Generic: return "Generic";
    case Reason::CoincidentPoints: return "CoincidentPoints";
    case Reason::NormalPlaneCoplanar: return "NormalPlaneCoplanar";
    case Reason::MirrorSymmetric: return "MirrorSymmetric";
    case Reason::ParallelNormals: return "ParallelNormals";
    case Reason::EquidistantIntersection: return "EquidistantIntersection";
    case Reason::CoplanarConic: return "CoplanarConic";
    case Reason::CollinearPoints: return "CollinearPoints";
    case Reason::OppositeSides: return "OppositeSides";
    case Reason::ParticularConfiguration: return "ParticularConfiguration";
    case Reason::NoRealRoot: return "NoRealRoot";
  }
  return "Unknown";
}

std::string to_string(SolutionKind k) {
  switch (k) {
    case SolutionKind::Finite: return "Finite";
    case SolutionKind::Empty: return "Empty";
    case SolutionKind::InfiniteFamily: return "InfiniteFamily";
  }
  return "Unknown";
}

Vec3 normalize_axis_sign(const Vec3& d) {
  for (int i = 0; i < 3; ++i) {
    if (std::abs(d[i]) > 1e-12) return d[i] > 0 ? d : Vec3(-d);
  }
  return d;
}

RigidMotion canonical_frame_oriented(const OrientedPoint& op) {
  if (!op.n) throw MinfitError(ErrorCode::MissingNormal, "oriented point has no normal");
  const Vec3 n = op.n->vec();
  // Fixed fallback auxiliary axis when n is close to +-z.
  Vec3 aux = std::abs(n.z()) > 0.9 ? Vec3(1, 0, 0) : Vec3(0, 0, 1);
  Vec3 ex = (aux - aux.dot(n) * n).normalized();
  Vec3 ey = n.cross(ex);
  RigidMotion m;
  m.R.row(0) = ex;
  m.R.row(1) = ey;
  m.R.row(2) = n;
  m.t = -(m.R * op.p);
  return m;
}

RigidMotion canonical_frame_points(std::span<const Vec3> pts, bool* collinear) {
  if (pts.size() < 3)
    throw MinfitError(ErrorCode::ZeroInput, "canonical_frame_points needs at least 3 points");
  if (collinear) *collinear = false;
  const Vec3 u = pts[1] - pts[0];
  const double un = u.norm();
  double scale = 0.0;
  for (const auto& p : pts) scale = std::max(scale, (p - pts[0]).norm());
  if (un <= 1e-14 * std::max(1.0, scale))
    throw MinfitError(ErrorCode::CoincidentPoints, "p1 and p2 coincide");
  Vec3 ex = u / un;
  Vec3 w = ex.cross(pts[2] - pts[0]);
  Vec3 ez;
  if (w.norm() <= 1e-12 * std::max(1.0, scale)) {
    if (collinear) *collinear = true;
    Vec3 aux = std::abs(ex.z()) > 0.9 ? Vec3(1, 0, 0) : Vec3(0, 0, 1);
    ez = ex.cross(aux).normalized();
  } else {
    ez = w.normalized();
  }
  Vec3 ey = ez.cross(ex);
  RigidMotion m;
  m.R.row(0) = ex;
  m.R.row(1) = ey;
  m.R.row(2) = ez;
  m.t = -(m.R * pts[0]);
  return m;
}

double cylinder_residual(const Cylinder& c, const Vec3& p) {
  const Vec3 v = p - c.axis_point;
  const Vec3 radial = v - v.dot(c.axis_dir) * c.axis_dir;
  return std::abs(radial.norm() - c.radius);
}

double cone_residual(const Cone& c, const Vec3& p) {
  const Vec3 v = p - c.apex;
  const double vn = v.norm();
  if (vn <= 1e-300)
    throw MinfitError(ErrorCode::ApexQuery, "cone_residual queried at the apex");
  const double ca = std::clamp(std::abs(v.dot(c.axis_dir)) / vn, 0.0, 1.0);
  return std::abs(std::acos(ca) - c.half_angle);
}

namespace {
double folded_angle(const Vec3& a, const Vec3& b) {
  // atan2 of (cross, |dot|) stays fully accurate for nearly aligned vectors,
  // where acos of the dot product loses half the significant digits.
  const Vec3 u = a.normalized(), v = b.normalized();
  return std::atan2(u.cross(v).norm(), std::abs(u.dot(v)));
}
}  // namespace

double normal_deviation(const Cylinder& c, const OrientedPoint& op, double pos_tol) {
  if (!op.n) throw MinfitError(ErrorCode::MissingNormal, "normal_deviation needs a normal");
  if (cylinder_residual(c, op.p) > pos_tol)
    throw MinfitError(ErrorCode::OffSurface, "point not on cylinder surface");
  const Vec3 v = op.p - c.axis_point;
  const Vec3 radial = v - v.dot(c.axis_dir) * c.axis_dir;
  return folded_angle(op.n->vec(), radial);
}

double normal_deviation(const Cone& c, const OrientedPoint& op, double pos_tol) {
  if (!op.n) throw MinfitError(ErrorCode::MissingNormal, "normal_deviation needs a normal");
  if (cone_residual(c, op.p) > pos_tol)
    throw MinfitError(ErrorCode::OffSurface, "point not on cone surface");
  const Vec3 v = op.p - c.apex;
  const Vec3 g = v.normalized();
  // Pick the nappe containing p, then the in-plane direction orthogonal to the
  // generatrix; the surface normal lies along it.
  const Vec3 d = v.dot(c.axis_dir) >= 0 ? c.axis_dir : Vec3(-c.axis_dir);
  const Vec3 t = d - d.dot(g) * g;
  if (t.norm() <= 1e-300)
    throw MinfitError(ErrorCode::OffSurface, "point on cone axis");
  return folded_angle(op.n->vec(), t);
}

Cylinder transform(const RigidMotion& m, const Cylinder& c) {
  return Cylinder(m.apply(c.axis_point), m.apply_dir(c.axis_dir), c.radius);
}

Cone transform(const RigidMotion& m, const Cone& c) {
  return Cone(m.apply(c.apex), m.apply_dir(c.axis_dir), c.half_angle);
}

double parameter_distance(const Cylinder& a, const Cylinder& b) {
  const double dir = folded_angle(a.axis_dir, b.axis_dir);
  auto line_dist = [](const Cylinder& c, const Vec3& p) {
    const Vec3 v = p - c.axis_point;
    return (v - v.dot(c.axis_dir) * c.axis_dir).norm();
  };
  const double pt = 0.5 * (line_dist(a, b.axis_point) + line_dist(b, a.axis_point));
  return dir + pt + std::abs(a.radius - b.radius);
}

double parameter_distance(const Cone& a, const Cone& b) {
  const double dir = folded_angle(a.axis_dir, b.axis_dir);
  return dir + (a.apex - b.apex).norm() + std::abs(a.half_angle - b.half_angle);
}

UnitScale UnitScale::of(std::span<const Vec3> pts) {
  UnitScale s;
  if (pts.empty()) return s;
  Vec3 lo = pts[0], hi = pts[0];
  for (const auto& p : pts) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  s.center = 0.5 * (lo + hi);
  s.diag = (hi - lo).norm();
  if (!(s.diag > 1e-300)) s.diag = 1.0;  // all points coincide
  return s;
}

}  // namespace minfit
