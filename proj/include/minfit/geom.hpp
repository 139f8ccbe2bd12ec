/**
 * @file geom.hpp
 * @brief Geometric vocabulary shared by all solvers: points, oriented points,
 *        rigid motions, cylinder/cone primitives and residual metrics.
 */
#ifndef MINFIT_GEOM_HPP
#define MINFIT_GEOM_HPP

#include <Eigen/Dense>

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace minfit {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Error category for precondition violations.
enum class ErrorCode {
  MissingNormal,
  CoincidentPoints,
  ApexQuery,
  OffSurface,
  DegenerateQuadratic,
  ZeroInput,
  NotAPolynomialMatrix,
  SingularPencil,
  FlatCircle,
  CoplanarInput,
  UsageError,
  ParseError,
  NumericalFailure,
};

class MinfitError : public std::runtime_error {
 public:
  MinfitError(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

/// Unit direction in 3D. Construction normalizes; zero vectors are rejected.
class Dir3 {
 public:
  explicit Dir3(const Vec3& v) {
    double n = v.norm();
    if (!(n > 1e-300) || !std::isfinite(n))
      throw MinfitError(ErrorCode::ZeroInput, "Dir3: zero or non-finite vector");
    v_ = v / n;
  }
  const Vec3& vec() const { return v_; }
  double x() const { return v_.x(); }
  double y() const { return v_.y(); }
  double z() const { return v_.z(); }

 private:
  Vec3 v_;
};

struct OrientedPoint {
  Vec3 p;
  std::optional<Dir3> n;  // orientation sign is not semantic

  OrientedPoint(const Vec3& p_) : p(p_) {}
  OrientedPoint(const Vec3& p_, const Vec3& n_) : p(p_), n(Dir3(n_)) {}
};

/// Proper rigid motion x -> R x + t.
struct RigidMotion {
  Mat3 R = Mat3::Identity();
  Vec3 t = Vec3::Zero();

  Vec3 apply(const Vec3& p) const { return R * p + t; }
  Vec3 apply_dir(const Vec3& d) const { return R * d; }

  RigidMotion inverse() const {
    RigidMotion inv;
    inv.R = R.transpose();
    inv.t = -(R.transpose() * t);
    return inv;
  }
  /// Composition: (this ∘ other)(x) = this(other(x)).
  RigidMotion compose(const RigidMotion& other) const {
    RigidMotion out;
    out.R = R * other.R;
    out.t = R * other.t + t;
    return out;
  }
};

/// Normalizes an axis direction so its first nonzero component is positive.
Vec3 normalize_axis_sign(const Vec3& d);

struct Cylinder {
  Vec3 axis_point;
  Vec3 axis_dir;  // unit, sign-normalized
  double radius;

  Cylinder(const Vec3& p, const Vec3& d, double r)
      : axis_point(p), axis_dir(normalize_axis_sign(Dir3(d).vec())), radius(r) {
    if (!(r > 0.0) || !std::isfinite(r))
      throw MinfitError(ErrorCode::ZeroInput, "Cylinder: radius must be positive and finite");
  }
};

struct Cone {
  Vec3 apex;
  Vec3 axis_dir;      // unit, sign-normalized (the two nappes are one surface)
  double half_angle;  // in (0, pi/2)

  Cone(const Vec3& a, const Vec3& d, double ha)
      : apex(a), axis_dir(normalize_axis_sign(Dir3(d).vec())), half_angle(ha) {
    if (!(ha > 0.0) || !(ha < M_PI / 2.0))
      throw MinfitError(ErrorCode::ZeroInput, "Cone: half_angle must be in (0, pi/2)");
  }
};

enum class SolutionKind { Finite, Empty, InfiniteFamily };

enum class Reason {
  Generic,
  CoincidentPoints,
  NormalPlaneCoplanar,
  MirrorSymmetric,
  ParallelNormals,
  EquidistantIntersection,
  CoplanarConic,
  CollinearPoints,
  OppositeSides,
  ParticularConfiguration,
  NoRealRoot,
};

std::string to_string(Reason r);
std::string to_string(SolutionKind k);

struct Diagnosis {
  Reason reason = Reason::Generic;
  std::string note;
};

/// Outcome of a solver: a finite list of primitives, or a classified
/// empty / infinite-family configuration.
template <class Primitive>
struct SolutionSet {
  SolutionKind kind = SolutionKind::Empty;
  std::vector<Primitive> primitives;
  Diagnosis diagnosis;

  static SolutionSet finite(std::vector<Primitive> prims, Diagnosis d = {}) {
    SolutionSet s;
    s.kind = SolutionKind::Finite;
    s.primitives = std::move(prims);
    s.diagnosis = std::move(d);
    return s;
  }
  static SolutionSet empty(Reason r, std::string note = {}) {
    SolutionSet s;
    s.kind = SolutionKind::Empty;
    s.diagnosis = {r, std::move(note)};
    return s;
  }
  static SolutionSet infinite(Reason r, std::string note = {}) {
    SolutionSet s;
    s.kind = SolutionKind::InfiniteFamily;
    s.diagnosis = {r, std::move(note)};
    return s;
  }
  std::size_t count() const { return primitives.size(); }
};

using CylinderSolutions = SolutionSet<Cylinder>;
using ConeSolutions = SolutionSet<Cone>;

/// Motion mapping op.p to the origin and op.n to (0,0,1).
RigidMotion canonical_frame_oriented(const OrientedPoint& op);

/// Motion mapping pts[0] to the origin, pts[1] onto the positive x-axis and
/// pts[2] into the upper half of the xy-plane. If pts[0..2] are collinear a
/// reduced frame is returned and *collinear is set.
RigidMotion canonical_frame_points(std::span<const Vec3> pts, bool* collinear = nullptr);

/// |dist(p, axis) - radius|
double cylinder_residual(const Cylinder& c, const Vec3& p);

/// |angle(apex->p, axis) - half_angle|, angle folded to [0, pi/2].
double cone_residual(const Cone& c, const Vec3& p);

/// Angle between op.n and the surface normal line at op.p, folded to [0, pi/2].
/// Requires op.p on the surface within pos_tol.
double normal_deviation(const Cylinder& c, const OrientedPoint& op, double pos_tol = 1e-6);
double normal_deviation(const Cone& c, const OrientedPoint& op, double pos_tol = 1e-6);

/// Transport of primitives by a rigid motion.
Cylinder transform(const RigidMotion& m, const Cylinder& c);
Cone transform(const RigidMotion& m, const Cone& c);

/// Parameter distance between primitives of the same type, at unit scale.
/// Zero iff the primitives describe the same surface.
double parameter_distance(const Cylinder& a, const Cylinder& b);
double parameter_distance(const Cone& a, const Cone& b);

/// Uniform rescaling helper: maps the input bounding box to diagonal 1 around
/// its center. Solvers canonicalize through this before fixed tolerances apply.
struct UnitScale {
  Vec3 center = Vec3::Zero();
  double diag = 1.0;

  static UnitScale of(std::span<const Vec3> pts);
  Vec3 to_unit(const Vec3& p) const { return (p - center) / diag; }
  Vec3 from_unit(const Vec3& p) const { return p * diag + center; }
  Cylinder from_unit(const Cylinder& c) const {
    return Cylinder(from_unit(c.axis_point), c.axis_dir, c.radius * diag);
  }
  Cone from_unit(const Cone& c) const {
    return Cone(from_unit(c.apex), c.axis_dir, c.half_angle);
  }
};

}  // namespace minfit

#endif  // MINFIT_GEOM_HPP
