/**
 * @file cylinder.hpp
 * @brief Cylinder interpolation from minimal point sets: one oriented point
 *        plus two points, or five points, with degenerate-case classification.
 */
#ifndef MINFIT_CYLINDER_HPP
#define MINFIT_CYLINDER_HPP

#include <span>

#include "minfit/geom.hpp"
#include "minfit/poly.hpp"

namespace minfit {

/// Coefficients of the homogeneous direction quadratic a l^2 + b lm + c m^2
/// for the oriented-point case, with its discriminant.
struct Cyl1N2PCoeffs {
  double a, b, c;
  double delta;  // b^2 - 4ac
};

/// Direction quadratic for canonical inputs (p1 at origin, normal +z).
Cyl1N2PCoeffs cylinder_direction_quadratic(const Vec3& p2, const Vec3& p3);

/// All cylinders through one oriented point and two further points.
CylinderSolutions cylinder_from_oriented_and_two_points(const OrientedPoint& op1,
                                                        const Vec3& p2, const Vec3& p3);

struct Circle3D {
  Vec3 center;
  double radius;
  Vec3 plane_normal;  // unit
};

/// Circle through three non-collinear points in their common plane.
/// Throws FlatCircle for collinear input.
Circle3D circumcircle(const Vec3& q1, const Vec3& q2, const Vec3& q3);

/// Degree-3 homogeneous condition in the axis direction (l,m,n) for four
/// canonical points to project onto a common circle. Vanishes at the six
/// chord directions of the quadruple.
TriPoly cylinder_cocyclicity_cubic(std::span<const Vec3, 4> canonical_pts);

/// The reduced polynomial system for five canonical points: the cubic C for
/// the pivot quadruple and the quadratic Delta = z5 D4 - z4 D5 stripping the
/// three extraneous chord directions.
struct Cyl5PSystem {
  TriPoly C4, C5;      // cubics for quadruples (p1..p4) and (p1,p2,p3,p5)
  TriPoly D4, D5;      // degree-2 pseudo-division quotients
  TriPoly delta;       // z5*D4 - z4*D5
  int pivot;           // 4 or 5: which cubic pairs with delta
  TriPoly F, G;        // ideal generators of the extraneous directions
};
Cyl5PSystem cylinder_five_point_system(std::span<const Vec3, 5> canonical_pts);

/// All cylinders through five points (eigenvalue route, coplanar dispatch).
CylinderSolutions cylinder_from_five_points(std::span<const Vec3> pts);

/// Cylinders through five coplanar points via the interpolating conic.
CylinderSolutions cylinder_from_coplanar_five(std::span<const Vec3> pts);

}  // namespace minfit

#endif  // MINFIT_CYLINDER_HPP
