/**
 * @file cone.hpp
 * @brief Cone interpolation from minimal point sets: two oriented points, one
 *        oriented point plus three points, or six points, plus the coplanar
 *        special configurations.
 */
#ifndef MINFIT_CONE_HPP
#define MINFIT_CONE_HPP

#include <span>

#include "minfit/geom.hpp"
#include "minfit/poly.hpp"

namespace minfit {

struct Line3 {
  Vec3 point;
  Vec3 dir;  // unit
};

/// Incidence data of the two-oriented-point configuration in canonical
/// coordinates (p1 at origin, n1 = +z): the two normal lines, the apex locus
/// (intersection line of the two normal planes) and, when the normal lines
/// meet, their intersection point.
struct Cone2NGeometry {
  Line3 L1, L2;
  std::optional<Line3> apex_locus;     // undefined for parallel normals
  std::optional<Vec3> intersect_q;     // L1 cap L2
};

Cone2NGeometry cone_two_normal_geometry(const Vec3& p2, const Vec3& n2);

/// All cones through two oriented points.
ConeSolutions cone_from_two_oriented_points(const OrientedPoint& op1,
                                            const OrientedPoint& op2);

/// The r-free quadric pair in the apex parameters (a, b) for canonical inputs
/// (p1 at origin, normal +z, reference point p2 off the z = 0 plane):
/// z_i F(p2) - z2 F(p_i) for i = 3, 4.
std::pair<BiPoly, BiPoly> cone_apex_quadrics(const Vec3& p2, const Vec3& p3, const Vec3& p4);

/// All cones through one oriented point and three further points.
ConeSolutions cone_from_oriented_and_three_points(const OrientedPoint& op1, const Vec3& p2,
                                                  const Vec3& p3, const Vec3& p4);

/// The reduced system for six canonical points: the degree-6 even form H0 in
/// the scaled axis (l,m,n), the degree-2 even forms H5, H6, and their
/// blow-down to (u,v) = (l/n, m/n), w = n^2.
struct Cone6PSystem {
  TriPoly A, B, Cpoly;   // apex minus k*(l,m,n), componentwise
  TriPoly H0, H5, H6;    // even forms; H0 carries the 4 y3^2 z4^2 clearing factor
  BiPoly P, Q, R;        // w^3, w^2, w^1 components of H0 under the blow-down
  double S = 0.0;        // w^0 component of H0
  BiPoly H, K;           // w components of H5, H6
  double C = 0.0, D = 0.0;  // constant terms of H5, H6
  BiPoly E0, E1;         // the reduced bivariate system, degrees 6 and 2
};
Cone6PSystem cone_six_point_system(std::span<const Vec3, 6> canonical_pts);

/// All cones through six points (eigenvalue route, coplanar dispatch).
ConeSolutions cone_from_six_points(std::span<const Vec3> pts);

/// Cones through five coplanar points and one point off their plane, via the
/// interpolating conic.
ConeSolutions cones_from_coplanar_five(std::span<const Vec3> coplanar5, const Vec3& p6);

}  // namespace minfit

#endif  // MINFIT_CONE_HPP
