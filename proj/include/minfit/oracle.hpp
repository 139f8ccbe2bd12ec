/**
 * @file oracle.hpp
 * @brief Brute-force verifiers: hemisphere direction scan for five-point
 *        cylinders, 2D sign-change grid for bivariate systems, and a surface
 *        membership check. Independent of the algebraic solvers.
 */
#ifndef MINFIT_ORACLE_HPP
#define MINFIT_ORACLE_HPP

#include <span>

#include "minfit/geom.hpp"
#include "minfit/poly.hpp"

namespace minfit {

struct GridSpec {
  int resolution = 256;   // samples per angular dimension, >= 64
  int refine_iters = 30;  // bisection depth per located cell
};

/// Axis-direction candidates for a cylinder through five points, found by
/// scanning a hemisphere grid for common sign changes of the two projected
/// cocyclicity determinants, refined by cell bisection. Chord directions are
/// filtered out by the circumcircle test on the projections.
std::vector<Vec3> cylinder_direction_oracle(std::span<const Vec3> pts,
                                            const GridSpec& grid = {});

/// Common sign-change roots of {f = 0, g = 0} on a square window
/// [lo, hi]^2, refined by cell subdivision. Roots outside the window are
/// missed by contract.
std::vector<std::pair<double, double>> bivariate_sign_grid(const BiPoly& f, const BiPoly& g,
                                                           double lo = -50.0, double hi = 50.0,
                                                           const GridSpec& grid = {});

struct MembershipReport {
  bool ok = false;
  double max_position_residual = 0.0;
  double max_normal_deviation = 0.0;
};

/// True iff all points lie on the surface within pos_tol and all carried
/// normals agree with the surface normal line within oriented_tol (radians).
MembershipReport surface_membership(const Cylinder& c, std::span<const OrientedPoint> pts,
                                    double oriented_tol, double pos_tol);
MembershipReport surface_membership(const Cone& c, std::span<const OrientedPoint> pts,
                                    double oriented_tol, double pos_tol);

}  // namespace minfit

#endif  // MINFIT_ORACLE_HPP
