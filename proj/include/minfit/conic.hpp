/**
 * @file conic.hpp
 * @brief Plane frames and 2D conic fitting/classification used by the
 *        coplanar special-configuration branches.
 */
#ifndef MINFIT_CONIC_HPP
#define MINFIT_CONIC_HPP

#include <Eigen/Dense>

#include <optional>
#include <span>

#include "minfit/geom.hpp"

namespace minfit {

using Vec2 = Eigen::Vector2d;

/// Best-fit plane through points; returns max absolute point-plane distance.
struct PlaneFit {
  Vec3 centroid;
  Vec3 normal;  // unit
  double max_residual;
};
PlaneFit fit_plane(std::span<const Vec3> pts);

/// Rigid motion mapping the fitted plane to z = 0 (centroid to origin).
RigidMotion plane_frame(const PlaneFit& plane);

/// Conic A x^2 + B xy + C y^2 + D x + E y + F = 0, coefficients unit-norm.
struct ConicCoeffs {
  double A, B, C, D, E, F;
  double eval(const Vec2& p) const {
    return A * p.x() * p.x() + B * p.x() * p.y() + C * p.y() * p.y() + D * p.x() +
           E * p.y() + F;
  }
};

/// Least-squares conic through >= 5 planar points (nullspace of the design
/// matrix). Returns nullopt when the points do not determine a conic (rank
/// deficient by 2 or more, e.g. fewer than 5 distinct points).
std::optional<ConicCoeffs> fit_conic(std::span<const Vec2> pts);

/// Smallest singular value of the conic design matrix relative to the largest;
/// near zero iff a single conic interpolates all the points.
double conic_interpolation_gap(std::span<const Vec2> pts);

enum class ConicType { Ellipse, Circle, Parabola, Hyperbola, Degenerate };

/// Conic reduced to canonical position. `to_data` maps canonical coordinates
/// to the input plane coordinates (a proper 2D rotation + translation,
/// embedded as a 3D rigid motion fixing z).
///   Ellipse / Circle: alpha x^2 + beta y^2 = 1   (alpha, beta > 0)
///   Hyperbola:        alpha x^2 - beta y^2 = 1   (alpha, beta > 0)
///   Parabola:         x^2 = alpha y              (alpha > 0)
struct CanonicalConic {
  ConicType type;
  double alpha = 0.0;
  double beta = 0.0;
  RigidMotion to_data;
};

/// Classify and canonicalize a conic. Points coordinates are assumed unit
/// scaled; classification tolerances are fixed accordingly.
CanonicalConic canonicalize_conic(const ConicCoeffs& c);

}  // namespace minfit

#endif  // MINFIT_CONIC_HPP
