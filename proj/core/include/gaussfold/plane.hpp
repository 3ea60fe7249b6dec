#pragma once

#include <Eigen/Dense>

#include "gaussfold/error.hpp"
#include "gaussfold/rng.hpp"

namespace gaussfold {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// A d-dimensional linear subspace of R^n, carried by an n x d frame with
/// orthonormal columns. The frame is a non-canonical representative: two
/// planes are equal when their projection matrices agree. d = 0 is the
/// zero subspace (empty frame); d = n is all of R^n.
class Plane {
 public:
  /// Wraps a frame that is already orthonormal. Throws InvariantViolation
  /// if the orthonormality defect exceeds `tol`.
  static Plane from_frame(const Matrix& frame, double tol = 1e-10);

  /// Orthonormalizes the columns of `basis` (thin QR) and wraps the result.
  /// The columns must be linearly independent.
  static Plane from_basis(const Matrix& basis);

  /// span(e_1, ..., e_d) in R^n.
  static Plane axis_span(int ambient_dim, int plane_dim);

  /// The zero subspace of R^n.
  static Plane zero(int ambient_dim) { return axis_span(ambient_dim, 0); }

  /// Haar-ish random plane: orthonormalized Gaussian basis.
  static Plane random(int ambient_dim, int plane_dim, Rng& rng);

  int ambient_dim() const { return static_cast<int>(frame_.rows()); }
  int plane_dim() const { return static_cast<int>(frame_.cols()); }
  const Matrix& frame() const { return frame_; }

  /// frame * frame^T, the canonical representative.
  Matrix projection() const { return frame_ * frame_.transpose(); }

  /// Orthogonal projection of v onto the plane.
  Vector project(const Vector& v) const { return frame_ * (frame_.transpose() * v); }

  /// Orthogonal projection of v onto the orthogonal complement.
  Vector project_complement(const Vector& v) const { return v - project(v); }

 private:
  explicit Plane(Matrix frame) : frame_(std::move(frame)) {}
  Matrix frame_;
};

/// Max-abs difference of projection matrices; 0 iff equal subspaces.
double projection_gap(const Plane& p, const Plane& q);

/// Subspace equality at the fixed 1e-9 projection tolerance.
bool planes_equal(const Plane& p, const Plane& q, double tol = 1e-9);

/// Horizontal tangent at `base`: an n x d matrix with base.frame^T * delta = 0.
/// Deltas are tied to the exact frame representative of their base.
struct PlaneTangent {
  Plane base;
  Matrix delta;

  /// Frobenius norm, which equals the geodesic length of exp(base, delta).
  double norm() const { return delta.norm(); }
};

/// Geodesic (arc-length) distance on the Grassmannian: sqrt of the sum of
/// squared principal angles, computed from the singular values of
/// P.frame^T * Q.frame clamped to [0, 1]. Bounded by (pi/2)*sqrt(min(d, n-d)).
double plane_distance(const Plane& p, const Plane& q);

/// Principal angles between two planes, descending. Empty when d = 0.
Vector principal_angles(const Plane& p, const Plane& q);

/// Geodesic logarithm: the horizontal tangent at `base` whose exponential
/// is `target`. Requires plane_distance(base, target) < pi/2; throws
/// OutOfInjectivityRange when the pair has a right principal angle.
PlaneTangent plane_log(const Plane& base, const Plane& target);

/// Geodesic exponential. `tangent.base` must equal `base` as a subspace.
Plane plane_exp(const Plane& base, const PlaneTangent& tangent);

/// Random horizontal tangent of the given Frobenius norm.
PlaneTangent random_tangent(const Plane& base, double norm, Rng& rng);

/// The transversality margin constant: 0.999 * min(delta, pi/4). Any two
/// planes P, Q with P meeting Q-perp nontrivially have a right principal
/// angle, hence distance at least pi/2; half of that floor is pi/4.
double alpha_constant(double delta);

}  // namespace gaussfold
