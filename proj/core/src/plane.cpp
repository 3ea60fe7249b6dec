#include "gaussfold/plane.hpp"

#include <algorithm>
#include <cmath>

namespace gaussfold {

namespace {

Matrix orthonormalized(const Matrix& basis) {
  if (basis.cols() == 0) return basis;
  Eigen::HouseholderQR<Matrix> qr(basis);
  Matrix q = qr.householderQ() * Matrix::Identity(basis.rows(), basis.cols());
  // HouseholderQR does not fix column signs; flip to keep the map
  // basis -> frame deterministic and orientation-friendly.
  Matrix r = qr.matrixQR().topRows(basis.cols()).triangularView<Eigen::Upper>();
  for (int j = 0; j < q.cols(); ++j) {
    if (r(j, j) < 0) q.col(j) = -q.col(j);
  }
  return q;
}

double orthonormality_defect(const Matrix& frame) {
  if (frame.cols() == 0) return 0.0;
  Matrix gram = frame.transpose() * frame;
  gram -= Matrix::Identity(frame.cols(), frame.cols());
  return gram.cwiseAbs().maxCoeff();
}

void check_same_grassmannian(const Plane& p, const Plane& q) {
  if (p.ambient_dim() != q.ambient_dim() || p.plane_dim() != q.plane_dim()) {
    fail(ErrorCode::DimensionMismatch,
         "planes live in different Grassmannians: (" +
             std::to_string(p.ambient_dim()) + "," + std::to_string(p.plane_dim()) +
             ") vs (" + std::to_string(q.ambient_dim()) + "," +
             std::to_string(q.plane_dim()) + ")");
  }
}

}  // namespace

Plane Plane::from_frame(const Matrix& frame, double tol) {
  if (frame.cols() > frame.rows()) {
    fail(ErrorCode::DimensionMismatch,
         "plane dimension exceeds ambient dimension");
  }
  if (orthonormality_defect(frame) > tol) {
    fail(ErrorCode::InvariantViolation, "frame columns are not orthonormal");
  }
  return Plane(frame);
}

Plane Plane::from_basis(const Matrix& basis) {
  if (basis.cols() > basis.rows()) {
    fail(ErrorCode::DimensionMismatch,
         "plane dimension exceeds ambient dimension");
  }
  return Plane(orthonormalized(basis));
}

Plane Plane::axis_span(int ambient_dim, int plane_dim) {
  if (plane_dim < 0 || plane_dim > ambient_dim) {
    fail(ErrorCode::DimensionMismatch, "need 0 <= d <= n");
  }
  return Plane(Matrix::Identity(ambient_dim, ambient_dim).leftCols(plane_dim));
}

Plane Plane::random(int ambient_dim, int plane_dim, Rng& rng) {
  if (plane_dim == 0) return axis_span(ambient_dim, 0);
  Matrix basis(ambient_dim, plane_dim);
  for (int j = 0; j < plane_dim; ++j)
    for (int i = 0; i < ambient_dim; ++i) basis(i, j) = rng.gaussian();
  return from_basis(basis);
}

double projection_gap(const Plane& p, const Plane& q) {
  check_same_grassmannian(p, q);
  if (p.plane_dim() == 0) return 0.0;
  return (p.projection() - q.projection()).cwiseAbs().maxCoeff();
}

bool planes_equal(const Plane& p, const Plane& q, double tol) {
  return projection_gap(p, q) <= tol;
}

Vector principal_angles(const Plane& p, const Plane& q) {
  check_same_grassmannian(p, q);
  const int d = p.plane_dim();
  if (d == 0) return Vector(0);
  if (d == p.ambient_dim()) return Vector::Zero(d);  // Gr_n(R^n) is a point
  // Identical representatives short-circuit: every generated plane union
  // shares one frame object, so pairwise scans stay cheap.
  if (p.frame() == q.frame()) return Vector::Zero(d);
  Matrix m = p.frame().transpose() * q.frame();
  Vector sigma;
  if (d == 1) {
    sigma = Vector::Constant(1, std::abs(m(0, 0)));
  } else {
    sigma = m.jacobiSvd().singularValues();
  }
  Vector angles(d);
  for (int i = 0; i < d; ++i) {
    angles[i] = std::acos(std::clamp(sigma[i], 0.0, 1.0));
  }
  return angles;
}

double plane_distance(const Plane& p, const Plane& q) {
  return principal_angles(p, q).norm();
}

PlaneTangent plane_log(const Plane& base, const Plane& target) {
  check_same_grassmannian(base, target);
  const int d = base.plane_dim();
  const int n = base.ambient_dim();
  if (d == 0 || d == n) {
    return PlaneTangent{base, Matrix::Zero(n, d)};
  }
  Matrix m = base.frame().transpose() * target.frame();
  Eigen::JacobiSVD<Matrix> msvd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (msvd.singularValues().minCoeff() <= 1e-12) {
    fail(ErrorCode::OutOfInjectivityRange,
         "target has a right principal angle with the base plane");
  }
  // X = (Q - Y Y^T Q)(Y^T Q)^{-1}; its singular values are tan(theta_i).
  Matrix residual = target.frame() - base.frame() * m;
  Matrix x = msvd.matrixV() *
             msvd.singularValues().cwiseInverse().asDiagonal() *
             msvd.matrixU().transpose();
  x = residual * x;
  Eigen::JacobiSVD<Matrix> xsvd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Vector theta = xsvd.singularValues().array().atan();
  Matrix delta = xsvd.matrixU() * theta.asDiagonal() * xsvd.matrixV().transpose();
  return PlaneTangent{base, delta};
}

Plane plane_exp(const Plane& base, const PlaneTangent& tangent) {
  if (!planes_equal(base, tangent.base)) {
    fail(ErrorCode::BaseMismatch, "tangent is anchored at a different plane");
  }
  const int d = base.plane_dim();
  const int n = base.ambient_dim();
  if (tangent.delta.rows() != n || tangent.delta.cols() != d) {
    fail(ErrorCode::DimensionMismatch, "tangent delta has wrong shape");
  }
  if (d == 0 || tangent.delta.norm() == 0.0) return base;
  // Use the tangent's own frame representative: the delta matrix only has
  // meaning relative to it.
  const Matrix& y = tangent.base.frame();
  Eigen::JacobiSVD<Matrix> svd(tangent.delta,
                               Eigen::ComputeThinU | Eigen::ComputeThinV);
  Vector theta = svd.singularValues();
  Matrix endpoint =
      y * (svd.matrixV() * theta.array().cos().matrix().asDiagonal() *
           svd.matrixV().transpose()) +
      svd.matrixU() * theta.array().sin().matrix().asDiagonal() *
          svd.matrixV().transpose();
  return Plane::from_basis(endpoint);
}

PlaneTangent random_tangent(const Plane& base, double norm, Rng& rng) {
  const int n = base.ambient_dim();
  const int d = base.plane_dim();
  if (d == 0 || d == n || norm == 0.0) {
    return PlaneTangent{base, Matrix::Zero(n, d)};
  }
  Matrix g(n, d);
  for (int j = 0; j < d; ++j)
    for (int i = 0; i < n; ++i) g(i, j) = rng.gaussian();
  // Horizontal part: remove the component inside the plane.
  Matrix delta = g - base.frame() * (base.frame().transpose() * g);
  double len = delta.norm();
  if (len < 1e-300) return PlaneTangent{base, Matrix::Zero(n, d)};
  return PlaneTangent{base, delta * (norm / len)};
}

double alpha_constant(double delta) {
  if (delta <= 0.0) {
    fail(ErrorCode::NonpositiveDelta, "delta must be positive");
  }
  return 0.999 * std::min(delta, M_PI / 4.0);
}

}  // namespace gaussfold
