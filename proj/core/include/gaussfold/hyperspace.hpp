#pragma once

#include "gaussfold/manifold.hpp"
#include "gaussfold/plane.hpp"

namespace gaussfold {

/// Inverse stereographic projection of x in R^n onto the unit sphere in
/// R^{n+1}: (2x, |x|^2 - 1)/(|x|^2 + 1). The added point at infinity maps
/// to the north pole (0, ..., 0, 1).
Vector compactify(const Vector& x);
Vector compactify_infinity(int ambient_dim);

/// One point of a Gauss graph: a sphere point paired with a tangent plane.
struct GaussPoint {
  Vector sphere_point;  // unit vector in R^{n+1}
  Plane plane;
};

/// Finite subset of S^n x Gr_d(R^n) together with the distinguished class
/// of {infinity} x Gr (the basepoint, always present, carried implicitly).
struct GaussGraph {
  int ambient_dim = 0;
  int plane_dim = 0;
  std::vector<GaussPoint> points;

  /// Checks unit norms and plane shapes.
  void validate() const;
};

/// Sum metric on S^n x Gr: chordal distance of sphere points plus
/// plane_distance of the planes.
double product_metric(const GaussPoint& u, const GaussPoint& v);

/// Chordal distance to the north pole, i.e. the distance from u to the
/// collapsed class (the Gr factor costs nothing at infinity).
double pole_distance(const GaussPoint& u);

/// Quotient metric after collapsing {infinity} x Gr to a point:
/// min(product_metric(u, v), pole_distance(u) + pole_distance(v)).
double quotient_metric(const GaussPoint& u, const GaussPoint& v);

/// The affine Gauss map at sample resolution: one (compactify(x), T) point
/// per sample plus the basepoint. With `ball_to_euclidean` set, a
/// ball-domain manifold is first pushed through the ball chart so that
/// proper ball submanifolds become proper subsets of R^n.
GaussGraph gauss_graph(const SampledManifold& w, bool ball_to_euclidean);

/// Hausdorff distance between Gauss graphs under the quotient metric.
/// Candidate pruning uses a Euclidean embedding that lower-bounds the true
/// metric, so the value equals the brute-force one.
double hyper_distance(const GaussGraph& a, const GaussGraph& b);

/// Reference all-pairs evaluation of the same distance.
double hyper_distance_bruteforce(const GaussGraph& a, const GaussGraph& b);

/// Directed C1 proximity of w_prime to w inside the ball of radius r: the
/// largest over samples y of w_prime with |y| <= r of the smallest
/// |x - y| + plane_distance(T_x, T_y) over samples x of w. Zero when
/// w_prime has no samples in range.
double gauss_proximity(const SampledManifold& w, const SampledManifold& w_prime,
                       double r);

}  // namespace gaussfold
