#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gaussfold/plane.hpp"

namespace gaussfold {

enum class Domain { Ball, Euclidean };

/// One weighted sample of a submanifold: a point, its tangent plane, and a
/// positive weight carrying units of d-volume.
struct Sample {
  Vector point;
  Plane tangent;
  double weight;
};

/// A weighted finite sample of a proper d-submanifold. The empty list is a
/// valid value (the empty submanifold). Ball-domain manifolds keep every
/// point strictly inside the unit ball.
struct SampledManifold {
  int ambient_dim = 0;
  int plane_dim = 0;
  Domain domain = Domain::Ball;
  std::vector<Sample> samples;

  bool empty() const { return samples.empty(); }
  std::size_t size() const { return samples.size(); }

  /// Checks the type invariants; throws InvariantViolation /
  /// GeometryOutsideBall naming the offending sample.
  void validate() const;
};

/// An affine plane: direction subspace plus the origin, which is the point
/// of the plane closest to the ambient origin (so it lies in direction-perp).
struct AffinePlane {
  Plane direction;
  Vector origin;
};

/// Non-decreasing step function on [0,1) with value 0 at 0. Evaluation is
/// left-continuous -- f(x) is the value attached to the largest breakpoint
/// strictly below x -- matching the open-ball restriction it discretizes.
class StepFunction {
 public:
  StepFunction() = default;
  StepFunction(std::vector<double> breakpoints, std::vector<double> values);

  double operator()(double x) const;

  /// Integral of the step function from 0 to t, with the last value
  /// extended constantly beyond the final breakpoint.
  double integral(double t) const;

  bool is_zero() const { return breakpoints_.empty(); }
  double sup() const { return values_.empty() ? 0.0 : values_.back(); }
  /// Right limit at 0: nonzero only when a breakpoint sits at 0.
  double limit_at_zero() const;

  const std::vector<double>& breakpoints() const { return breakpoints_; }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> breakpoints_;
  std::vector<double> values_;
  std::vector<double> cumulative_;  // integral from 0 to breakpoints_[k]
};

// ---------------------------------------------------------------------------
// Shape specifications for the generated corpus.

/// Lattice samples of parallel affine planes sharing one direction.
struct PlanesSpec {
  int ambient_dim;
  int plane_dim;
  std::optional<Plane> direction;  // default: span(e_1..e_d)
  std::vector<Vector> origins;     // must lie in direction-perp
  int samples_per_plane = 64;
  double extent = 0.5;             // lattice spans [-extent, extent]^d
};

/// Round (n-1)-sphere. The first 2n samples are the axis points
/// center +- radius*e_i, so the sampled Gauss image attains the full
/// Grassmannian diameter exactly; the rest are seeded-uniform.
struct SphereSpec {
  int ambient_dim;
  Vector center;
  double radius;
  int count = 256;
};

enum class HeightFunction { Sine, Bowl };

/// Graph of u -> amplitude * h(u) over span(e_1..e_d), offset into e_{d+1}.
struct GraphSpec {
  int ambient_dim;
  int plane_dim;
  HeightFunction height = HeightFunction::Sine;
  double amplitude = 0.05;
  double frequency = 3.0;
  int count = 128;
  double extent = 0.7;
};

/// A 0-dimensional manifold: the given points.
struct PointsSpec {
  int ambient_dim;
  std::vector<Vector> positions;
};

using ShapeSpec = std::variant<PlanesSpec, SphereSpec, GraphSpec, PointsSpec>;

/// Deterministic sampler: fixed (spec, seed) gives bit-identical output.
/// Tangents are the exact analytic tangent planes of the shape; weights
/// approximate local d-volume. Throws GeometryOutsideBall if the shape
/// leaves the open unit ball.
SampledManifold generate(const ShapeSpec& spec, std::uint64_t seed);

/// Lattice samples of a list of parallel affine planes (all directions must
/// agree). Used to turn a flatten result back into a manifold.
SampledManifold sample_affine_planes(const std::vector<AffinePlane>& planes,
                                     int samples_per_plane, double extent);

// ---------------------------------------------------------------------------
// Operations.

/// Keeps exactly the samples with |x| < r; weights and tangents unchanged.
SampledManifold restrict_to_ball(const SampledManifold& w, double r);

/// Max pairwise Gauss-image distance; 0 for empty or singleton samples.
double gauss_diameter(const SampledManifold& w);

/// The function eps -> gauss_diameter(restrict_to_ball(w, eps)) as an exact
/// step function, built incrementally over samples sorted by radius.
StepFunction theta(const SampledManifold& w);

/// Pullback along the ball chart x -> x/(1-|x|): maps a proper Euclidean
/// manifold into the unit ball. Points map to x/(1+|x|), tangents through
/// the inverse Jacobian, weights by the tangential Jacobian factor.
SampledManifold ball_chart_pull(const SampledManifold& w);

/// Pushforward along the ball chart (inverse of ball_chart_pull): maps a
/// ball manifold to a proper Euclidean one.
SampledManifold ball_chart_push(const SampledManifold& w);

/// Per-sample covering sheet counts of w_prime over w, plus the number of
/// w_prime samples matched by no sample of w. A sample y of w_prime lies
/// over x when |x-y| + plane_distance(T_x, T_y) < eps; the displacements
/// y-x are then single-linkage clustered to count sheets.
struct CoveringReport {
  std::vector<int> sheet_counts;  // one per sample of w
  int unmatched = 0;              // samples of w_prime over no sample of w
};
CoveringReport covering_multiplicity(const SampledManifold& w,
                                     const SampledManifold& w_prime,
                                     double eps);

/// Max over samples of the nearest-neighbour position gap; 0 for fewer than
/// two samples.
double max_neighbour_gap(const SampledManifold& w);

/// Sampling resolution as used for slab/cluster defaults: 0 for point
/// clouds (d = 0 samples are exact), max_neighbour_gap otherwise.
double estimate_resolution(const SampledManifold& w);

/// Reusable jitter pattern: unit position directions and unit-norm
/// horizontal tangent deltas, drawn once so that scaling by eps produces
/// perturbations proportional across eps levels.
struct JitterPattern {
  std::vector<Vector> point_dirs;
  std::vector<Matrix> tangent_dirs;
};
JitterPattern make_jitter_pattern(const SampledManifold& w, std::uint64_t seed);

/// Perturbs positions by eps * pattern and tangents by geodesic steps of
/// length eps. Ball-domain points are rescaled to stay inside the ball.
SampledManifold jitter(const SampledManifold& w, const JitterPattern& pattern,
                       double eps);

}  // namespace gaussfold
