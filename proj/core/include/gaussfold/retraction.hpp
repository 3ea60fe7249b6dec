#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gaussfold/hyperspace.hpp"
#include "gaussfold/karcher.hpp"
#include "gaussfold/manifold.hpp"

namespace gaussfold {

/// Tunables for the flattening pipeline. NaN fields are resolved when a run
/// starts: alpha from alpha_constant(delta), slab width and cluster radius
/// from the sampling resolution of the shrunk manifold.
struct RetractionConfig {
  double delta = M_PI / 8.0;
  double alpha = std::numeric_limits<double>::quiet_NaN();
  double root_tol = 1e-12;
  double cluster_radius = std::numeric_limits<double>::quiet_NaN();  // rho
  double slab_width = std::numeric_limits<double>::quiet_NaN();      // eta
  double t_floor = 1e-4;
  int max_iter = 200;
  int stage_count = 9;  // odd, >= 3; tau grid over [0, 1]

  /// Alpha after defaulting. Throws when alpha exceeds min(delta, pi/4)
  /// or is not positive.
  double resolved_alpha() const;
  void validate() const;
};

/// Strictly increasing smoothing of a step function:
///   a(f)(x) = (1/x) * integral_x^{2x} f(y) dy + alpha * x,
/// with f extended constantly past its last breakpoint. Satisfies
/// a(f) >= f, a(f)(x) >= alpha*x, and a(0)(x) = alpha*x exactly; the
/// integral of the step function is evaluated in closed form.
class SmoothedStep {
 public:
  SmoothedStep(StepFunction f, double alpha);

  double operator()(double x) const;
  double alpha() const { return alpha_; }
  const StepFunction& step() const { return f_; }

 private:
  StepFunction f_;
  double alpha_;
};

SmoothedStep smooth_a(const StepFunction& f, double alpha);

/// The cutoff radius: the unique root of a(theta(w))(x) = alpha on (0, 1].
/// Equals 1 exactly iff theta(w) is identically zero; below the root the
/// restricted Gauss image has diameter < alpha. Throws ConeAtOrigin when
/// the Gauss spread does not vanish toward the origin.
double phi(const SampledManifold& w, const RetractionConfig& cfg);

/// Conformal shrink pullback at parameter t: with s = t + (1-t)*phi_value,
/// keeps samples with |x| < s, maps x to x/s, leaves tangents unchanged,
/// scales weights by s^{-d}.
SampledManifold shrink_stage(const SampledManifold& w, double t,
                             double phi_value);

/// Squash pullback toward the plane p at parameter t in (0, 1]: positions
/// through x -> pi(x)/t + pi_perp(x) (kept while inside the ball), tangents
/// through the same linear map, weights by its tangential Jacobian factor.
SampledManifold squash_stage(const SampledManifold& v, const Plane& p,
                             double t);

/// Min over samples of the smallest singular value of p.frame^T T_x.frame;
/// positive iff every tangent is transverse to p-perp. 1 for the empty
/// manifold and for d = 0.
double transversality_margin(const SampledManifold& v, const Plane& p);

/// The analytic t -> 0 limit of the squash: samples within `slab_width` of
/// p-perp have their origins refined by intersecting the affine tangent
/// plane with p-perp; the refined origins are single-linkage clustered at
/// radius `cluster_radius` and each cluster becomes one affine plane
/// parallel to p.
std::vector<AffinePlane> flatten_limit(const SampledManifold& v, const Plane& p,
                                       const RetractionConfig& cfg);

struct RetractionStage {
  double tau;  // strictly increasing across [0, 1]
  SampledManifold manifold;
  double gauss_diam;
  double margin;
};

struct RetractionTrace {
  RetractionConfig config;  // with alpha/slab/cluster resolved
  double phi_value = 1.0;
  std::optional<Plane> mean;
  std::optional<double> margin;
  std::vector<RetractionStage> stages;
  std::vector<AffinePlane> result;
  std::vector<std::string> diagnostics;
};

/// The full flattening: cutoff, shrink to the Gauss-concentrated core,
/// average the tangent planes, check transversality, squash, and take the
/// flatten limit. Stages record the shrink for tau in [0, 1/2] and the
/// squash (parameter sliding from 1 to t_floor) for tau in (1/2, 1].
RetractionTrace retract(const SampledManifold& w, const RetractionConfig& cfg);

struct ProbeLevel {
  double eps;
  std::optional<double> delta_phi;
  std::optional<double> delta_mean;
  std::optional<double> delta_result;  // hyper distance of flattened results
  std::string error;                   // empty when the level succeeded
};

struct ProbeReport {
  double base_phi;
  std::vector<ProbeLevel> levels;
  bool phi_nonincreasing = true;
  bool mean_nonincreasing = true;
  bool result_nonincreasing = true;
};

/// Empirical continuity probe: rerun the pipeline on jittered copies of w
/// (one seeded unit pattern scaled by each eps) and report how far phi, the
/// mean plane, and the flattened result move. Pipeline errors at a level
/// are recorded, not fatal.
ProbeReport probe_continuity(const SampledManifold& w,
                             const std::vector<double>& jitters,
                             std::uint64_t seed, const RetractionConfig& cfg);

}  // namespace gaussfold
