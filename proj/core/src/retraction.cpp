#include "gaussfold/retraction.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace gaussfold {

namespace {

std::string format(double v) {
  std::ostringstream out;
  out.precision(12);
  out << v;
  return out.str();
}

/// Single-linkage components at the given radius; returns one centroid per
/// component, in first-member order.
std::vector<Vector> linkage_centroids(const std::vector<Vector>& points,
                                      double radius) {
  const int m = static_cast<int>(points.size());
  std::vector<int> component(m, -1);
  std::vector<Vector> centroids;
  for (int seed = 0; seed < m; ++seed) {
    if (component[seed] >= 0) continue;
    const int id = static_cast<int>(centroids.size());
    component[seed] = id;
    std::vector<int> stack{seed};
    Vector sum = Vector::Zero(points[seed].size());
    int count = 0;
    while (!stack.empty()) {
      int a = stack.back();
      stack.pop_back();
      sum += points[a];
      ++count;
      for (int b = 0; b < m; ++b) {
        if (component[b] >= 0) continue;
        if ((points[a] - points[b]).norm() <= radius) {
          component[b] = id;
          stack.push_back(b);
        }
      }
    }
    centroids.push_back(sum / count);
  }
  return centroids;
}

}  // namespace

double RetractionConfig::resolved_alpha() const {
  validate();
  return std::isnan(alpha) ? alpha_constant(delta) : alpha;
}

void RetractionConfig::validate() const {
  if (delta <= 0.0) fail(ErrorCode::NonpositiveDelta, "delta must be positive");
  if (!std::isnan(alpha)) {
    if (alpha <= 0.0) fail(ErrorCode::NonpositiveAlpha, "alpha must be positive");
    if (alpha > std::min(delta, M_PI / 4.0) * (1.0 + 1e-12)) {
      fail(ErrorCode::InvariantViolation,
           "alpha exceeds the transversality cap min(delta, pi/4)");
    }
  }
  if (!(root_tol > 0.0)) {
    fail(ErrorCode::InvariantViolation, "root_tol must be positive");
  }
  if (!(t_floor > 0.0) || t_floor >= 1.0) {
    fail(ErrorCode::InvariantViolation, "t_floor must lie in (0, 1)");
  }
  if (max_iter < 1) fail(ErrorCode::InvariantViolation, "max_iter must be >= 1");
  if (stage_count < 3) {
    fail(ErrorCode::InvariantViolation, "stage_count must be >= 3");
  }
  for (double param : {cluster_radius, slab_width}) {
    if (!std::isnan(param) && param < 0.0) {
      fail(ErrorCode::InvariantViolation,
           "slab/cluster parameters must be nonnegative");
    }
  }
}

SmoothedStep::SmoothedStep(StepFunction f, double alpha)
    : f_(std::move(f)), alpha_(alpha) {
  if (alpha_ <= 0.0) {
    fail(ErrorCode::NonpositiveAlpha, "smoothing slope must be positive");
  }
}

double SmoothedStep::operator()(double x) const {
  if (!(x > 0.0)) {
    fail(ErrorCode::InvariantViolation, "smoothed step is defined on x > 0");
  }
  return (f_.integral(2.0 * x) - f_.integral(x)) / x + alpha_ * x;
}

SmoothedStep smooth_a(const StepFunction& f, double alpha) {
  return SmoothedStep(f, alpha);
}

double phi(const SampledManifold& w, const RetractionConfig& cfg) {
  const double alpha = cfg.resolved_alpha();
  StepFunction spread = theta(w);
  if (spread.is_zero()) return 1.0;  // union of parallel planes
  if (spread.limit_at_zero() >= alpha) {
    fail(ErrorCode::ConeAtOrigin,
         "Gauss spread " + format(spread.limit_at_zero()) +
             " at the origin does not drop below alpha = " + format(alpha));
  }
  SmoothedStep a = smooth_a(spread, alpha);
  // a is strictly increasing with a(0+) = theta(0+) < alpha and
  // a(1) = sup(theta) + alpha > alpha, so the root is unique in (0, 1).
  double lo = 0.0, hi = 1.0;
  while (hi - lo > cfg.root_tol) {
    double mid = 0.5 * (lo + hi);
    (a(mid) < alpha ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

SampledManifold shrink_stage(const SampledManifold& w, double t,
                             double phi_value) {
  if (!(phi_value > 0.0) || phi_value > 1.0) {
    fail(ErrorCode::InvariantViolation, "phi must lie in (0, 1]");
  }
  if (t < 0.0 || t > 1.0) {
    fail(ErrorCode::InvariantViolation, "shrink parameter must lie in [0, 1]");
  }
  const double scale = t + (1.0 - t) * phi_value;
  if (scale == 1.0) return w;
  SampledManifold out{w.ambient_dim, w.plane_dim, w.domain, {}};
  const double weight_factor = std::pow(scale, -w.plane_dim);
  for (const Sample& s : w.samples) {
    if (s.point.norm() < scale) {
      out.samples.push_back(
          Sample{s.point / scale, s.tangent, s.weight * weight_factor});
    }
  }
  return out;
}

SampledManifold squash_stage(const SampledManifold& v, const Plane& p,
                             double t) {
  if (t <= 0.0) {
    fail(ErrorCode::NonpositiveT,
         "squash needs t > 0; the t = 0 limit is flatten_limit");
  }
  if (t > 1.0) {
    fail(ErrorCode::InvariantViolation, "squash parameter must lie in (0, 1]");
  }
  if (p.ambient_dim() != v.ambient_dim) {
    fail(ErrorCode::DimensionMismatch, "plane and manifold dimensions differ");
  }
  if (t == 1.0 || p.plane_dim() == 0) return v;

  const double stretch = 1.0 / t - 1.0;
  SampledManifold out{v.ambient_dim, v.plane_dim, v.domain, {}};
  for (const Sample& s : v.samples) {
    Vector y = s.point + stretch * p.project(s.point);
    if (y.norm() >= 1.0) continue;
    if (v.plane_dim == 0) {
      out.samples.push_back(Sample{std::move(y), s.tangent, s.weight});
      continue;
    }
    Matrix pushed = s.tangent.frame() +
                    stretch * (p.frame() * (p.frame().transpose() * s.tangent.frame()));
    double factor = pushed.jacobiSvd().singularValues().prod();
    out.samples.push_back(
        Sample{std::move(y), Plane::from_basis(pushed), s.weight * factor});
  }
  return out;
}

double transversality_margin(const SampledManifold& v, const Plane& p) {
  if (p.ambient_dim() != v.ambient_dim) {
    fail(ErrorCode::DimensionMismatch, "plane and manifold dimensions differ");
  }
  if (v.empty() || v.plane_dim == 0 || p.plane_dim() == 0) return 1.0;
  double margin = 1.0;
  for (const Sample& s : v.samples) {
    Matrix m = p.frame().transpose() * s.tangent.frame();
    double smallest = m.jacobiSvd().singularValues().minCoeff();
    margin = std::min(margin, smallest);
  }
  return margin;
}

std::vector<AffinePlane> flatten_limit(const SampledManifold& v, const Plane& p,
                                       const RetractionConfig& cfg) {
  if (v.empty()) return {};
  double margin = transversality_margin(v, p);
  if (margin <= 1e-12) {
    fail(ErrorCode::NonTransverse,
         "a tangent plane meets the squash direction's complement");
  }
  const double resolution = estimate_resolution(v);
  const double eta = std::isnan(cfg.slab_width) ? 2.0 * resolution : cfg.slab_width;
  const double rho =
      std::isnan(cfg.cluster_radius) ? 4.0 * resolution : cfg.cluster_radius;

  std::vector<Vector> origins;
  for (const Sample& s : v.samples) {
    Vector in_plane = p.frame().transpose() * s.point;
    if (in_plane.norm() > eta) continue;
    // Intersect the affine tangent plane x + T_x with p-perp: solve
    // (p^T F) c = -p^T x, then land at x + F c.
    Vector y = s.point;
    if (v.plane_dim > 0 && p.plane_dim() > 0) {
      Matrix m = p.frame().transpose() * s.tangent.frame();
      Vector c = m.colPivHouseholderQr().solve(-in_plane);
      y += s.tangent.frame() * c;
    }
    origins.push_back(p.plane_dim() > 0 ? Vector(y - p.project(y)) : y);
  }
  if (origins.empty()) {
    fail(ErrorCode::NoSlabSamples,
         "no sample lies within the slab of width " + format(eta) +
             "; sampling resolution is too coarse");
  }
  std::vector<AffinePlane> planes;
  for (Vector& centroid : linkage_centroids(origins, rho)) {
    planes.push_back(AffinePlane{p, std::move(centroid)});
  }
  return planes;
}

namespace {

RetractionStage make_stage(double tau, SampledManifold m,
                           const std::optional<Plane>& mean) {
  double diam = gauss_diameter(m);
  double margin = mean ? transversality_margin(m, *mean) : 1.0;
  return RetractionStage{tau, std::move(m), diam, margin};
}

}  // namespace

RetractionTrace retract(const SampledManifold& w, const RetractionConfig& cfg) {
  RetractionTrace trace;
  trace.config = cfg;
  trace.config.alpha = cfg.resolved_alpha();
  const double alpha = trace.config.alpha;

  trace.phi_value = phi(w, cfg);
  trace.diagnostics.push_back("phi = " + format(trace.phi_value));

  SampledManifold core = shrink_stage(w, 0.0, trace.phi_value);
  const double resolution = estimate_resolution(core);
  if (std::isnan(trace.config.slab_width)) {
    trace.config.slab_width = 2.0 * resolution;
  }
  if (std::isnan(trace.config.cluster_radius)) {
    trace.config.cluster_radius = 4.0 * resolution;
  }

  if (!core.empty()) {
    double diam = gauss_diameter(core);
    trace.diagnostics.push_back("core: " + std::to_string(core.samples.size()) +
                                " samples, gauss diameter " + format(diam));
    if (diam >= alpha) {
      fail(ErrorCode::DiameterTooLarge,
           "shrink stage: core Gauss diameter " + format(diam) +
               " is not below alpha = " + format(alpha));
    }
    Plane mean = karcher_mean(core, trace.config.delta, 1e-10, cfg.max_iter);
    for (const Sample& s : core.samples) {
      if (plane_distance(mean, s.tangent) > diam + 1e-8) {
        fail(ErrorCode::DiameterTooLarge,
             "mean stage: averaged plane exceeds the Gauss diameter bound");
      }
    }
    trace.mean = mean;
    double margin = transversality_margin(core, mean);
    trace.diagnostics.push_back("transversality margin " + format(margin));
    if (margin <= 1e-12) {
      fail(ErrorCode::NonTransverse,
           "squash stage: a tangent plane meets the mean's complement");
    }
    trace.margin = margin;
    trace.result = flatten_limit(core, mean, trace.config);
    trace.diagnostics.push_back("flattened onto " +
                                std::to_string(trace.result.size()) +
                                " parallel plane(s)");
  } else {
    trace.diagnostics.push_back("core is empty: result is the empty union");
  }

  int stage_count = cfg.stage_count | 1;  // odd so tau = 1/2 is on the grid
  for (int j = 0; j < stage_count; ++j) {
    double tau = static_cast<double>(j) / (stage_count - 1);
    if (tau <= 0.5) {
      trace.stages.push_back(
          make_stage(tau, shrink_stage(w, 1.0 - 2.0 * tau, trace.phi_value),
                     trace.mean));
    } else if (trace.mean) {
      double t = std::pow(cfg.t_floor, 2.0 * tau - 1.0);
      trace.stages.push_back(
          make_stage(tau, squash_stage(core, *trace.mean, t), trace.mean));
    } else {
      trace.stages.push_back(make_stage(tau, core, trace.mean));  // empty core
    }
  }
  return trace;
}

ProbeReport probe_continuity(const SampledManifold& w,
                             const std::vector<double>& jitters,
                             std::uint64_t seed, const RetractionConfig& cfg) {
  RetractionTrace base = retract(w, cfg);
  JitterPattern pattern = make_jitter_pattern(w, seed);

  auto result_graph = [](const RetractionTrace& trace) {
    return gauss_graph(sample_affine_planes(trace.result, 64, 0.6), false);
  };

  ProbeReport report;
  report.base_phi = base.phi_value;
  std::optional<double> prev_phi, prev_mean, prev_result;
  for (double eps : jitters) {
    ProbeLevel level;
    level.eps = eps;
    try {
      RetractionTrace perturbed = retract(jitter(w, pattern, eps), cfg);
      level.delta_phi = std::abs(base.phi_value - perturbed.phi_value);
      if (base.mean && perturbed.mean) {
        level.delta_mean = plane_distance(*base.mean, *perturbed.mean);
      } else if (!base.mean && !perturbed.mean) {
        level.delta_mean = 0.0;
      }
      if (base.result.empty() && perturbed.result.empty()) {
        level.delta_result = 0.0;
      } else if (!base.result.empty() && !perturbed.result.empty()) {
        level.delta_result = hyper_distance(result_graph(base),
                                            result_graph(perturbed));
      }
      auto check = [](std::optional<double>& prev, std::optional<double> cur,
                      bool& flag) {
        if (cur && prev && *cur > *prev + 1e-12) flag = false;
        if (cur) prev = cur;
      };
      check(prev_phi, level.delta_phi, report.phi_nonincreasing);
      check(prev_mean, level.delta_mean, report.mean_nonincreasing);
      check(prev_result, level.delta_result, report.result_nonincreasing);
    } catch (const Error& e) {
      level.error = e.name();
    }
    report.levels.push_back(std::move(level));
  }
  return report;
}

}  // namespace gaussfold
