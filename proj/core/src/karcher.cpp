#include "gaussfold/karcher.hpp"

#include <cmath>

namespace gaussfold {

namespace {

/// Effective weights w_i (1-|x_i|); throws if a sample sits outside the
/// open unit ball, where the radial weight loses its sign.
std::vector<double> effective_weights(const SampledManifold& w) {
  std::vector<double> weights;
  weights.reserve(w.samples.size());
  for (std::size_t i = 0; i < w.samples.size(); ++i) {
    double radial = 1.0 - w.samples[i].point.norm();
    if (radial <= 0.0) {
      fail(ErrorCode::InvariantViolation,
           "sample " + std::to_string(i) + " lies outside the open unit ball");
    }
    weights.push_back(w.samples[i].weight * radial);
  }
  return weights;
}

}  // namespace

double lambda_energy(const SampledManifold& w, const Plane& candidate) {
  if (w.empty()) {
    fail(ErrorCode::EmptyManifold, "lambda_energy of the empty manifold");
  }
  std::vector<double> weights = effective_weights(w);
  double mass = 0.0, energy = 0.0;
  for (std::size_t i = 0; i < w.samples.size(); ++i) {
    double dist = plane_distance(candidate, w.samples[i].tangent);
    energy += weights[i] * dist * dist;
    mass += weights[i];
  }
  return energy / (2.0 * mass);
}

PlaneTangent karcher_step(const SampledManifold& w, const Plane& at) {
  if (w.empty()) {
    fail(ErrorCode::EmptyManifold, "karcher_step of the empty manifold");
  }
  std::vector<double> weights = effective_weights(w);
  double mass = 0.0;
  for (double v : weights) mass += v;
  Matrix step = Matrix::Zero(at.ambient_dim(), at.plane_dim());
  for (std::size_t i = 0; i < w.samples.size(); ++i) {
    step += (weights[i] / mass) * plane_log(at, w.samples[i].tangent).delta;
  }
  return PlaneTangent{at, std::move(step)};
}

Plane karcher_mean(const SampledManifold& w, double delta, double step_tol,
                   int max_iter) {
  if (delta <= 0.0) {
    fail(ErrorCode::NonpositiveDelta, "delta must be positive");
  }
  if (w.empty()) {
    fail(ErrorCode::EmptyManifold, "karcher_mean of the empty manifold");
  }
  double diam = gauss_diameter(w);
  if (diam >= 2.0 * delta) {
    fail(ErrorCode::DiameterTooLarge,
         "Gauss image diameter " + std::to_string(diam) +
             " is not below 2*delta = " + std::to_string(2.0 * delta));
  }

  // Start at the tangent plane of the heaviest sample (effective weight).
  std::vector<double> weights = effective_weights(w);
  std::size_t heaviest = 0;
  for (std::size_t i = 1; i < weights.size(); ++i) {
    if (weights[i] > weights[heaviest]) heaviest = i;
  }
  Plane mean = w.samples[heaviest].tangent;

  for (int iter = 0; iter < max_iter; ++iter) {
    PlaneTangent step = karcher_step(w, mean);
    if (step.norm() < step_tol) break;
    mean = plane_exp(mean, step);
  }
  return mean;
}

}  // namespace gaussfold
