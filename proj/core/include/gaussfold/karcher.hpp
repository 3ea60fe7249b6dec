#pragma once

#include "gaussfold/manifold.hpp"
#include "gaussfold/plane.hpp"

namespace gaussfold {

/// Discretized tangent-spread energy of a plane L against a manifold:
///   sum_i w_i (1-|x_i|) d(L, T_i)^2 / (2 sum_i w_i (1-|x_i|)).
double lambda_energy(const SampledManifold& w, const Plane& candidate);

/// Riemannian gradient step of lambda_energy at `at`: the weighted average
/// of the logs of the sample tangents. Zero exactly at the minimizer.
PlaneTangent karcher_step(const SampledManifold& w, const Plane& at);

/// Weighted Riemannian centre of mass of the sample tangent planes under
/// weights w_i (1-|x_i|). Requires gauss_diameter(w) < 2*delta so the
/// energy is convex on the working ball; plain geodesic gradient descent
/// (unit step) from the heaviest sample's tangent then converges.
Plane karcher_mean(const SampledManifold& w, double delta,
                   double step_tol = 1e-10, int max_iter = 200);

}  // namespace gaussfold
