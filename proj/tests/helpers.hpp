#pragma once

#include <cmath>
#include <vector>

#include "gaussfold/manifold.hpp"

namespace gaussfold::testing {

/// Line in R^2 at the given angle to e_1.
inline Plane line_at(double angle) {
  Matrix frame(2, 1);
  frame << std::cos(angle), std::sin(angle);
  return Plane::from_frame(frame);
}

/// Line in R^n spanned by the given direction.
inline Plane span_of(const Vector& direction) {
  Matrix basis(direction.size(), 1);
  basis.col(0) = direction;
  return Plane::from_basis(basis);
}

inline SampledManifold make_manifold(int n, int d, std::vector<Sample> samples,
                                     Domain domain = Domain::Ball) {
  SampledManifold w{n, d, domain, std::move(samples)};
  w.validate();
  return w;
}

/// Gr_1(R^2) manifold: one sample per (angle, radius, weight) triple, the
/// point placed at radius along e_1 just to pin the radial weight.
inline SampledManifold line_field(
    const std::vector<std::tuple<double, double, double>>& entries) {
  std::vector<Sample> samples;
  for (const auto& [angle, radius, weight] : entries) {
    Vector x = Vector::Zero(2);
    x[0] = radius;
    samples.push_back(Sample{x, line_at(angle), weight});
  }
  return make_manifold(2, 1, std::move(samples));
}

/// Circle of the given radius about `center` in R^2, uniformly sampled.
inline SampledManifold circle(const Vector& center, double radius, int count) {
  std::vector<Sample> samples;
  const double weight = 2.0 * M_PI * radius / count;
  for (int k = 0; k < count; ++k) {
    double angle = 2.0 * M_PI * k / count;
    Vector x(2);
    x << center[0] + radius * std::cos(angle), center[1] + radius * std::sin(angle);
    Vector tangent_dir(2);
    tangent_dir << -std::sin(angle), std::cos(angle);
    samples.push_back(Sample{x, span_of(tangent_dir), weight});
  }
  return make_manifold(2, 1, std::move(samples));
}

}  // namespace gaussfold::testing
