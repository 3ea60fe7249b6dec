#include "gaussfold/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gaussfold {

namespace {

constexpr double kBallSlack = 1e-9;

/// Cell-centered lattice offsets in [-extent, extent]^d. When the smallest
/// cubic lattice overshoots `count`, the offsets closest to the center are
/// kept (ties broken by enumeration index). Returns offsets and cell width.
std::pair<std::vector<Vector>, double> lattice_offsets(int d, int count,
                                                       double extent) {
  if (d == 0) return {{Vector(0)}, 1.0};
  int per_axis = 1;
  while (std::pow(per_axis, d) < static_cast<double>(count)) ++per_axis;
  const double cell = 2.0 * extent / per_axis;

  const long total = static_cast<long>(std::pow(per_axis, d));
  std::vector<Vector> offsets;
  offsets.reserve(total);
  std::vector<int> index(d, 0);
  for (long k = 0; k < total; ++k) {
    Vector u(d);
    for (int axis = 0; axis < d; ++axis) {
      u[axis] = -extent + (index[axis] + 0.5) * cell;
    }
    offsets.push_back(std::move(u));
    for (int axis = d - 1; axis >= 0; --axis) {
      if (++index[axis] < per_axis) break;
      index[axis] = 0;
    }
  }
  if (static_cast<long>(count) < total) {
    std::vector<long> order(total);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](long a, long b) {
      return offsets[a].squaredNorm() < offsets[b].squaredNorm();
    });
    std::vector<Vector> kept;
    kept.reserve(count);
    for (int k = 0; k < count; ++k) kept.push_back(offsets[order[k]]);
    offsets = std::move(kept);
  }
  return {std::move(offsets), cell};
}

/// Orthonormal basis of the hyperplane orthogonal to the unit vector u,
/// from the Householder reflection that swaps u with an axis.
Matrix hyperplane_frame(const Vector& u) {
  const int n = static_cast<int>(u.size());
  if (n <= 1) return Matrix(n, 0);
  const double sign = u[0] >= 0.0 ? 1.0 : -1.0;
  Vector v = u;
  v[0] += sign;
  Matrix h = Matrix::Identity(n, n) - (2.0 / v.squaredNorm()) * v * v.transpose();
  return h.rightCols(n - 1);
}

double surface_area(int n, double radius) {
  return 2.0 * std::pow(M_PI, n / 2.0) * std::pow(radius, n - 1) /
         std::tgamma(n / 2.0);
}

void check_inside_ball(const Vector& x, const char* what) {
  if (x.norm() >= 1.0 - kBallSlack) {
    fail(ErrorCode::GeometryOutsideBall,
         std::string(what) + " reaches outside the open unit ball");
  }
}

SampledManifold generate_planes(const PlanesSpec& spec) {
  if (spec.plane_dim < 0 || spec.plane_dim > spec.ambient_dim) {
    fail(ErrorCode::DimensionMismatch, "need 0 <= d <= n");
  }
  Plane direction = spec.direction
                        ? *spec.direction
                        : Plane::axis_span(spec.ambient_dim, spec.plane_dim);
  if (direction.ambient_dim() != spec.ambient_dim ||
      direction.plane_dim() != spec.plane_dim) {
    fail(ErrorCode::DimensionMismatch, "direction has the wrong shape");
  }
  auto [offsets, cell] =
      lattice_offsets(spec.plane_dim, spec.samples_per_plane, spec.extent);
  const double weight = std::pow(cell, spec.plane_dim);

  SampledManifold w{spec.ambient_dim, spec.plane_dim, Domain::Ball, {}};
  w.samples.reserve(offsets.size() * spec.origins.size());
  for (const Vector& raw_origin : spec.origins) {
    if (raw_origin.size() != spec.ambient_dim) {
      fail(ErrorCode::DimensionMismatch, "origin has the wrong length");
    }
    // Canonical origin: the point of the affine plane closest to 0.
    Vector origin = direction.project_complement(raw_origin);
    for (const Vector& u : offsets) {
      Vector x = origin;
      if (spec.plane_dim > 0) x += direction.frame() * u;
      check_inside_ball(x, "plane union");
      w.samples.push_back(Sample{std::move(x), direction, weight});
    }
  }
  return w;
}

SampledManifold generate_sphere(const SphereSpec& spec, Rng& rng) {
  const int n = spec.ambient_dim;
  if (spec.center.size() != n) {
    fail(ErrorCode::DimensionMismatch, "center has the wrong length");
  }
  if (spec.radius <= 0.0) {
    fail(ErrorCode::InvariantViolation, "sphere radius must be positive");
  }
  const int count = std::max(spec.count, 1);
  const double weight = surface_area(n, spec.radius) / count;

  SampledManifold w{n, n - 1, Domain::Ball, {}};
  w.samples.reserve(count);
  auto push = [&](const Vector& unit) {
    Vector x = spec.center + spec.radius * unit;
    check_inside_ball(x, "sphere");
    w.samples.push_back(
        Sample{std::move(x), Plane::from_frame(hyperplane_frame(unit)), weight});
  };
  // Axis points first: they realize every right angle between normals, so
  // the sampled Gauss diameter is exact.
  for (int i = 0; i < n && static_cast<int>(w.samples.size()) < count; ++i) {
    for (double sign : {1.0, -1.0}) {
      if (static_cast<int>(w.samples.size()) >= count) break;
      Vector u = Vector::Zero(n);
      u[i] = sign;
      push(u);
    }
  }
  while (static_cast<int>(w.samples.size()) < count) {
    Vector g(n);
    for (int i = 0; i < n; ++i) g[i] = rng.gaussian();
    double len = g.norm();
    if (len < 1e-12) continue;
    push(g / len);
  }
  return w;
}

SampledManifold generate_graph(const GraphSpec& spec) {
  const int n = spec.ambient_dim;
  const int d = spec.plane_dim;
  if (d < 1 || d >= n) {
    fail(ErrorCode::DimensionMismatch, "graph needs 1 <= d < n");
  }
  auto [offsets, cell] = lattice_offsets(d, spec.count, spec.extent);
  const double cell_volume = std::pow(cell, d);

  auto height = [&](const Vector& u) {
    return spec.height == HeightFunction::Sine ? std::sin(spec.frequency * u[0])
                                               : u.squaredNorm();
  };
  auto gradient = [&](const Vector& u) {
    Vector g = Vector::Zero(d);
    if (spec.height == HeightFunction::Sine) {
      g[0] = spec.frequency * std::cos(spec.frequency * u[0]);
    } else {
      g = 2.0 * u;
    }
    return g;
  };

  SampledManifold w{n, d, Domain::Ball, {}};
  w.samples.reserve(offsets.size());
  for (const Vector& u : offsets) {
    Vector x = Vector::Zero(n);
    x.head(d) = u;
    x[d] = spec.amplitude * height(u);
    check_inside_ball(x, "graph");
    Vector grad = spec.amplitude * gradient(u);
    Matrix basis = Matrix::Zero(n, d);
    for (int k = 0; k < d; ++k) {
      basis(k, k) = 1.0;
      basis(d, k) = grad[k];
    }
    double area_factor = std::sqrt(1.0 + grad.squaredNorm());
    w.samples.push_back(Sample{std::move(x), Plane::from_basis(basis),
                               cell_volume * area_factor});
  }
  return w;
}

SampledManifold generate_points(const PointsSpec& spec) {
  SampledManifold w{spec.ambient_dim, 0, Domain::Ball, {}};
  Plane zero = Plane::zero(spec.ambient_dim);
  for (const Vector& x : spec.positions) {
    if (x.size() != spec.ambient_dim) {
      fail(ErrorCode::DimensionMismatch, "point has the wrong length");
    }
    check_inside_ball(x, "point cloud");
    w.samples.push_back(Sample{x, zero, 1.0});
  }
  return w;
}

}  // namespace

void SampledManifold::validate() const {
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const Sample& s = samples[i];
    if (s.point.size() != ambient_dim ||
        s.tangent.ambient_dim() != ambient_dim ||
        s.tangent.plane_dim() != plane_dim) {
      fail(ErrorCode::InvariantViolation,
           "sample " + std::to_string(i) + " has mismatched dimensions");
    }
    if (!(s.weight > 0.0)) {
      fail(ErrorCode::InvariantViolation,
           "sample " + std::to_string(i) + " has non-positive weight");
    }
    if (domain == Domain::Ball && s.point.norm() >= 1.0) {
      fail(ErrorCode::GeometryOutsideBall,
           "sample " + std::to_string(i) + " lies outside the open unit ball");
    }
  }
}

StepFunction::StepFunction(std::vector<double> breakpoints,
                           std::vector<double> values)
    : breakpoints_(std::move(breakpoints)), values_(std::move(values)) {
  if (breakpoints_.size() != values_.size()) {
    fail(ErrorCode::InvariantViolation,
         "step function needs one value per breakpoint");
  }
  double prev_b = -1.0, prev_v = 0.0;
  for (std::size_t k = 0; k < breakpoints_.size(); ++k) {
    if (breakpoints_[k] <= prev_b || breakpoints_[k] < 0.0) {
      fail(ErrorCode::InvariantViolation,
           "breakpoints must be strictly increasing and nonnegative");
    }
    if (values_[k] < prev_v) {
      fail(ErrorCode::InvariantViolation, "step values must be non-decreasing");
    }
    prev_b = breakpoints_[k];
    prev_v = values_[k];
  }
  cumulative_.resize(breakpoints_.size(), 0.0);
  for (std::size_t k = 1; k < breakpoints_.size(); ++k) {
    cumulative_[k] = cumulative_[k - 1] +
                     values_[k - 1] * (breakpoints_[k] - breakpoints_[k - 1]);
  }
}

double StepFunction::operator()(double x) const {
  auto it = std::lower_bound(breakpoints_.begin(), breakpoints_.end(), x);
  if (it == breakpoints_.begin()) return 0.0;
  return values_[static_cast<std::size_t>(it - breakpoints_.begin()) - 1];
}

double StepFunction::integral(double t) const {
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
  if (it == breakpoints_.begin()) return 0.0;
  std::size_t k = static_cast<std::size_t>(it - breakpoints_.begin()) - 1;
  return cumulative_[k] + values_[k] * (t - breakpoints_[k]);
}

double StepFunction::limit_at_zero() const {
  if (!breakpoints_.empty() && breakpoints_.front() == 0.0) return values_.front();
  return 0.0;
}

SampledManifold generate(const ShapeSpec& spec, std::uint64_t seed) {
  Rng rng(seed);
  SampledManifold w = std::visit(
      [&](const auto& s) -> SampledManifold {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, PlanesSpec>) return generate_planes(s);
        else if constexpr (std::is_same_v<T, SphereSpec>) return generate_sphere(s, rng);
        else if constexpr (std::is_same_v<T, GraphSpec>) return generate_graph(s);
        else return generate_points(s);
      },
      spec);
  w.validate();
  return w;
}

SampledManifold sample_affine_planes(const std::vector<AffinePlane>& planes,
                                     int samples_per_plane, double extent) {
  if (planes.empty()) {
    fail(ErrorCode::EmptyManifold, "no affine planes to sample");
  }
  const Plane& direction = planes.front().direction;
  for (const AffinePlane& p : planes) {
    if (!planes_equal(p.direction, direction)) {
      fail(ErrorCode::InvariantViolation, "affine planes are not parallel");
    }
  }
  auto [offsets, cell] =
      lattice_offsets(direction.plane_dim(), samples_per_plane, extent);
  const double weight = std::pow(cell, direction.plane_dim());

  SampledManifold w{direction.ambient_dim(), direction.plane_dim(),
                    Domain::Ball, {}};
  for (const AffinePlane& p : planes) {
    for (const Vector& u : offsets) {
      Vector x = p.origin;
      if (direction.plane_dim() > 0) x += p.direction.frame() * u;
      // The manifold is the intersection of the planes with the unit ball;
      // lattice points outside just fall away.
      if (x.norm() >= 1.0 - kBallSlack) continue;
      w.samples.push_back(Sample{std::move(x), p.direction, weight});
    }
  }
  return w;
}

SampledManifold restrict_to_ball(const SampledManifold& w, double r) {
  SampledManifold out{w.ambient_dim, w.plane_dim,
                      r <= 1.0 ? Domain::Ball : w.domain, {}};
  for (const Sample& s : w.samples) {
    if (s.point.norm() < r) out.samples.push_back(s);
  }
  return out;
}

double gauss_diameter(const SampledManifold& w) {
  double diam = 0.0;
  for (std::size_t i = 0; i < w.samples.size(); ++i) {
    for (std::size_t j = i + 1; j < w.samples.size(); ++j) {
      diam = std::max(diam,
                      plane_distance(w.samples[i].tangent, w.samples[j].tangent));
    }
  }
  return diam;
}

StepFunction theta(const SampledManifold& w) {
  if (w.domain != Domain::Ball) {
    fail(ErrorCode::InvariantViolation, "theta needs a ball-domain manifold");
  }
  const std::size_t count = w.samples.size();
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> radius(count);
  for (std::size_t i = 0; i < count; ++i) radius[i] = w.samples[i].point.norm();
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return radius[a] < radius[b]; });

  // Sweep outward; pair distances are evaluated in original-index order so
  // the running maximum reproduces gauss_diameter(restrict(w, eps)) bit for
  // bit at every eps.
  std::vector<double> breakpoints, values;
  std::vector<std::size_t> present;
  double running = 0.0;
  std::size_t k = 0;
  while (k < count) {
    std::size_t group_end = k;
    while (group_end < count && radius[order[group_end]] == radius[order[k]]) {
      ++group_end;
    }
    double before = running;
    for (std::size_t g = k; g < group_end; ++g) {
      std::size_t j = order[g];
      for (std::size_t i : present) {
        std::size_t lo = std::min(i, j), hi = std::max(i, j);
        running = std::max(running, plane_distance(w.samples[lo].tangent,
                                                   w.samples[hi].tangent));
      }
      present.push_back(j);
    }
    if (running > before) {
      breakpoints.push_back(radius[order[k]]);
      values.push_back(running);
    }
    k = group_end;
  }
  return StepFunction(std::move(breakpoints), std::move(values));
}

namespace {

/// Shared pullback machinery for the two chart directions: maps each point
/// through `map_point`, pushes the tangent frame through the Jacobian at
/// the source point, and multiplies the weight by the tangential Jacobian
/// factor (product of singular values of J restricted to the old frame).
template <typename PointMap, typename JacobianAt>
SampledManifold chart_transport(const SampledManifold& w, Domain out_domain,
                                PointMap&& map_point, JacobianAt&& jacobian) {
  SampledManifold out{w.ambient_dim, w.plane_dim, out_domain, {}};
  out.samples.reserve(w.samples.size());
  for (const Sample& s : w.samples) {
    Vector y = map_point(s.point);
    if (w.plane_dim == 0) {
      out.samples.push_back(Sample{std::move(y), s.tangent, s.weight});
      continue;
    }
    Matrix jf = jacobian(s.point) * s.tangent.frame();
    double factor = jf.jacobiSvd().singularValues().prod();
    out.samples.push_back(
        Sample{std::move(y), Plane::from_basis(jf), s.weight * factor});
  }
  return out;
}

}  // namespace

SampledManifold ball_chart_pull(const SampledManifold& w) {
  auto map_point = [](const Vector& x) { return Vector(x / (1.0 + x.norm())); };
  auto jacobian = [](const Vector& x) {
    const double r = x.norm();
    const int n = static_cast<int>(x.size());
    Matrix j = Matrix::Identity(n, n) / (1.0 + r);
    if (r > 1e-300) {
      j -= x * x.transpose() / (r * (1.0 + r) * (1.0 + r));
    }
    return j;
  };
  return chart_transport(w, Domain::Ball, map_point, jacobian);
}

SampledManifold ball_chart_push(const SampledManifold& w) {
  for (std::size_t i = 0; i < w.samples.size(); ++i) {
    if (w.samples[i].point.norm() >= 1.0) {
      fail(ErrorCode::GeometryOutsideBall,
           "sample " + std::to_string(i) + " is not inside the unit ball");
    }
  }
  auto map_point = [](const Vector& x) { return Vector(x / (1.0 - x.norm())); };
  auto jacobian = [](const Vector& x) {
    const double r = x.norm();
    const int n = static_cast<int>(x.size());
    Matrix j = Matrix::Identity(n, n) / (1.0 - r);
    if (r > 1e-300) {
      j += x * x.transpose() / (r * (1.0 - r) * (1.0 - r));
    }
    return j;
  };
  return chart_transport(w, Domain::Euclidean, map_point, jacobian);
}

CoveringReport covering_multiplicity(const SampledManifold& w,
                                     const SampledManifold& w_prime,
                                     double eps) {
  if (w.empty()) {
    fail(ErrorCode::EmptyManifold, "covering base is empty");
  }
  if (w.ambient_dim != w_prime.ambient_dim || w.plane_dim != w_prime.plane_dim) {
    fail(ErrorCode::DimensionMismatch, "manifolds live in different spaces");
  }
  // Sheets can sit closer together than eps, so the linkage radius is tied
  // to the sampling resolution of w_prime rather than to eps itself.
  const double linkage = std::min(eps, 2.0 * max_neighbour_gap(w_prime));

  CoveringReport report;
  report.sheet_counts.assign(w.samples.size(), 0);
  std::vector<bool> matched(w_prime.samples.size(), false);

  std::vector<Vector> displacements;
  std::vector<int> component;
  for (std::size_t i = 0; i < w.samples.size(); ++i) {
    const Sample& base = w.samples[i];
    displacements.clear();
    for (std::size_t j = 0; j < w_prime.samples.size(); ++j) {
      const Sample& over = w_prime.samples[j];
      double closeness = (base.point - over.point).norm() +
                         plane_distance(base.tangent, over.tangent);
      if (closeness < eps) {
        displacements.push_back(over.point - base.point);
        matched[j] = true;
      }
    }
    // Single-linkage components of the displacement set.
    const int m = static_cast<int>(displacements.size());
    component.assign(m, -1);
    int clusters = 0;
    for (int seed = 0; seed < m; ++seed) {
      if (component[seed] >= 0) continue;
      component[seed] = clusters;
      std::vector<int> stack{seed};
      while (!stack.empty()) {
        int a = stack.back();
        stack.pop_back();
        for (int b = 0; b < m; ++b) {
          if (component[b] >= 0) continue;
          if ((displacements[a] - displacements[b]).norm() <= linkage) {
            component[b] = clusters;
            stack.push_back(b);
          }
        }
      }
      ++clusters;
    }
    report.sheet_counts[i] = clusters;
  }
  report.unmatched =
      static_cast<int>(std::count(matched.begin(), matched.end(), false));
  return report;
}

double max_neighbour_gap(const SampledManifold& w) {
  const std::size_t count = w.samples.size();
  if (count < 2) return 0.0;
  double gap = 0.0;
  for (std::size_t i = 0; i < count; ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < count; ++j) {
      if (i == j) continue;
      nearest = std::min(nearest, (w.samples[i].point - w.samples[j].point).norm());
    }
    gap = std::max(gap, nearest);
  }
  return gap;
}

double estimate_resolution(const SampledManifold& w) {
  // A 0-dimensional sample IS the manifold, so its resolution is exact;
  // the neighbour gap would conflate component separation with density.
  if (w.plane_dim == 0) return 0.0;
  return max_neighbour_gap(w);
}

JitterPattern make_jitter_pattern(const SampledManifold& w, std::uint64_t seed) {
  Rng rng(seed);
  JitterPattern pattern;
  pattern.point_dirs.reserve(w.samples.size());
  pattern.tangent_dirs.reserve(w.samples.size());
  for (const Sample& s : w.samples) {
    Vector g(w.ambient_dim);
    for (int i = 0; i < w.ambient_dim; ++i) g[i] = rng.gaussian();
    double len = g.norm();
    pattern.point_dirs.push_back(len < 1e-12 ? Vector::Zero(w.ambient_dim)
                                             : Vector(g / len));
    pattern.tangent_dirs.push_back(random_tangent(s.tangent, 1.0, rng).delta);
  }
  return pattern;
}

SampledManifold jitter(const SampledManifold& w, const JitterPattern& pattern,
                       double eps) {
  if (pattern.point_dirs.size() != w.samples.size()) {
    fail(ErrorCode::DimensionMismatch, "jitter pattern size mismatch");
  }
  SampledManifold out = w;
  for (std::size_t i = 0; i < out.samples.size(); ++i) {
    Sample& s = out.samples[i];
    if (eps != 0.0) {
      s.point += eps * pattern.point_dirs[i];
      if (w.domain == Domain::Ball) {
        double r = s.point.norm();
        if (r >= 1.0 - kBallSlack) s.point *= (1.0 - 2.0 * kBallSlack) / r;
      }
      Matrix delta = eps * pattern.tangent_dirs[i];
      s.tangent = plane_exp(s.tangent, PlaneTangent{s.tangent, delta});
    }
  }
  return out;
}

}  // namespace gaussfold
