#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gaussfold/hyperspace.hpp"
#include "helpers.hpp"

using namespace gaussfold;
using testing::line_at;

namespace {

/// Graph with the given points; the basepoint is implicit.
GaussGraph graph_of(int n, int d, std::vector<GaussPoint> points) {
  GaussGraph g{n, d, std::move(points)};
  g.validate();
  return g;
}

/// Random graph whose sphere points come from compactified ball samples.
GaussGraph random_graph(Rng& rng, int n, int d, int count) {
  std::vector<GaussPoint> points;
  for (int k = 0; k < count; ++k) {
    Vector x(n);
    for (int i = 0; i < n; ++i) x[i] = rng.uniform(-2.0, 2.0);
    points.push_back(GaussPoint{compactify(x), Plane::random(n, d, rng)});
  }
  return graph_of(n, d, std::move(points));
}

}  // namespace

TEST_CASE("compactify hand values") {
  Vector zero = Vector::Zero(3);
  Vector south = compactify(zero);
  CHECK(south[3] == -1.0);
  CHECK(south.head(3).norm() == 0.0);

  Vector north = compactify_infinity(3);
  CHECK(north[3] == 1.0);

  Vector unit = Vector::Zero(3);
  unit[0] = 1.0;
  CHECK(compactify(unit)[3] == 0.0);
  CHECK(compactify(unit).norm() == doctest::Approx(1.0).epsilon(1e-15));

  // Injectivity on distinct points, and norm 1 in general.
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    Vector a(3), b(3);
    for (int i = 0; i < 3; ++i) {
      a[i] = rng.uniform(-5.0, 5.0);
      b[i] = rng.uniform(-5.0, 5.0);
    }
    CHECK(compactify(a).norm() == doctest::Approx(1.0).epsilon(1e-12));
    if ((a - b).norm() > 1e-9) {
      CHECK((compactify(a) - compactify(b)).norm() > 0.0);
    }
  }
}

TEST_CASE("gauss_graph sizes") {
  SampledManifold empty{3, 1, Domain::Ball, {}};
  CHECK(gauss_graph(empty, false).points.empty());  // basepoint only

  SampledManifold single = testing::line_field({{0.2, 0.3, 1.0}});
  CHECK(gauss_graph(single, false).points.size() == 1);

  SampledManifold circle = testing::circle(Vector::Zero(2), 0.4, 17);
  CHECK(gauss_graph(circle, true).points.size() == 17);
}

TEST_CASE("quotient metric takes the cheaper branch") {
  Plane l = line_at(0.2);

  // Far from the pole, same plane: plain product distance.
  GaussPoint u{compactify(Vector::Zero(2)), l};
  Vector x(2);
  x << 0.3, 0.0;
  GaussPoint v{compactify(x), l};
  double direct = (u.sphere_point - v.sphere_point).norm();
  CHECK(quotient_metric(u, v) == doctest::Approx(direct).epsilon(1e-14));

  // Near the pole with different planes: the plane term is collapsed at
  // infinity, so the shortcut h(u) + h(v) wins.
  auto near_pole = [](double sign, const Plane& plane) {
    Vector far(2);
    far << sign * 80.0, 0.0;  // compactifies close to the pole
    return GaussPoint{compactify(far), plane};
  };
  GaussPoint a = near_pole(1.0, line_at(0.0));
  GaussPoint b = near_pole(-1.0, line_at(1.4));
  double shortcut = pole_distance(a) + pole_distance(b);
  CHECK(product_metric(a, b) > shortcut);
  CHECK(quotient_metric(a, b) == doctest::Approx(shortcut).epsilon(1e-14));
}

TEST_CASE("quotient shortcut beats a mutual distance of 1.5") {
  // Two points at pole distance 0.1 each whose mutual product distance is
  // about 1.5 (the plane term carries it; two near-pole sphere points are
  // necessarily chordally close). The pair metric takes the shortcut
  // h(u) + h(v) = 0.2; the graph-level Hausdorff is 0.1 because each graph
  // also carries the basepoint, which is the closer partner.
  auto at_pole_distance = [](double h, double azimuth, const Plane& plane) {
    double polar = 2.0 * std::asin(h / 2.0);
    Vector s(3);
    s << std::sin(polar) * std::cos(azimuth), std::sin(polar) * std::sin(azimuth),
        std::cos(polar);
    return GaussPoint{s, plane};
  };
  GaussPoint u = at_pole_distance(0.1, 0.0, line_at(0.0));
  GaussPoint v = at_pole_distance(0.1, M_PI, line_at(1.3));

  CHECK(pole_distance(u) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(pole_distance(v) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(product_metric(u, v) == doctest::Approx(1.4998).epsilon(1e-4));
  CHECK(quotient_metric(u, v) == doctest::Approx(0.2).epsilon(1e-12));

  GaussGraph a = graph_of(2, 1, {u});
  GaussGraph b = graph_of(2, 1, {v});
  double h = hyper_distance(a, b);
  CHECK(h == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(h == hyper_distance_bruteforce(a, b));
}

TEST_CASE("hyper_distance of singletons far from the pole") {
  Plane l = line_at(0.4);
  Vector x = Vector::Zero(2);
  Vector y(2);
  y << 0.2, 0.0;
  GaussPoint u{compactify(x), l};
  GaussPoint v{compactify(y), l};
  double c = (u.sphere_point - v.sphere_point).norm();
  REQUIRE(c < pole_distance(u));
  CHECK(hyper_distance(graph_of(2, 1, {u}), graph_of(2, 1, {v})) ==
        doctest::Approx(c).epsilon(1e-14));
}

TEST_CASE("identity distance is zero") {
  Rng rng(5);
  GaussGraph g = random_graph(rng, 3, 1, 40);
  CHECK(hyper_distance(g, g) == 0.0);
  CHECK(hyper_distance_bruteforce(g, g) == 0.0);
}

TEST_CASE("accelerated distance equals brute force") {
  Rng rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    int n = 2 + static_cast<int>(rng.raw() % 3);
    int d = 1 + static_cast<int>(rng.raw() % static_cast<unsigned>(n - 1));
    GaussGraph a = random_graph(rng, n, d, 1 + static_cast<int>(rng.raw() % 120));
    GaussGraph b = random_graph(rng, n, d, 1 + static_cast<int>(rng.raw() % 120));
    double fast = hyper_distance(a, b);
    double slow = hyper_distance_bruteforce(a, b);
    CHECK(std::abs(fast - slow) <= 1e-12);
    CHECK(hyper_distance(b, a) == fast);  // symmetry, exactly
  }
}

TEST_CASE("triangle inequality on random graphs") {
  Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    GaussGraph a = random_graph(rng, 3, 1, 12);
    GaussGraph b = random_graph(rng, 3, 1, 12);
    GaussGraph c = random_graph(rng, 3, 1, 12);
    double ab = hyper_distance(a, b);
    double bc = hyper_distance(b, c);
    double ac = hyper_distance(a, c);
    CHECK(ac <= ab + bc + 1e-9);
  }
}

TEST_CASE("dimension mismatch is rejected") {
  Rng rng(13);
  GaussGraph a = random_graph(rng, 3, 1, 4);
  GaussGraph b = random_graph(rng, 3, 2, 4);
  CHECK_THROWS_AS(hyper_distance(a, b), Error);
}

TEST_CASE("jittered manifolds converge monotonically in the hyperspace") {
  SampledManifold w = generate(
      GraphSpec{3, 1, HeightFunction::Sine, 0.1, 3.0, 80, 0.6}, 17);
  GaussGraph base = gauss_graph(w, true);
  JitterPattern pattern = make_jitter_pattern(w, 19);

  double prev = std::numeric_limits<double>::infinity();
  for (int k = 1; k <= 8; ++k) {
    double eps = std::pow(2.0, -k);
    double dist = hyper_distance(base, gauss_graph(jitter(w, pattern, eps), true));
    CHECK(dist <= prev + 1e-12);
    prev = dist;
  }
  CHECK(prev < 0.02);
}

TEST_CASE("gauss_proximity hand cases") {
  SampledManifold base = generate(
      PlanesSpec{3, 2, std::nullopt, {Vector::Zero(3)}, 49, 0.4}, 1);
  CHECK(gauss_proximity(base, base, 1.0) == 0.0);

  // Parallel translate by eps along the normal: every foot point is the
  // matching lattice sample, so the proximity is exactly eps.
  const double eps = 0.03;
  Vector offset = Vector::Zero(3);
  offset[2] = eps;
  SampledManifold moved = generate(
      PlanesSpec{3, 2, std::nullopt, {offset}, 49, 0.4}, 1);
  CHECK(gauss_proximity(base, moved, 1.0) == doctest::Approx(eps).epsilon(1e-12));

  SampledManifold empty{3, 2, Domain::Ball, {}};
  CHECK(gauss_proximity(base, empty, 1.0) == 0.0);
  CHECK(gauss_proximity(empty, empty, 1.0) == 0.0);
  CHECK_THROWS_AS(gauss_proximity(empty, base, 1.0), Error);
  // Out-of-range probes do not trip the empty reference.
  SampledManifold ring = generate(SphereSpec{3, Vector::Zero(3), 0.5, 32}, 4);
  SampledManifold empty_ref{3, 2, Domain::Ball, {}};
  CHECK(gauss_proximity(empty_ref, ring, 0.3) == 0.0);
}

TEST_CASE("gauss_proximity never exceeds the split brute-force bound") {
  Rng rng(23);
  SampledManifold a = generate(
      GraphSpec{3, 1, HeightFunction::Sine, 0.15, 4.0, 50, 0.6}, 3);
  JitterPattern pattern = make_jitter_pattern(a, 29);
  SampledManifold b = jitter(a, pattern, 0.05);

  // Match each probe sample to its nearest reference position; the summed
  // worst mismatches of that matching bound the proximity from above.
  double worst_point = 0.0, worst_plane = 0.0;
  for (const Sample& y : b.samples) {
    std::size_t nearest = 0;
    for (std::size_t i = 1; i < a.samples.size(); ++i) {
      if ((a.samples[i].point - y.point).norm() <
          (a.samples[nearest].point - y.point).norm()) {
        nearest = i;
      }
    }
    worst_point =
        std::max(worst_point, (a.samples[nearest].point - y.point).norm());
    worst_plane = std::max(
        worst_plane, plane_distance(a.samples[nearest].tangent, y.tangent));
  }
  CHECK(gauss_proximity(a, b, 1.0) <= worst_point + worst_plane + 1e-12);
}
