#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "gaussfold/plane.hpp"
#include "helpers.hpp"

using namespace gaussfold;
using testing::line_at;

TEST_CASE("plane_distance on hand cases") {
  Plane e1 = line_at(0.0);
  Plane e2 = line_at(M_PI / 2.0);
  Plane diag = line_at(M_PI / 4.0);

  CHECK(plane_distance(e1, e1) == 0.0);
  CHECK(plane_distance(e1, e2) == doctest::Approx(M_PI / 2.0).epsilon(1e-12));
  CHECK(plane_distance(e1, diag) == doctest::Approx(M_PI / 4.0).epsilon(1e-12));
}

TEST_CASE("plane_distance rejects mismatched Grassmannians") {
  CHECK_THROWS_AS(plane_distance(Plane::axis_span(3, 1), Plane::axis_span(2, 1)),
                  Error);
  CHECK_THROWS_AS(plane_distance(Plane::axis_span(3, 1), Plane::axis_span(3, 2)),
                  Error);
}

TEST_CASE("metric axioms and the diameter bound") {
  Rng rng(7);
  const int n = 4, d = 2;
  const double bound = (M_PI / 2.0) * std::sqrt(std::min(d, n - d));
  for (int trial = 0; trial < 1000; ++trial) {
    Plane a = Plane::random(n, d, rng);
    Plane b = Plane::random(n, d, rng);
    Plane c = Plane::random(n, d, rng);
    double ab = plane_distance(a, b);
    double ba = plane_distance(b, a);
    double bc = plane_distance(b, c);
    double ac = plane_distance(a, c);
    CHECK(ab == doctest::Approx(ba).epsilon(1e-13));
    CHECK(ac <= ab + bc + 1e-9);
    CHECK(ab <= bound + 1e-12);
  }
}

TEST_CASE("distance is invariant under frame gauge") {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    Plane p = Plane::random(4, 2, rng);
    Plane q = Plane::random(4, 2, rng);
    // Right-multiply q's frame by a random rotation.
    double angle = rng.uniform(0.0, 2.0 * M_PI);
    Matrix rot(2, 2);
    rot << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
    Plane q_regauged = Plane::from_frame(q.frame() * rot);
    CHECK(std::abs(plane_distance(p, q) - plane_distance(p, q_regauged)) <=
          1e-10);
    CHECK(planes_equal(q, q_regauged));
  }
}

TEST_CASE("plane_log on the circle chart of Gr_1(R^2)") {
  Plane base = line_at(0.0);
  PlaneTangent at_self = plane_log(base, base);
  CHECK(at_self.norm() == 0.0);

  PlaneTangent step = plane_log(base, line_at(0.3));
  CHECK(step.norm() == doctest::Approx(0.3).epsilon(1e-12));
  // Horizontal representative.
  CHECK((base.frame().transpose() * step.delta).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("plane_exp on the circle chart of Gr_1(R^2)") {
  Plane base = line_at(0.0);
  CHECK(planes_equal(plane_exp(base, PlaneTangent{base, Matrix::Zero(2, 1)}),
                     base));

  Matrix delta(2, 1);
  delta << 0.0, 0.3;
  Plane moved = plane_exp(base, PlaneTangent{base, delta});
  CHECK(planes_equal(moved, line_at(0.3)));
  CHECK(plane_distance(base, moved) == doctest::Approx(0.3).epsilon(1e-10));
}

TEST_CASE("exp/log round trips on seeded random pairs") {
  Rng rng(23);
  int accepted = 0;
  while (accepted < 100) {
    Plane base = Plane::random(5, 2, rng);
    Plane target = Plane::random(5, 2, rng);
    if (plane_distance(base, target) >= M_PI / 4.0) continue;
    ++accepted;

    PlaneTangent log = plane_log(base, target);
    CHECK(log.norm() ==
          doctest::Approx(plane_distance(base, target)).epsilon(1e-8));
    CHECK(projection_gap(plane_exp(base, log), target) < 1e-8);

    PlaneTangent direction = random_tangent(base, rng.uniform(0.0, 1.2), rng);
    PlaneTangent recovered = plane_log(base, plane_exp(base, direction));
    CHECK((recovered.delta - direction.delta).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("exp moves by the tangent norm") {
  Rng rng(31);
  for (int trial = 0; trial < 50; ++trial) {
    Plane base = Plane::random(4, 2, rng);
    double len = rng.uniform(0.0, M_PI / 2.0 - 0.05);
    PlaneTangent tangent = random_tangent(base, len, rng);
    CHECK(plane_distance(base, plane_exp(base, tangent)) ==
          doctest::Approx(len).epsilon(1e-8));
  }
}

TEST_CASE("log outside the injectivity regime throws") {
  CHECK_THROWS_AS(plane_log(line_at(0.0), line_at(M_PI / 2.0)), Error);
}

TEST_CASE("exp rejects a tangent at another base") {
  Plane base = line_at(0.0);
  Plane other = line_at(0.5);
  Matrix delta(2, 1);
  delta << -std::sin(0.5) * 0.1, std::cos(0.5) * 0.1;
  CHECK_THROWS_AS(plane_exp(base, PlaneTangent{other, delta}), Error);
}

TEST_CASE("degenerate Grassmannians are single points") {
  Plane zero_a = Plane::zero(3);
  Plane zero_b = Plane::zero(3);
  CHECK(plane_distance(zero_a, zero_b) == 0.0);
  CHECK(plane_log(zero_a, zero_b).norm() == 0.0);
  CHECK(planes_equal(plane_exp(zero_a, plane_log(zero_a, zero_b)), zero_a));

  Rng rng(5);
  Plane full_a = Plane::random(3, 3, rng);
  Plane full_b = Plane::random(3, 3, rng);
  CHECK(plane_distance(full_a, full_b) == doctest::Approx(0.0).epsilon(1e-10));
}

TEST_CASE("from_frame validates orthonormality") {
  Matrix skewed(2, 1);
  skewed << 1.0, 0.5;
  CHECK_THROWS_AS(Plane::from_frame(skewed), Error);
  CHECK(planes_equal(Plane::from_basis(skewed),
                     line_at(std::atan2(0.5, 1.0))));
}

TEST_CASE("alpha_constant branches") {
  CHECK(alpha_constant(M_PI / 8.0) ==
        doctest::Approx(0.999 * M_PI / 8.0).epsilon(1e-15));
  CHECK(alpha_constant(10.0) == doctest::Approx(0.999 * M_PI / 4.0).epsilon(1e-15));
  CHECK(alpha_constant(M_PI / 4.0) ==
        doctest::Approx(0.999 * M_PI / 4.0).epsilon(1e-15));
  CHECK_THROWS_AS(alpha_constant(0.0), Error);
  CHECK_THROWS_AS(alpha_constant(-1.0), Error);
}

TEST_CASE("planes meeting the complement are at least pi/2 apart") {
  // Brute-force support for the pi/4 floor in alpha_constant: lines P
  // inside the plane Q-perp in R^3 are orthogonal to Q.
  Rng rng(41);
  double min_dist = std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 500; ++trial) {
    Plane q = Plane::random(3, 1, rng);
    // Q-perp is a 2-plane; pick a random line inside it.
    Vector g(3);
    for (int i = 0; i < 3; ++i) g[i] = rng.gaussian();
    Vector inside = g - q.project(g);
    if (inside.norm() < 1e-6) continue;
    Plane p = testing::span_of(inside);
    min_dist = std::min(min_dist, plane_distance(p, q));
  }
  CHECK(min_dist >= M_PI / 2.0 - 1e-9);
}
