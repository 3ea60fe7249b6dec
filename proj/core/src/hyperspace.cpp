#include "gaussfold/hyperspace.hpp"

#include <algorithm>
#include <cmath>

namespace gaussfold {

namespace {

void check_compatible(const GaussGraph& a, const GaussGraph& b) {
  if (a.ambient_dim != b.ambient_dim || a.plane_dim != b.plane_dim) {
    fail(ErrorCode::DimensionMismatch,
         "Gauss graphs live in different spaces");
  }
}

std::vector<double> pole_distances(const GaussGraph& g) {
  std::vector<double> h(g.points.size());
  for (std::size_t i = 0; i < g.points.size(); ++i) h[i] = pole_distance(g.points[i]);
  return h;
}

/// Embedding into R^{(n+1) + n^2} whose Euclidean distance lower-bounds the
/// product metric: the sphere point concatenated with the flattened
/// projection matrix scaled by 1/sqrt(2) (the Frobenius gap of projections
/// is sqrt(2 * sum sin^2 theta) <= sqrt(2) * plane_distance).
std::vector<Vector> embed_all(const GaussGraph& g) {
  const int n = g.ambient_dim;
  std::vector<Vector> embedded;
  embedded.reserve(g.points.size());
  for (const GaussPoint& p : g.points) {
    Vector e(n + 1 + n * n);
    e.head(n + 1) = p.sphere_point;
    if (p.plane.plane_dim() > 0) {
      Matrix proj = p.plane.projection();
      e.tail(n * n) = Eigen::Map<const Vector>(proj.data(), n * n) * M_SQRT1_2;
    } else {
      e.tail(n * n).setZero();
    }
    embedded.push_back(std::move(e));
  }
  return embedded;
}

/// Naive sup over `a` of the quotient distance to `b`. Every graph carries
/// the basepoint, which pairs at cost pole_distance(u) from a regular point
/// u (and at 0 from the other basepoint, so the basepoint of `a` never
/// contributes to the sup).
double directed_sup_naive(const GaussGraph& a, const GaussGraph& b,
                          const std::vector<double>& h_b) {
  double sup = 0.0;
  for (const GaussPoint& u : a.points) {
    double h_u = pole_distance(u);
    double best = h_u;
    for (std::size_t j = 0; j < b.points.size(); ++j) {
      best = std::min(best,
                      std::min(product_metric(u, b.points[j]), h_u + h_b[j]));
    }
    sup = std::max(sup, best);
  }
  return sup;
}

/// Same supremum with candidate pruning. The infimum against b starts at
/// the basepoint bound h_u, so the quotient shortcut h_u + h_b[j] can never
/// improve it and only the product metric has to be searched; the embedding
/// lower bound and the running sup prune candidates without changing the
/// minimum.
double directed_sup_pruned(const GaussGraph& a, const GaussGraph& b,
                           const std::vector<double>& h_b,
                           const std::vector<Vector>& emb_a,
                           const std::vector<Vector>& emb_b) {
  double sup = 0.0;
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    const GaussPoint& u = a.points[i];
    double best = pole_distance(u);
    if (best <= sup) continue;  // cannot raise the sup
    for (std::size_t j = 0; j < b.points.size(); ++j) {
      if ((emb_a[i] - emb_b[j]).norm() >= best) continue;
      double d = product_metric(u, b.points[j]);
      if (d < best) {
        best = d;
        if (best <= sup) break;
      }
    }
    sup = std::max(sup, best);
  }
  return sup;
}

}  // namespace

Vector compactify(const Vector& x) {
  const int n = static_cast<int>(x.size());
  Vector s(n + 1);
  double q = x.squaredNorm();
  s.head(n) = 2.0 * x / (q + 1.0);
  s[n] = (q - 1.0) / (q + 1.0);
  return s;
}

Vector compactify_infinity(int ambient_dim) {
  Vector s = Vector::Zero(ambient_dim + 1);
  s[ambient_dim] = 1.0;
  return s;
}

void GaussGraph::validate() const {
  for (std::size_t i = 0; i < points.size(); ++i) {
    const GaussPoint& p = points[i];
    if (p.sphere_point.size() != ambient_dim + 1 ||
        p.plane.ambient_dim() != ambient_dim ||
        p.plane.plane_dim() != plane_dim) {
      fail(ErrorCode::InvariantViolation,
           "graph point " + std::to_string(i) + " has mismatched dimensions");
    }
    if (std::abs(p.sphere_point.norm() - 1.0) > 1e-10) {
      fail(ErrorCode::InvariantViolation,
           "graph point " + std::to_string(i) + " is not on the unit sphere");
    }
  }
}

double product_metric(const GaussPoint& u, const GaussPoint& v) {
  return (u.sphere_point - v.sphere_point).norm() +
         plane_distance(u.plane, v.plane);
}

double pole_distance(const GaussPoint& u) {
  // Chordal distance to (0, ..., 0, 1).
  Vector gap = u.sphere_point;
  gap[gap.size() - 1] -= 1.0;
  return gap.norm();
}

double quotient_metric(const GaussPoint& u, const GaussPoint& v) {
  return std::min(product_metric(u, v), pole_distance(u) + pole_distance(v));
}

GaussGraph gauss_graph(const SampledManifold& w, bool ball_to_euclidean) {
  const SampledManifold* source = &w;
  SampledManifold pushed;
  if (ball_to_euclidean) {
    if (w.domain != Domain::Ball) {
      fail(ErrorCode::InvariantViolation,
           "ball_to_euclidean needs a ball-domain manifold");
    }
    pushed = ball_chart_push(w);
    source = &pushed;
  }
  GaussGraph graph{w.ambient_dim, w.plane_dim, {}};
  graph.points.reserve(source->samples.size());
  for (const Sample& s : source->samples) {
    graph.points.push_back(GaussPoint{compactify(s.point), s.tangent});
  }
  return graph;
}

double hyper_distance(const GaussGraph& a, const GaussGraph& b) {
  check_compatible(a, b);
  std::vector<double> h_a = pole_distances(a);
  std::vector<double> h_b = pole_distances(b);
  std::vector<Vector> emb_a = embed_all(a);
  std::vector<Vector> emb_b = embed_all(b);
  return std::max(directed_sup_pruned(a, b, h_b, emb_a, emb_b),
                  directed_sup_pruned(b, a, h_a, emb_b, emb_a));
}

double hyper_distance_bruteforce(const GaussGraph& a, const GaussGraph& b) {
  check_compatible(a, b);
  std::vector<double> h_a = pole_distances(a);
  std::vector<double> h_b = pole_distances(b);
  return std::max(directed_sup_naive(a, b, h_b),
                  directed_sup_naive(b, a, h_a));
}

double gauss_proximity(const SampledManifold& w,
                       const SampledManifold& w_prime, double r) {
  if (w.ambient_dim != w_prime.ambient_dim || w.plane_dim != w_prime.plane_dim) {
    fail(ErrorCode::DimensionMismatch, "manifolds live in different spaces");
  }
  double worst = 0.0;
  bool any_in_range = false;
  for (const Sample& over : w_prime.samples) {
    if (over.point.norm() > r) continue;
    any_in_range = true;
    if (w.empty()) {
      fail(ErrorCode::EmptyReference,
           "reference manifold is empty but the probe has samples in range");
    }
    double best = std::numeric_limits<double>::infinity();
    for (const Sample& base : w.samples) {
      best = std::min(best, (base.point - over.point).norm() +
                                plane_distance(base.tangent, over.tangent));
    }
    worst = std::max(worst, best);
  }
  return any_in_range ? worst : 0.0;
}

}  // namespace gaussfold
