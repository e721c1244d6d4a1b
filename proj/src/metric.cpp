#include "ordembed/metric.hpp"

#include <algorithm>
#include <cmath>
#include <deque>

#include "ordembed/error.hpp"
#include "ordembed/parallel.hpp"

namespace ordembed {

SimpleGraph::SimpleGraph(std::size_t n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)) {
  for (const Edge& e : edges_) {
    if (e.u == e.v) throw ValidationError("self-loop at vertex " + std::to_string(e.u));
    if (e.v >= n_) {
      throw ValidationError("edge (" + std::to_string(e.u) + "," + std::to_string(e.v) +
                            ") out of range for n=" + std::to_string(n_));
    }
  }
  std::sort(edges_.begin(), edges_.end());
  auto dup = std::adjacent_find(edges_.begin(), edges_.end());
  if (dup != edges_.end()) {
    throw ValidationError("duplicate edge (" + std::to_string(dup->u) + "," + std::to_string(dup->v) + ")");
  }

  std::vector<std::size_t> degree(n_, 0);
  for (const Edge& e : edges_) {
    ++degree[e.u];
    ++degree[e.v];
  }
  offsets_.assign(n_ + 1, 0);
  for (std::size_t v = 0; v < n_; ++v) offsets_[v + 1] = offsets_[v] + degree[v];
  adjacency_.resize(offsets_[n_]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const Edge& e : edges_) {
    adjacency_[fill[e.u]++] = e.v;
    adjacency_[fill[e.v]++] = e.u;
  }
  for (std::size_t v = 0; v < n_; ++v) {
    std::sort(adjacency_.begin() + offsets_[v], adjacency_.begin() + offsets_[v + 1]);
  }
}

bool SimpleGraph::has_edge(std::size_t a, std::size_t b) const {
  if (a >= n_ || b >= n_) return false;
  auto nb = neighbors(a);
  return std::binary_search(nb.begin(), nb.end(), b);
}

FiniteMetricSpace::FiniteMetricSpace(std::size_t n, std::vector<double> matrix) : n_(n), dist_(std::move(matrix)) {
  if (n_ == 0) throw ValidationError("metric space needs at least one point");
  if (dist_.size() != n_ * n_) {
    throw ValidationError("distance matrix has " + std::to_string(dist_.size()) + " entries, expected " +
                          std::to_string(n_ * n_));
  }
  for (double x : dist_) {
    if (std::isnan(x)) throw ValidationError("distance matrix contains NaN");
  }
}

FiniteMetricSpace FiniteMetricSpace::from_upper_triangle(std::size_t n, std::span<const double> upper) {
  if (n == 0) throw ValidationError("metric space needs at least one point");
  if (upper.size() != n * (n - 1) / 2) {
    throw ValidationError("upper triangle has " + std::to_string(upper.size()) + " entries, expected " +
                          std::to_string(n * (n - 1) / 2));
  }
  std::vector<double> m(n * n, 0.0);
  std::size_t idx = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++idx) {
      m[i * n + j] = upper[idx];
      m[j * n + i] = upper[idx];
    }
  }
  return FiniteMetricSpace(n, std::move(m));
}

std::vector<double> FiniteMetricSpace::upper_triangle() const {
  std::vector<double> out;
  out.reserve(n_ * (n_ - 1) / 2);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) out.push_back((*this)(i, j));
  }
  return out;
}

bool FiniteMetricSpace::all_finite() const {
  return std::all_of(dist_.begin(), dist_.end(), [](double x) { return std::isfinite(x); });
}

std::vector<double> bfs_distances(const SimpleGraph& g, std::size_t source, std::size_t max_depth) {
  std::vector<double> dist(g.vertex_count(), kInfiniteDistance);
  std::vector<std::size_t> hops(g.vertex_count(), 0);
  std::deque<std::size_t> queue{source};
  dist[source] = 0;
  while (!queue.empty()) {
    const std::size_t u = queue.front();
    queue.pop_front();
    if (hops[u] >= max_depth) continue;
    for (std::size_t w : g.neighbors(u)) {
      if (std::isinf(dist[w])) {
        hops[w] = hops[u] + 1;
        dist[w] = static_cast<double>(hops[w]);
        queue.push_back(w);
      }
    }
  }
  return dist;
}

FiniteMetricSpace metric_from_graph(const SimpleGraph& g, std::optional<double> disconnected_cap) {
  const std::size_t n = g.vertex_count();
  if (n == 0) throw ValidationError("graph has no vertices");
  if (disconnected_cap && !(*disconnected_cap > 0)) throw ValidationError("disconnected cap must be positive");
  std::vector<double> m(n * n);
  parallel_for(n, [&](std::size_t s) {
    auto d = bfs_distances(g, s);
    for (std::size_t t = 0; t < n; ++t) {
      m[s * n + t] = (std::isinf(d[t]) && disconnected_cap) ? *disconnected_cap : d[t];
    }
  });
  return FiniteMetricSpace(n, std::move(m));
}

std::optional<std::size_t> girth(const SimpleGraph& g) {
  const std::size_t n = g.vertex_count();
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  std::size_t best = kNone;
  std::vector<std::size_t> dist(n), parent(n);
  std::deque<std::size_t> queue;
  for (std::size_t s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), kNone);
    dist[s] = 0;
    parent[s] = kNone;
    queue.assign({s});
    while (!queue.empty()) {
      const std::size_t u = queue.front();
      queue.pop_front();
      // Closed walks found from here on have length >= 2*dist[u].
      if (best != kNone && 2 * dist[u] >= best) break;
      for (std::size_t w : g.neighbors(u)) {
        if (dist[w] == kNone) {
          dist[w] = dist[u] + 1;
          parent[w] = u;
          queue.push_back(w);
        } else if (w != parent[u]) {
          best = std::min(best, dist[u] + dist[w] + 1);
        }
      }
    }
  }
  if (best == kNone) return std::nullopt;
  return best;
}

std::string to_string(MetricViolationKind kind) {
  switch (kind) {
    case MetricViolationKind::asymmetry: return "asymmetry";
    case MetricViolationKind::nonzero_diagonal: return "nonzero_diagonal";
    case MetricViolationKind::nonpositive_distance: return "nonpositive_distance";
    case MetricViolationKind::triangle: return "triangle";
  }
  return "unknown";
}

MetricReport check_metric(const FiniteMetricSpace& space, double tol) {
  const std::size_t n = space.size();
  MetricReport report;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(space(i, i)) > tol) {
      report.violations.push_back({MetricViolationKind::nonzero_diagonal, i, i, i, std::abs(space(i, i))});
    }
    for (std::size_t j = i + 1; j < n; ++j) {
      const double a = space(i, j), b = space(j, i);
      if (std::abs(a - b) > tol && !(std::isinf(a) && a == b)) {
        report.violations.push_back({MetricViolationKind::asymmetry, i, j, i, std::abs(a - b)});
      }
      if (!(a > 0) || !(b > 0)) {
        report.violations.push_back({MetricViolationKind::nonpositive_distance, i, j, i, -std::min(a, b)});
      }
    }
  }

  // Triangle checks dominate the cost; rows are independent.
  std::vector<std::vector<MetricViolation>> per_row(n);
  parallel_for(n, [&](std::size_t i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double direct = space(i, j);
      for (std::size_t k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        const double detour = space(i, k) + space(k, j);
        if (direct > detour + tol) per_row[i].push_back({MetricViolationKind::triangle, i, j, k, direct - detour});
      }
    }
  });
  for (auto& row : per_row) {
    report.violations.insert(report.violations.end(), row.begin(), row.end());
  }
  return report;
}

}  // namespace ordembed
