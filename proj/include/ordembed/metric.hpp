#pragma once

#include <compare>
#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ordembed {

/// Distance between points in different components of a graph.
inline constexpr double kInfiniteDistance = std::numeric_limits<double>::infinity();

/// Undirected edge with u < v.
struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;

  Edge() = default;
  Edge(std::size_t a, std::size_t b) : u(a < b ? a : b), v(a < b ? b : a) {}

  bool touches(std::size_t x) const { return u == x || v == x; }
  std::size_t other(std::size_t x) const { return x == u ? v : u; }

  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Undirected, unweighted simple graph on vertices 0..n-1. Immutable after
/// construction; edges are stored sorted.
class SimpleGraph {
 public:
  SimpleGraph() = default;

  /// Throws ValidationError on self-loops, duplicate edges or out-of-range
  /// endpoints.
  SimpleGraph(std::size_t n, std::vector<Edge> edges);

  std::size_t vertex_count() const { return n_; }
  std::size_t edge_count() const { return edges_.size(); }
  const std::vector<Edge>& edges() const { return edges_; }
  std::span<const std::size_t> neighbors(std::size_t v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }
  bool has_edge(std::size_t a, std::size_t b) const;

  friend bool operator==(const SimpleGraph& x, const SimpleGraph& y) {
    return x.n_ == y.n_ && x.edges_ == y.edges_;
  }

 private:
  std::size_t n_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_{0};
  std::vector<std::size_t> adjacency_;
};

/// n points with a dense distance matrix. The constructor checks shape and
/// NaNs only: axioms are reported by check_metric, since violations are data.
class FiniteMetricSpace {
 public:
  FiniteMetricSpace() = default;

  /// Row-major n*n matrix.
  FiniteMetricSpace(std::size_t n, std::vector<double> matrix);

  /// Symmetric space from the row-major upper triangle (length n(n-1)/2).
  static FiniteMetricSpace from_upper_triangle(std::size_t n, std::span<const double> upper);

  std::size_t size() const { return n_; }
  double operator()(std::size_t i, std::size_t j) const { return dist_[i * n_ + j]; }
  std::span<const double> row(std::size_t i) const { return {dist_.data() + i * n_, n_}; }
  const std::vector<double>& matrix() const { return dist_; }
  std::vector<double> upper_triangle() const;
  bool all_finite() const;

 private:
  std::size_t n_ = 0;
  std::vector<double> dist_;
};

/// Hop distances from `source`; unreachable vertices get kInfiniteDistance.
/// `max_depth` stops the search early (vertices beyond it stay infinite).
std::vector<double> bfs_distances(const SimpleGraph& g, std::size_t source,
                                  std::size_t max_depth = std::numeric_limits<std::size_t>::max());

/// Shortest-path metric. Disconnected pairs get `disconnected_cap`, or
/// kInfiniteDistance when no cap is given.
FiniteMetricSpace metric_from_graph(const SimpleGraph& g, std::optional<double> disconnected_cap = std::nullopt);

/// Length of the shortest cycle, nullopt for forests.
std::optional<std::size_t> girth(const SimpleGraph& g);

enum class MetricViolationKind { asymmetry, nonzero_diagonal, nonpositive_distance, triangle };

std::string to_string(MetricViolationKind kind);

struct MetricViolation {
  MetricViolationKind kind;
  std::size_t i = 0;
  std::size_t j = 0;
  std::size_t k = 0;  // middle point for triangle violations
  double excess = 0;  // amount by which the axiom fails
};

struct MetricReport {
  std::vector<MetricViolation> violations;
  bool ok() const { return violations.empty(); }
};

/// Lists every violated axiom with witnessing indices. Triangle violations
/// are reported as dist(i,j) > dist(i,k) + dist(k,j) + tol with i < j.
MetricReport check_metric(const FiniteMetricSpace& space, double tol = 1e-9);

}  // namespace ordembed
