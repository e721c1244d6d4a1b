#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "ordembed/constraints.hpp"
#include "ordembed/metric.hpp"

namespace ordembed {

/// n x d real coordinates, row-major. Every coordinate is finite.
class Embedding {
 public:
  Embedding() = default;
  Embedding(std::size_t n, std::size_t dim, std::vector<double> coords);
  static Embedding zeros(std::size_t n, std::size_t dim);

  std::size_t size() const { return n_; }
  std::size_t dim() const { return dim_; }
  std::span<const double> row(std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }
  std::span<double> row(std::size_t i) { return {coords_.data() + i * dim_, dim_}; }
  double& at(std::size_t i, std::size_t j) { return coords_[i * dim_ + j]; }
  double at(std::size_t i, std::size_t j) const { return coords_[i * dim_ + j]; }
  const std::vector<double>& coords() const { return coords_; }

  friend bool operator==(const Embedding&, const Embedding&) = default;

 private:
  std::size_t n_ = 0;
  std::size_t dim_ = 0;
  std::vector<double> coords_;
};

inline constexpr double kInfinityNorm = std::numeric_limits<double>::infinity();

/// l_p distance between rows i and j, p in [1, inf].
double embedded_distance(const Embedding& emb, std::size_t i, std::size_t j, double p = 2.0);

struct Violation {
  Comparison comparison;
  double source_gap = 0;    // dist(c,d) - dist(a,b); NaN without a source space
  double embedded_gap = 0;  // |phi(c)-phi(d)| - |phi(a)-phi(b)|
};

struct ViolationReport {
  std::size_t total = 0;
  std::vector<Violation> violated;  // in input order
  /// max(1, largest dist(c,d)/dist(a,b) among violations); only known when a
  /// source space was supplied.
  std::optional<double> max_ratio;
};

struct CheckOptions {
  double p = 2.0;
  double tie_tol = 0.0;
};

/// A comparison (a,b)<(c,d) is violated iff |phi(a)-phi(b)| >= |phi(c)-phi(d)| - tie_tol.
ViolationReport check_constraints(const Embedding& emb, const ConstraintSet& cs, CheckOptions options = {});
ViolationReport check_constraints(const Embedding& emb, const ConstraintSet& cs, const FiniteMetricSpace& space,
                                  CheckOptions options = {});

/// Largest ratio dist(c,d)/dist(a,b) over comparisons with dist(a,b) <
/// dist(c,d) whose embedded order is inverted or tied; exactly 1 when none.
double relaxation(const FiniteMetricSpace& space, const Embedding& emb, const ConstraintSet& cs, double p = 2.0);
double relaxation(const FiniteMetricSpace& space, const Embedding& emb, const FamilySpec& family, double p = 2.0);

/// Scale-free bi-Lipschitz distortion: (max expansion) * (max contraction).
/// Throws ValidationError naming the pair when two points coincide.
double distortion(const FiniteMetricSpace& space, const Embedding& emb, double p = 2.0);

}  // namespace ordembed
