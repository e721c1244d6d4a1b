#include "ordembed/verifier.hpp"

#include <algorithm>
#include <cmath>

#include "ordembed/error.hpp"
#include "ordembed/parallel.hpp"

namespace ordembed {
namespace {

constexpr std::size_t kDenseCacheLimit = 2048;

void check_norm(double p) {
  if (!(p >= 1.0)) throw ValidationError("norm exponent must be >= 1");
}

/// Pairwise embedded distances, dense for small n and computed on demand
/// otherwise.
class DistanceTable {
 public:
  DistanceTable(const Embedding& emb, double p) : emb_(emb), p_(p) {
    const std::size_t n = emb.size();
    if (n <= kDenseCacheLimit) {
      cache_.assign(n * n, 0.0);
      parallel_for(n, [&](std::size_t i) {
        for (std::size_t j = 0; j < n; ++j) cache_[i * n + j] = embedded_distance(emb_, i, j, p_);
      });
    }
  }

  double operator()(std::size_t i, std::size_t j) const {
    if (!cache_.empty()) return cache_[i * emb_.size() + j];
    return embedded_distance(emb_, i, j, p_);
  }

 private:
  const Embedding& emb_;
  double p_;
  std::vector<double> cache_;
};

void check_indices(const Embedding& emb, const ConstraintSet& cs) {
  const std::size_t n = emb.size();
  for (std::size_t i = 0; i < cs.comparisons.size(); ++i) {
    const Comparison& c = cs.comparisons[i];
    if (c.a >= n || c.b >= n || c.c >= n || c.d >= n) {
      throw ValidationError("comparisons[" + std::to_string(i) + "] references a point outside the embedding (n=" +
                            std::to_string(n) + ")");
    }
  }
}

ViolationReport check_impl(const Embedding& emb, const ConstraintSet& cs, const FiniteMetricSpace* space,
                           CheckOptions options) {
  check_norm(options.p);
  if (!(options.tie_tol >= 0)) throw ValidationError("tie tolerance must be nonnegative");
  check_indices(emb, cs);
  const DistanceTable table(emb, options.p);
  const auto& comparisons = cs.comparisons;

  std::vector<std::vector<Violation>> chunks(chunk_count(comparisons.size()));
  parallel_chunks(comparisons.size(), [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const Comparison& c = comparisons[i];
      const double near = table(c.a, c.b), far = table(c.c, c.d);
      if (near >= far - options.tie_tol) {
        const double source_gap = space ? (*space)(c.c, c.d) - (*space)(c.a, c.b) : std::nan("");
        chunks[chunk].push_back({c, source_gap, far - near});
      }
    }
  });

  ViolationReport report;
  report.total = comparisons.size();
  for (auto& c : chunks) report.violated.insert(report.violated.end(), c.begin(), c.end());
  if (space) {
    double worst = 1.0;
    for (const Violation& v : report.violated) {
      const Comparison& c = v.comparison;
      worst = std::max(worst, (*space)(c.c, c.d) / (*space)(c.a, c.b));
    }
    report.max_ratio = worst;
  }
  return report;
}

}  // namespace

Embedding::Embedding(std::size_t n, std::size_t dim, std::vector<double> coords)
    : n_(n), dim_(dim), coords_(std::move(coords)) {
  if (dim_ == 0) throw ValidationError("embedding dimension must be >= 1");
  if (coords_.size() != n_ * dim_) {
    throw ValidationError("embedding has " + std::to_string(coords_.size()) + " coordinates, expected " +
                          std::to_string(n_ * dim_));
  }
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (!std::isfinite(coords_[i])) {
      throw ValidationError("coords[" + std::to_string(i / dim_) + "][" + std::to_string(i % dim_) +
                            "] is not finite");
    }
  }
}

Embedding Embedding::zeros(std::size_t n, std::size_t dim) { return Embedding(n, dim, std::vector<double>(n * dim)); }

double embedded_distance(const Embedding& emb, std::size_t i, std::size_t j, double p) {
  auto x = emb.row(i), y = emb.row(j);
  if (std::isinf(p)) {
    double m = 0;
    for (std::size_t k = 0; k < x.size(); ++k) m = std::max(m, std::abs(x[k] - y[k]));
    return m;
  }
  double s = 0;
  if (p == 2.0) {
    for (std::size_t k = 0; k < x.size(); ++k) s += (x[k] - y[k]) * (x[k] - y[k]);
    return std::sqrt(s);
  }
  if (p == 1.0) {
    for (std::size_t k = 0; k < x.size(); ++k) s += std::abs(x[k] - y[k]);
    return s;
  }
  for (std::size_t k = 0; k < x.size(); ++k) s += std::pow(std::abs(x[k] - y[k]), p);
  return std::pow(s, 1.0 / p);
}

ViolationReport check_constraints(const Embedding& emb, const ConstraintSet& cs, CheckOptions options) {
  return check_impl(emb, cs, nullptr, options);
}

ViolationReport check_constraints(const Embedding& emb, const ConstraintSet& cs, const FiniteMetricSpace& space,
                                  CheckOptions options) {
  if (space.size() != emb.size()) throw ValidationError("metric and embedding sizes differ");
  return check_impl(emb, cs, &space, options);
}

double relaxation(const FiniteMetricSpace& space, const Embedding& emb, const ConstraintSet& cs, double p) {
  check_norm(p);
  if (space.size() != emb.size()) throw ValidationError("metric and embedding sizes differ");
  check_indices(emb, cs);
  const DistanceTable table(emb, p);
  const auto& comparisons = cs.comparisons;
  std::vector<double> chunk_max(chunk_count(comparisons.size()), 1.0);
  parallel_chunks(comparisons.size(), [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    double worst = 1.0;
    for (std::size_t i = begin; i < end; ++i) {
      const Comparison& c = comparisons[i];
      const double near = space(c.a, c.b), far = space(c.c, c.d);
      if (near < far && table(c.a, c.b) >= table(c.c, c.d)) worst = std::max(worst, far / near);
    }
    chunk_max[chunk] = worst;
  });
  double worst = 1.0;
  for (double m : chunk_max) worst = std::max(worst, m);
  return worst;
}

double relaxation(const FiniteMetricSpace& space, const Embedding& emb, const FamilySpec& family, double p) {
  FamilySpec spec = family;
  spec.ties = TiePolicy::skip;
  return relaxation(space, emb, extract(space, spec), p);
}

double distortion(const FiniteMetricSpace& space, const Embedding& emb, double p) {
  check_norm(p);
  const std::size_t n = space.size();
  if (n < 2) throw ValidationError("distortion needs at least two points");
  if (emb.size() != n) throw ValidationError("metric and embedding sizes differ");
  double expansion = 0, contraction = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double e = embedded_distance(emb, i, j, p);
      if (e == 0) {
        throw ValidationError("points " + std::to_string(i) + " and " + std::to_string(j) +
                              " coincide in the embedding");
      }
      const double d = space(i, j);
      expansion = std::max(expansion, e / d);
      contraction = std::max(contraction, d / e);
    }
  }
  return expansion * contraction;
}

}  // namespace ordembed
