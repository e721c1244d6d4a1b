#include "ordembed/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "ordembed/constraints.hpp"
#include "ordembed/error.hpp"
#include "ordembed/numeric.hpp"
#include "ordembed/parallel.hpp"

namespace ordembed {
namespace {

constexpr std::size_t kExactTripletLimit = 200;

bool needs_k(BoundMode mode) { return mode != BoundMode::triplet; }

double choose2(double x) { return x * (x - 1.0) / 2.0; }

/// Number of distinct terminal distances, sum_{i=1}^{k} (n - i).
double distinct_terminal_distances(std::size_t n, std::size_t k) {
  return static_cast<double>(k) * static_cast<double>(n) - static_cast<double>(k) * static_cast<double>(k + 1) / 2.0;
}

struct ModeCounts {
  double log_orderings = 0;
  std::string source;
  double m = 0;
};

ModeCounts mode_counts(BoundMode mode, std::size_t n, std::optional<std::size_t> k) {
  ModeCounts c;
  const double nd = static_cast<double>(n);
  switch (mode) {
    case BoundMode::triplet: {
      const OrderingsLog o = triplet_orderings_log(n);
      c.log_orderings = o.value;
      c.source = o.source;
      c.m = nd * choose2(nd - 1.0);
      return c;
    }
    case BoundMode::terminal_linear:
    case BoundMode::terminal_sublinear: {
      const double D = distinct_terminal_distances(n, *k);
      c.log_orderings = log_factorial(D);
      c.source = "log-gamma";
      c.m = choose2(D);
      return c;
    }
    case BoundMode::terminal_no_inter: {
      CompensatedSum s;
      for (std::size_t i = 1; i <= *k; ++i) s += log_factorial(static_cast<double>(n - i));
      c.log_orderings = s.value();
      c.source = "log-gamma";
      c.m = choose2(distinct_terminal_distances(n, *k));
      return c;
    }
    case BoundMode::topk_mixed: {
      const double kd = static_cast<double>(*k);
      c.log_orderings = log_factorial(nd * kd - kd * kd);
      c.source = "log-gamma";
      c.m = choose2(nd * kd);
      return c;
    }
    case BoundMode::topk_unmixed: {
      const double kd = static_cast<double>(*k);
      c.log_orderings = nd * log_factorial(kd);
      c.source = "log-gamma";
      c.m = choose2(nd * kd);
      return c;
    }
  }
  throw ValidationError("unknown bound mode");
}

}  // namespace

std::string to_string(BoundMode mode) {
  switch (mode) {
    case BoundMode::triplet: return "triplet";
    case BoundMode::terminal_linear: return "terminal_linear";
    case BoundMode::terminal_sublinear: return "terminal_sublinear";
    case BoundMode::terminal_no_inter: return "terminal_no_inter";
    case BoundMode::topk_mixed: return "topk_mixed";
    case BoundMode::topk_unmixed: return "topk_unmixed";
  }
  return "unknown";
}

BoundMode bound_mode_from_string(const std::string& name) {
  for (BoundMode m : {BoundMode::triplet, BoundMode::terminal_linear, BoundMode::terminal_sublinear,
                      BoundMode::terminal_no_inter, BoundMode::topk_mixed, BoundMode::topk_unmixed}) {
    if (to_string(m) == name) return m;
  }
  throw ValidationError("unknown bound mode '" + name + "'");
}

namespace {

void check_sign_args(double m, double l, double beta, double p) {
  if (!(m >= 1)) throw ValidationError("polynomial count m must be >= 1");
  if (!(beta >= 1 && beta <= m)) {
    throw ValidationError("beta=" + std::to_string(beta) + " outside [1, m=" + std::to_string(m) + "]");
  }
  if (!(l >= 1)) throw ValidationError("variable count l must be >= 1");
  if (!(p >= 2)) throw ValidationError("polynomial degree p must be >= 2");
}

}  // namespace

double sign_pattern_log_bound(double m, double l, double beta, double p) {
  check_sign_args(m, l, beta, p);
  if (p != 2.0) return sign_pattern_log_bound_lp(m, l, beta, p);
  return std::log(4.0 * beta) + (l + m / beta - 1.0) * std::log(8.0 * beta - 1.0);
}

double sign_pattern_log_bound_lp(double m, double l, double beta, double p) {
  check_sign_args(m, l, beta, p);
  return std::log(2.0 * beta * p) + (l + m / beta - 1.0) * std::log(4.0 * beta * p - 1.0);
}

OrderingsLog triplet_orderings_log(std::size_t n) {
  if (n < 3) throw ValidationError("triplet orderings need n >= 3");
  if (n <= kExactTripletLimit) return {log_big(count_triplet_orderings_exact(n)), "exact"};
  return {log_superfactorial(n), "superfactorial"};
}

std::vector<BetaCandidate> default_beta_grid(double m, std::size_t n) {
  if (!(m >= 1)) throw ValidationError("polynomial count m must be >= 1");
  std::vector<BetaCandidate> grid;
  for (double b = 1; b <= m; b *= 2) grid.push_back({b, {}, {}});
  grid.push_back({m, {}, {}});
  for (double mu : {1.0, 10.0, 100.0, 1000.0}) {
    for (double x : {1.0, 2.0}) {
      const double b = std::clamp(std::round(mu * std::pow(static_cast<double>(n), x)), 1.0, m);
      grid.push_back({b, mu, x});
    }
  }
  std::stable_sort(grid.begin(), grid.end(),
                   [](const BetaCandidate& a, const BetaCandidate& b) { return a.beta < b.beta; });
  grid.erase(std::unique(grid.begin(), grid.end(),
                         [](const BetaCandidate& a, const BetaCandidate& b) { return a.beta == b.beta; }),
             grid.end());
  return grid;
}

std::optional<std::size_t> resolve_k(const BoundQuery& q) {
  if (!needs_k(q.mode)) return std::nullopt;
  if (q.n < 2) throw ValidationError("n must be >= 2");
  if (q.k) {
    if (*q.k < 1 || *q.k >= q.n) throw ValidationError("k must lie in [1, n-1]");
    return q.k;
  }
  const bool sublinear_default =
      q.mode == BoundMode::terminal_sublinear || q.mode == BoundMode::topk_mixed || q.mode == BoundMode::topk_unmixed;
  const double lambda = q.lambda.value_or(sublinear_default ? 1.0 : 0.5);
  const double beta_exp = q.beta_exp.value_or(sublinear_default ? 0.5 : 0.0);
  if (!(lambda > 0)) throw ValidationError("lambda must be positive");
  if (!(beta_exp >= 0 && beta_exp < 1)) throw ValidationError("beta_exp must lie in [0, 1)");
  const double raw = std::round(lambda * std::pow(static_cast<double>(q.n), 1.0 - beta_exp));
  return static_cast<std::size_t>(std::clamp(raw, 1.0, static_cast<double>(q.n - 1)));
}

BoundReport certify_lower_bound(const BoundQuery& q) {
  if (q.mode == BoundMode::triplet && q.n < 3) throw ValidationError("triplet mode needs n >= 3");
  if (q.n < 2) throw ValidationError("n must be >= 2");
  if (!(q.p >= 2)) throw ValidationError("p must be >= 2");
  const std::optional<std::size_t> k = resolve_k(q);
  const ModeCounts counts = mode_counts(q.mode, q.n, k);
  if (!(counts.m >= 1)) throw ValidationError("mode has fewer than one comparison");

  std::vector<std::size_t> ds = q.d_range;
  if (ds.empty()) {
    for (std::size_t d = 1; d < q.n; ++d) ds.push_back(d);
  }
  std::sort(ds.begin(), ds.end());
  ds.erase(std::unique(ds.begin(), ds.end()), ds.end());
  if (ds.front() < 1 || ds.back() >= q.n) throw ValidationError("d_range must lie in [1, n)");

  std::vector<BetaCandidate> grid = q.beta_grid.empty() ? default_beta_grid(counts.m, q.n) : q.beta_grid;
  for (const BetaCandidate& b : grid) {
    if (!(b.beta >= 1 && b.beta <= counts.m)) {
      throw ValidationError("beta grid value " + std::to_string(b.beta) + " outside [1, m]");
    }
  }

  BoundReport report;
  report.mode = q.mode;
  report.n = q.n;
  report.k = k;
  report.m = counts.m;
  report.log_orderings = counts.log_orderings;
  report.orderings_source = counts.source;
  report.rows.resize(ds.size());
  parallel_for(ds.size(), [&](std::size_t idx) {
    BoundRow& row = report.rows[idx];
    row.d = ds[idx];
    row.log_orderings = counts.log_orderings;
    const double l = static_cast<double>(q.n) * static_cast<double>(row.d);
    bool first = true;
    for (const BetaCandidate& b : grid) {
      const double v = sign_pattern_log_bound(counts.m, l, b.beta, q.p);
      if (first || v < row.log_sign_bound) {
        row.log_sign_bound = v;
        row.best_beta = b;
        first = false;
      }
    }
    row.certified = row.log_orderings > row.log_sign_bound;
  });
  for (const BoundRow& row : report.rows) {
    if (!row.certified) break;
    report.certified_d = row.d;
  }
  report.certified_ratio = static_cast<double>(report.certified_d) / static_cast<double>(q.n);
  return report;
}

RelaxationFloor relaxation_floor(std::size_t n, std::size_t d, double c) {
  if (n < 3) throw ValidationError("relaxation floor needs n >= 3");
  if (d < 1) throw ValidationError("relaxation floor needs d >= 1");
  RelaxationFloor r;
  r.n = n;
  r.d = d;
  r.c = c;
  const double nd = static_cast<double>(n), dd = static_cast<double>(d);
  r.girth_base2 = std::log2(nd) / (std::log2(dd) + std::log2(std::log2(nd)) + c);
  r.girth_natural = std::log(nd) / (std::log(dd) + std::log(std::log(nd)) + c);
  r.relaxation_base2 = r.girth_base2 - 1.0;
  r.relaxation_natural = r.girth_natural - 1.0;
  return r;
}

}  // namespace ordembed
