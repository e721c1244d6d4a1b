#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace ordembed {

enum class BoundMode { triplet, terminal_linear, terminal_sublinear, terminal_no_inter, topk_mixed, topk_unmixed };

std::string to_string(BoundMode mode);
BoundMode bound_mode_from_string(const std::string& name);

/// Natural log of 4b(8b-1)^(l+m/b-1) for p = 2, and of
/// 2bp(4bp-1)^(l+m/b-1) otherwise: the number of sign patterns of m
/// polynomials of degree p in l variables. Requires 1 <= beta <= m, l >= 1,
/// p >= 2.
double sign_pattern_log_bound(double m, double l, double beta, double p = 2.0);

/// The l_p form ln[2bp(4bp-1)^(l+m/b-1)] at any p >= 2, including p = 2.
double sign_pattern_log_bound_lp(double m, double l, double beta, double p);

struct OrderingsLog {
  double value = 0;    // natural log
  std::string source;  // "exact" or "superfactorial"
};

/// ln of the number of distinct triplet orders: the exact product for
/// n <= 200, the superfactorial lower bound above that.
OrderingsLog triplet_orderings_log(std::size_t n);

struct BetaCandidate {
  double beta = 1;
  std::optional<double> mu;  // set when beta = round(mu n^x)
  std::optional<double> x;
};

/// {1, 2, 4, ..., m} and m, plus round(mu n^x) for mu in {1,10,100,1000} and
/// x in {1,2}, clipped to [1, m], sorted and deduplicated by beta (the first
/// origin is kept).
std::vector<BetaCandidate> default_beta_grid(double m, std::size_t n);

struct BoundQuery {
  BoundMode mode = BoundMode::triplet;
  std::size_t n = 0;
  std::optional<std::size_t> k;       // wins over lambda
  std::optional<double> lambda;       // k = round(lambda n^(1-beta_exp))
  std::optional<double> beta_exp;     // 0 gives k = lambda n
  std::vector<std::size_t> d_range;   // empty: 1..n-1
  std::vector<BetaCandidate> beta_grid;  // empty: default_beta_grid
  double p = 2.0;
};

struct BoundRow {
  std::size_t d = 0;
  double log_orderings = 0;
  BetaCandidate best_beta;
  double log_sign_bound = 0;
  bool certified = false;  // log_orderings > log_sign_bound
};

struct BoundReport {
  BoundMode mode = BoundMode::triplet;
  std::size_t n = 0;
  std::optional<std::size_t> k;
  double m = 0;  // comparison count
  double log_orderings = 0;
  std::string orderings_source;
  std::size_t certified_d = 0;  // largest d with every d' <= d in range certified
  double certified_ratio = 0;   // certified_d / n
  std::vector<BoundRow> rows;
};

/// Resolves k for modes that need it: explicit k, else round(lambda
/// n^(1-beta_exp)) with per-mode defaults, clipped to [1, n-1].
std::optional<std::size_t> resolve_k(const BoundQuery& q);

BoundReport certify_lower_bound(const BoundQuery& q);

struct RelaxationFloor {
  std::size_t n = 0, d = 0;
  double c = 8;
  double girth_base2 = 0;  // log n / (log d + log log n + c), base 2
  double girth_natural = 0;
  double relaxation_base2 = 0;  // girth - 1
  double relaxation_natural = 0;
};

/// Relaxation forced on d-dimensional triplet embeddings of n-point graph
/// metrics, evaluated in both log bases. Requires n >= 3 and d >= 1.
RelaxationFloor relaxation_floor(std::size_t n, std::size_t d, double c = 8.0);

}  // namespace ordembed
