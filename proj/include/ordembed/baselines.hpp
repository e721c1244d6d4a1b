#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ordembed/constraints.hpp"
#include "ordembed/metric.hpp"
#include "ordembed/verifier.hpp"

namespace ordembed {

/// One coordinate per (scale s in 1..ceil(log2 n), repetition): the distance
/// from the point to a uniformly random subset of size 2^(s-1), divided by
/// the number of coordinates. Coordinate c draws from stream (seed, c).
Embedding bourgain_embed(const FiniteMetricSpace& space, std::size_t reps_per_scale, std::uint64_t seed);

/// x -> P x with P a d_out x dim matrix of independent N(0,1) entries scaled
/// by 1/sqrt(d_out).
Embedding jl_project(const Embedding& emb, std::size_t d_out, std::uint64_t seed);

struct FitConfig {
  std::size_t d = 2;
  double margin_rel = 1e-3;    // margin = margin_rel * median squared distance
  double step = 1.0;           // initial Armijo trial step
  std::size_t iterations = 2000;  // per phase, per restart
  std::size_t restarts = 16;
  std::uint64_t seed = 0;
  bool record_trace = false;
};

/// Sum over comparisons of max(0, gamma + |x_a-x_b|^2 - |x_c-x_d|^2).
double hinge_loss(const Embedding& emb, const ConstraintSet& cs, double gamma);

/// Gradient of hinge_loss (a subgradient at kinks), same layout as coords.
std::vector<double> hinge_gradient(const Embedding& emb, const ConstraintSet& cs, double gamma);

/// Median of all pairwise squared distances.
double median_squared_distance(const Embedding& emb);

struct FitResult {
  Embedding emb;
  double loss = 0;    // final hinge loss of the chosen restart
  double margin = 0;  // gamma in force at the end
  std::size_t restart = 0;
  std::size_t violations = 0;  // check_constraints with tie_tol = 0
  std::string status;          // "SAT-in-d" or "UNSAT-in-d not proven"
  std::vector<double> restart_losses;
  /// Hinge loss after every accepted step of the chosen restart, one list
  /// per margin phase (only with record_trace).
  std::vector<std::vector<double>> trace;
};

/// Gradient descent with Armijo backtracking from Gaussian starts. The
/// margin is set from the initial median squared distance, frozen for one
/// phase, then recomputed once from the current embedding for a second
/// phase. The first phase starts with descent on the squared hinge, which
/// is smooth and avoids stalling at kinks, before descending the hinge
/// itself. The lowest loss wins, ties going to the lowest restart index.
FitResult fit_triplets(const FiniteMetricSpace& space, const ConstraintSet& cs, const FitConfig& cfg);

}  // namespace ordembed
