#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ordembed/metric.hpp"

namespace ordembed {

/// The ordered comparison dist(a,b) < dist(c,d).
///
/// Orientation inside each pair is fixed by the family: the anchor (triplet,
/// top-k) or the terminal comes first; the full family writes a < b and c < d.
struct Comparison {
  std::uint32_t a = 0, b = 0, c = 0, d = 0;

  friend auto operator<=>(const Comparison&, const Comparison&) = default;
};

enum class Family { triplet, terminal, topk_mixed, topk_unmixed, full };

std::string to_string(Family family);
Family family_from_string(const std::string& name);

enum class TiePolicy { skip, error };

struct ConstraintSet {
  Family family = Family::triplet;
  std::vector<Comparison> comparisons;  // sorted lexicographically
  std::vector<std::size_t> terminals;   // terminal family (and terminal-restricted triplets)
  std::optional<std::size_t> k;         // top-k families
};

/// Parameters needed to regenerate a family from a metric space.
struct FamilySpec {
  Family family = Family::triplet;
  std::vector<std::size_t> terminals;
  std::size_t k = 1;
  TiePolicy ties = TiePolicy::skip;
};

/// For each anchor x and pair {y,z}, emits (x,y)<(x,z) when dist(x,y) <
/// dist(x,z). Exact ties emit nothing under `skip` and throw TieError under
/// `error`.
ConstraintSet extract_triplets(const FiniteMetricSpace& space, TiePolicy ties = TiePolicy::skip);

/// All pairs of terminal-to-nonterminal distances, same-terminal pairs
/// included. T must be a nonempty strict subset of the points.
ConstraintSet extract_terminal(const FiniteMetricSpace& space, std::vector<std::size_t> terminals,
                               TiePolicy ties = TiePolicy::error);

/// The k nearest neighbours of each point, sorted by (distance, index).
/// A tie between the k-th and (k+1)-th neighbour throws TieError under
/// `error`; under `skip` the lower index wins.
std::vector<std::vector<std::size_t>> nearest_neighbors(const FiniteMetricSpace& space, std::size_t k,
                                                        TiePolicy ties);

/// Top-k nearest-neighbour comparisons. With `mixed`, every two distinct
/// neighbour pairs are compared (each unordered pair counted once); without,
/// only pairs sharing the anchor.
ConstraintSet extract_topk(const FiniteMetricSpace& space, std::size_t k, bool mixed,
                           TiePolicy ties = TiePolicy::error);

/// Every pair of distinct unordered point pairs.
ConstraintSet extract_full(const FiniteMetricSpace& space, TiePolicy ties = TiePolicy::skip);

ConstraintSet extract(const FiniteMetricSpace& space, const FamilySpec& spec);

/// Triplets anchored at a terminal whose two targets are both non-terminals.
/// The result keeps the triplet family and records the terminals.
ConstraintSet restrict_triplets_to_terminals(const ConstraintSet& triplets, const std::vector<std::size_t>& terminals);

/// Checks the structural invariants of cs.family for n points; throws
/// ValidationError naming the offending comparison index.
void validate_constraints(const ConstraintSet& cs, std::size_t n);

/// Indices of comparisons that are not strictly true in `space`.
std::vector<std::size_t> inconsistent_comparisons(const ConstraintSet& cs, const FiniteMetricSpace& space);

/// Adds eps * U[0,1) to every off-diagonal distance (symmetrically), seeded.
/// Used to break ties before neighbour extraction.
FiniteMetricSpace jitter(const FiniteMetricSpace& space, double eps, std::uint64_t seed);

/// Product over i = 0..n-2 of (n-1+i)! / (2i)!, the closed form quoted for
/// the number of distinct triplet orders.
boost::multiprecision::cpp_int count_triplet_orderings_exact(std::size_t n);

/// Number of distinct triplet-comparison patterns obtained by projecting all
/// C(n,2)! total orders of the pairwise distances. Only n in [3,5].
std::uint64_t count_triplet_orderings_brute_force(std::size_t n);

/// ln G(n+1) = sum_{i=1}^{n-1} ln(i!), with compensated summation.
double log_superfactorial(std::size_t n);

/// Natural log of a positive big integer.
double log_big(const boost::multiprecision::cpp_int& x);

}  // namespace ordembed
