#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "ordembed/metric.hpp"
#include "ordembed/verifier.hpp"

namespace ordembed {

enum class TieBreak { error, lexicographic };

/// Ranks of all terminal-to-nonterminal distances: a bijection onto
/// 1..k(n-k) that respects the distance order.
class RankTable {
 public:
  RankTable(std::size_t n, std::vector<std::size_t> terminals, std::vector<std::uint64_t> ranks);

  std::size_t point_count() const { return n_; }
  std::size_t terminal_count() const { return terminals_.size(); }
  /// Sorted ascending; position i is terminal t_i.
  const std::vector<std::size_t>& terminals() const { return terminals_; }
  bool is_terminal(std::size_t v) const { return terminal_position_[v] >= 0; }
  /// Position of terminal t in terminals(), or -1.
  long position(std::size_t t) const { return terminal_position_[t]; }

  /// Rank of dist(t_i, v) where i is a terminal position and v a non-terminal.
  std::uint64_t rank(std::size_t terminal_index, std::size_t v) const { return ranks_[terminal_index * n_ + v]; }

 private:
  std::size_t n_;
  std::vector<std::size_t> terminals_;
  std::vector<long> terminal_position_;
  std::vector<std::uint64_t> ranks_;  // k x n, zero in terminal columns
};

/// Sorts all terminal-to-nonterminal distances ascending. Equal distances
/// throw TieError under `error` and are ordered by (terminal, point) under
/// `lexicographic`.
RankTable rank_table(const FiniteMetricSpace& space, std::vector<std::size_t> terminals,
                     TieBreak tie_break = TieBreak::error);

struct TerminalEmbedding {
  Embedding emb;  // dimension k
  std::uint64_t M = 0;
  double p = 2.0;
  RankTable ranks;
};

/// Smallest offset accepted for the l_p construction. For p = 2 this is
/// k^3 n^2; for 1 < p < inf it is ceil((k (kn)^p)^(1/(p-1))), and kn for
/// p = inf. The l_1 norm is rejected: every terminal then sees the same
/// distance to a given point.
std::uint64_t minimum_offset(std::size_t k, std::size_t n, double p = 2.0);

/// Terminal t_i goes to -M e_i and non-terminal v to (r(t_1,v), ..., r(t_k,v)).
/// M defaults to minimum_offset; smaller M is rejected.
TerminalEmbedding embed_terminals(const FiniteMetricSpace& space, std::vector<std::size_t> terminals,
                                  std::optional<std::uint64_t> M = std::nullopt, TieBreak tie_break = TieBreak::error,
                                  double p = 2.0);

struct DominanceEntry {
  std::size_t terminal = 0;
  std::size_t point = 0;
  std::uint64_t rank = 0;
  std::string problem;
};

struct DominanceReport {
  std::size_t pairs_checked = 0;
  boost::multiprecision::cpp_int max_rank_mass;  // max over (t,v) of C(t,v) = sum_s r(s,v)^2
  boost::multiprecision::cpp_int bound;          // k^3 n^2
  std::vector<DominanceEntry> mismatches;
  bool ok() const { return mismatches.empty(); }
};

/// Exact integer audit of a terminal embedding: row layout, the identity
/// |f(v)-f(t)|^2 = C(t,v) + 2 r(t,v) M + M^2 (p = 2), C(t,v) <= k^3 n^2, the
/// rank order of the ranked distances against dist, and strictly increasing
/// embedded distances along the rank order (p-th powers for integer p).
DominanceReport dominance_check(const TerminalEmbedding& te, const FiniteMetricSpace& space);

}  // namespace ordembed
