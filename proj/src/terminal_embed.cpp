#include "ordembed/terminal_embed.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "ordembed/error.hpp"

namespace ordembed {
namespace {

using boost::multiprecision::cpp_int;

constexpr std::uint64_t kMaxExactInteger = std::uint64_t{1} << 53;

std::string pair_name(std::size_t t, std::size_t v) {
  return "(" + std::to_string(t) + "," + std::to_string(v) + ")";
}

cpp_int exact(double x) { return cpp_int(static_cast<long long>(x)); }

bool is_integer_exponent(double p) { return std::isfinite(p) && p == std::floor(p) && p <= 64; }

cpp_int power(const cpp_int& base, unsigned exponent) {
  cpp_int r = 1;
  for (unsigned i = 0; i < exponent; ++i) r *= base;
  return r;
}

}  // namespace

RankTable::RankTable(std::size_t n, std::vector<std::size_t> terminals, std::vector<std::uint64_t> ranks)
    : n_(n), terminals_(std::move(terminals)), terminal_position_(n, -1), ranks_(std::move(ranks)) {
  if (ranks_.size() != terminals_.size() * n_) throw ValidationError("rank table has the wrong shape");
  for (std::size_t i = 0; i < terminals_.size(); ++i) terminal_position_[terminals_[i]] = static_cast<long>(i);
}

RankTable rank_table(const FiniteMetricSpace& space, std::vector<std::size_t> terminals, TieBreak tie_break) {
  const std::size_t n = space.size();
  std::sort(terminals.begin(), terminals.end());
  if (terminals.empty()) throw ValidationError("terminal set must be nonempty");
  if (std::adjacent_find(terminals.begin(), terminals.end()) != terminals.end()) {
    throw ValidationError("terminal set contains duplicates");
  }
  if (terminals.back() >= n) throw ValidationError("terminal " + std::to_string(terminals.back()) + " out of range");
  if (terminals.size() >= n) throw ValidationError("T must be a strict subset of the points");

  const std::size_t k = terminals.size();
  std::vector<bool> is_terminal(n, false);
  for (std::size_t t : terminals) is_terminal[t] = true;

  struct Entry {
    double dist;
    std::size_t terminal_index, point;
  };
  std::vector<Entry> entries;
  entries.reserve(k * (n - k));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t v = 0; v < n; ++v) {
      if (is_terminal[v]) continue;
      const double d = space(terminals[i], v);
      if (!std::isfinite(d)) {
        throw ValidationError("distance" + pair_name(terminals[i], v) + " is not finite");
      }
      entries.push_back({d, i, v});
    }
  }
  // Terminals are sorted, so (terminal_index, point) order is (t, v) order.
  std::sort(entries.begin(), entries.end(), [](const Entry& x, const Entry& y) {
    if (x.dist != y.dist) return x.dist < y.dist;
    if (x.terminal_index != y.terminal_index) return x.terminal_index < y.terminal_index;
    return x.point < y.point;
  });

  std::vector<std::uint64_t> ranks(k * n, 0);
  for (std::size_t r = 0; r < entries.size(); ++r) {
    const Entry& e = entries[r];
    if (r > 0 && tie_break == TieBreak::error && entries[r - 1].dist == e.dist) {
      const Entry& prev = entries[r - 1];
      throw TieError("tied terminal distances: dist" + pair_name(terminals[prev.terminal_index], prev.point) +
                     " == dist" + pair_name(terminals[e.terminal_index], e.point));
    }
    ranks[e.terminal_index * n + e.point] = r + 1;
  }
  return RankTable(n, std::move(terminals), std::move(ranks));
}

std::uint64_t minimum_offset(std::size_t k, std::size_t n, double p) {
  if (!(p > 1.0)) throw ValidationError("terminal construction needs p > 1 (l_1 cannot separate terminals)");
  if (std::isinf(p)) return static_cast<std::uint64_t>(k) * n;
  if (p == 2.0) {
    const cpp_int m = cpp_int(k) * k * k * n * n;
    if (m > kMaxExactInteger) throw ValidationError("offset k^3 n^2 exceeds exactly representable integers");
    return m.convert_to<std::uint64_t>();
  }
  const long double log_m =
      (std::log(static_cast<long double>(k)) + p * std::log(static_cast<long double>(k) * n)) / (p - 1.0L);
  if (log_m > std::log(static_cast<long double>(kMaxExactInteger))) {
    throw ValidationError("offset for p=" + std::to_string(p) + " exceeds exactly representable integers");
  }
  return static_cast<std::uint64_t>(std::ceil(std::exp(log_m)));
}

TerminalEmbedding embed_terminals(const FiniteMetricSpace& space, std::vector<std::size_t> terminals,
                                  std::optional<std::uint64_t> M, TieBreak tie_break, double p) {
  RankTable ranks = rank_table(space, std::move(terminals), tie_break);
  const std::size_t n = space.size();
  const std::size_t k = ranks.terminal_count();
  const std::uint64_t floor_m = minimum_offset(k, n, p);
  const std::uint64_t offset = M.value_or(floor_m);
  if (offset < floor_m) {
    throw ValidationError("M=" + std::to_string(offset) + " is below the dominance threshold " +
                          std::to_string(floor_m));
  }
  if (offset > kMaxExactInteger) throw ValidationError("M exceeds exactly representable integers");

  Embedding emb = Embedding::zeros(n, k);
  for (std::size_t v = 0; v < n; ++v) {
    if (ranks.is_terminal(v)) {
      emb.at(v, static_cast<std::size_t>(ranks.position(v))) = -static_cast<double>(offset);
    } else {
      for (std::size_t i = 0; i < k; ++i) emb.at(v, i) = static_cast<double>(ranks.rank(i, v));
    }
  }
  return TerminalEmbedding{std::move(emb), offset, p, std::move(ranks)};
}

DominanceReport dominance_check(const TerminalEmbedding& te, const FiniteMetricSpace& space) {
  const RankTable& ranks = te.ranks;
  const std::size_t n = ranks.point_count();
  const std::size_t k = ranks.terminal_count();
  if (space.size() != n || te.emb.size() != n || te.emb.dim() != k) {
    throw ValidationError("terminal embedding does not match the metric space");
  }
  const cpp_int M = te.M;
  DominanceReport report;
  report.bound = cpp_int(k) * k * k * n * n;
  report.max_rank_mass = 0;

  auto flag = [&](std::size_t t, std::size_t v, std::uint64_t r, std::string problem) {
    report.mismatches.push_back({t, v, r, std::move(problem)});
  };

  // Row layout.
  for (std::size_t v = 0; v < n; ++v) {
    for (std::size_t i = 0; i < k; ++i) {
      const double expected = ranks.is_terminal(v)
                                  ? (static_cast<std::size_t>(ranks.position(v)) == i ? -static_cast<double>(te.M) : 0.0)
                                  : static_cast<double>(ranks.rank(i, v));
      if (te.emb.at(v, i) != expected) flag(v, v, 0, "row " + std::to_string(v) + " has unexpected coordinate " + std::to_string(i));
    }
  }

  const bool integer_p = is_integer_exponent(te.p);
  const unsigned int_p = integer_p ? static_cast<unsigned>(te.p) : 0;
  struct Ranked {
    std::uint64_t rank;
    std::size_t terminal, point;
    cpp_int power_sum;  // sum |f(v)-f(t)|^p, integer p only
  };
  std::vector<Ranked> by_rank;
  by_rank.reserve(k * (n - k));

  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t t = ranks.terminals()[i];
    for (std::size_t v = 0; v < n; ++v) {
      if (ranks.is_terminal(v)) continue;
      ++report.pairs_checked;
      const std::uint64_t r = ranks.rank(i, v);
      cpp_int rank_mass = 0;
      for (std::size_t s = 0; s < k; ++s) rank_mass += cpp_int(ranks.rank(s, v)) * ranks.rank(s, v);
      if (rank_mass > report.max_rank_mass) report.max_rank_mass = rank_mass;
      if (rank_mass > report.bound) flag(t, v, r, "C(t,v) exceeds k^3 n^2");

      cpp_int power_sum = 0;
      if (integer_p) {
        for (std::size_t s = 0; s < k; ++s) {
          cpp_int diff = exact(te.emb.at(v, s)) - exact(te.emb.at(t, s));
          if (diff < 0) diff = -diff;
          power_sum += power(diff, int_p);
        }
        if (int_p == 2 && power_sum != rank_mass + 2 * cpp_int(r) * M + M * M) {
          flag(t, v, r, "squared distance differs from C(t,v) + 2 r M + M^2");
        }
      }
      by_rank.push_back({r, t, v, std::move(power_sum)});
    }
  }

  std::sort(by_rank.begin(), by_rank.end(), [](const Ranked& x, const Ranked& y) { return x.rank < y.rank; });
  for (std::size_t i = 0; i < by_rank.size(); ++i) {
    const Ranked& cur = by_rank[i];
    if (cur.rank != i + 1) flag(cur.terminal, cur.point, cur.rank, "ranks are not a bijection onto 1..k(n-k)");
    if (i == 0) continue;
    const Ranked& prev = by_rank[i - 1];
    if (space(prev.terminal, prev.point) > space(cur.terminal, cur.point)) {
      flag(cur.terminal, cur.point, cur.rank, "rank order disagrees with the distance order");
    }
    if (integer_p && !(prev.power_sum < cur.power_sum)) {
      flag(cur.terminal, cur.point, cur.rank, "embedded distance does not increase along the rank order");
    }
  }
  return report;
}

}  // namespace ordembed
