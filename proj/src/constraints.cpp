#include "ordembed/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "ordembed/error.hpp"
#include "ordembed/numeric.hpp"
#include "ordembed/parallel.hpp"
#include "ordembed/random.hpp"

namespace ordembed {
namespace {

using Index = std::uint32_t;

Index idx(std::size_t i) { return static_cast<Index>(i); }

std::string pair_name(std::size_t a, std::size_t b) {
  return "(" + std::to_string(a) + "," + std::to_string(b) + ")";
}

/// Oriented pair of points whose distance takes part in comparisons.
struct Pair {
  std::size_t first, second;
};

/// Compares every two entries of `pairs` and emits the true strict order.
std::vector<Comparison> compare_all_pairs(const FiniteMetricSpace& space, const std::vector<Pair>& pairs,
                                          TiePolicy ties) {
  const std::size_t count = pairs.size();
  std::vector<std::vector<Comparison>> chunks(chunk_count(count));
  parallel_chunks(count, [&](std::size_t chunk, std::size_t begin, std::size_t end) {
    auto& out = chunks[chunk];
    for (std::size_t i = begin; i < end; ++i) {
      const Pair& p = pairs[i];
      const double dp = space(p.first, p.second);
      for (std::size_t j = i + 1; j < count; ++j) {
        const Pair& q = pairs[j];
        const double dq = space(q.first, q.second);
        if (dp < dq) {
          out.push_back({idx(p.first), idx(p.second), idx(q.first), idx(q.second)});
        } else if (dq < dp) {
          out.push_back({idx(q.first), idx(q.second), idx(p.first), idx(p.second)});
        } else if (ties == TiePolicy::error) {
          throw TieError("tie: dist" + pair_name(p.first, p.second) + " == dist" + pair_name(q.first, q.second));
        }
      }
    }
  });
  std::vector<Comparison> all;
  for (auto& c : chunks) all.insert(all.end(), c.begin(), c.end());
  std::sort(all.begin(), all.end());
  return all;
}

std::vector<std::size_t> normalized_terminals(std::vector<std::size_t> terminals, std::size_t n) {
  std::sort(terminals.begin(), terminals.end());
  if (std::adjacent_find(terminals.begin(), terminals.end()) != terminals.end()) {
    throw ValidationError("terminal set contains duplicates");
  }
  if (terminals.empty()) throw ValidationError("terminal set must be nonempty");
  if (terminals.back() >= n) {
    throw ValidationError("terminal " + std::to_string(terminals.back()) + " out of range for n=" + std::to_string(n));
  }
  if (terminals.size() >= n) throw ValidationError("T must be a strict subset of the points");
  return terminals;
}

}  // namespace

std::string to_string(Family family) {
  switch (family) {
    case Family::triplet: return "triplet";
    case Family::terminal: return "terminal";
    case Family::topk_mixed: return "topk_mixed";
    case Family::topk_unmixed: return "topk_unmixed";
    case Family::full: return "full";
  }
  return "unknown";
}

Family family_from_string(const std::string& name) {
  for (Family f : {Family::triplet, Family::terminal, Family::topk_mixed, Family::topk_unmixed, Family::full}) {
    if (to_string(f) == name) return f;
  }
  throw ValidationError("unknown constraint family '" + name + "'");
}

ConstraintSet extract_triplets(const FiniteMetricSpace& space, TiePolicy ties) {
  const std::size_t n = space.size();
  std::vector<std::vector<Comparison>> per_anchor(n);
  parallel_for(n, [&](std::size_t x) {
    auto& out = per_anchor[x];
    for (std::size_t y = 0; y < n; ++y) {
      if (y == x) continue;
      for (std::size_t z = y + 1; z < n; ++z) {
        if (z == x) continue;
        const double dy = space(x, y), dz = space(x, z);
        if (dy < dz) {
          out.push_back({idx(x), idx(y), idx(x), idx(z)});
        } else if (dz < dy) {
          out.push_back({idx(x), idx(z), idx(x), idx(y)});
        } else if (ties == TiePolicy::error) {
          throw TieError("tie at anchor " + std::to_string(x) + ": dist" + pair_name(x, y) + " == dist" +
                         pair_name(x, z) + " (triple " + std::to_string(x) + "," + std::to_string(y) + "," +
                         std::to_string(z) + ")");
        }
      }
    }
    std::sort(out.begin(), out.end());
  });
  ConstraintSet cs;
  cs.family = Family::triplet;
  for (auto& v : per_anchor) cs.comparisons.insert(cs.comparisons.end(), v.begin(), v.end());
  return cs;
}

ConstraintSet extract_terminal(const FiniteMetricSpace& space, std::vector<std::size_t> terminals, TiePolicy ties) {
  const std::size_t n = space.size();
  terminals = normalized_terminals(std::move(terminals), n);
  std::vector<bool> is_terminal(n, false);
  for (std::size_t t : terminals) is_terminal[t] = true;

  std::vector<Pair> pairs;
  for (std::size_t t : terminals) {
    for (std::size_t v = 0; v < n; ++v) {
      if (!is_terminal[v]) pairs.push_back({t, v});
    }
  }
  ConstraintSet cs;
  cs.family = Family::terminal;
  cs.comparisons = compare_all_pairs(space, pairs, ties);
  cs.terminals = std::move(terminals);
  return cs;
}

std::vector<std::vector<std::size_t>> nearest_neighbors(const FiniteMetricSpace& space, std::size_t k,
                                                        TiePolicy ties) {
  const std::size_t n = space.size();
  if (k < 1 || k + 1 > n) {
    throw ValidationError("k must lie in [1, n-1]; got k=" + std::to_string(k) + " for n=" + std::to_string(n));
  }
  std::vector<std::vector<std::size_t>> nn(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::size_t> order;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) order.push_back(j);
    }
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return space(i, a) < space(i, b); });
    if (k < order.size() && space(i, order[k - 1]) == space(i, order[k]) && ties == TiePolicy::error) {
      throw TieError("ambiguous neighbour set of point " + std::to_string(i) + ": dist" + pair_name(i, order[k - 1]) +
                     " == dist" + pair_name(i, order[k]) + " at the k-th boundary");
    }
    order.resize(k);
    nn[i] = std::move(order);
  }
  return nn;
}

ConstraintSet extract_topk(const FiniteMetricSpace& space, std::size_t k, bool mixed, TiePolicy ties) {
  const std::size_t n = space.size();
  const auto nn = nearest_neighbors(space, k, ties);
  ConstraintSet cs;
  cs.family = mixed ? Family::topk_mixed : Family::topk_unmixed;
  cs.k = k;

  if (mixed) {
    auto in_nn = [&](std::size_t x, std::size_t y) { return std::find(nn[x].begin(), nn[x].end(), y) != nn[x].end(); };
    std::vector<Pair> pairs;
    for (std::size_t x = 0; x < n; ++x) {
      for (std::size_t y : nn[x]) {
        // Each unordered pair once, anchored at the smaller index when mutual.
        if (x < y || !in_nn(y, x)) pairs.push_back({x, y});
      }
    }
    cs.comparisons = compare_all_pairs(space, pairs, ties);
    return cs;
  }

  for (std::size_t x = 0; x < n; ++x) {
    const auto& nb = nn[x];
    for (std::size_t p = 0; p < nb.size(); ++p) {
      for (std::size_t q = p + 1; q < nb.size(); ++q) {
        const double dp = space(x, nb[p]), dq = space(x, nb[q]);
        if (dp < dq) {
          cs.comparisons.push_back({idx(x), idx(nb[p]), idx(x), idx(nb[q])});
        } else if (dq < dp) {
          cs.comparisons.push_back({idx(x), idx(nb[q]), idx(x), idx(nb[p])});
        } else if (ties == TiePolicy::error) {
          throw TieError("tie at anchor " + std::to_string(x) + ": dist" + pair_name(x, nb[p]) + " == dist" +
                         pair_name(x, nb[q]));
        }
      }
    }
  }
  std::sort(cs.comparisons.begin(), cs.comparisons.end());
  return cs;
}

ConstraintSet extract_full(const FiniteMetricSpace& space, TiePolicy ties) {
  const std::size_t n = space.size();
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) pairs.push_back({i, j});
  }
  ConstraintSet cs;
  cs.family = Family::full;
  cs.comparisons = compare_all_pairs(space, pairs, ties);
  return cs;
}

ConstraintSet extract(const FiniteMetricSpace& space, const FamilySpec& spec) {
  switch (spec.family) {
    case Family::triplet: return extract_triplets(space, spec.ties);
    case Family::terminal: return extract_terminal(space, spec.terminals, spec.ties);
    case Family::topk_mixed: return extract_topk(space, spec.k, true, spec.ties);
    case Family::topk_unmixed: return extract_topk(space, spec.k, false, spec.ties);
    case Family::full: return extract_full(space, spec.ties);
  }
  throw ValidationError("unknown family");
}

ConstraintSet restrict_triplets_to_terminals(const ConstraintSet& triplets, const std::vector<std::size_t>& terminals) {
  if (triplets.family != Family::triplet) throw ValidationError("expected a triplet constraint set");
  std::set<std::size_t> t(terminals.begin(), terminals.end());
  ConstraintSet out;
  out.family = Family::triplet;
  out.terminals.assign(t.begin(), t.end());
  for (const Comparison& c : triplets.comparisons) {
    if (t.count(c.a) && !t.count(c.b) && !t.count(c.d)) out.comparisons.push_back(c);
  }
  return out;
}

void validate_constraints(const ConstraintSet& cs, std::size_t n) {
  std::set<std::size_t> terminals(cs.terminals.begin(), cs.terminals.end());
  if (cs.family == Family::terminal) {
    if (terminals.empty()) throw ValidationError("params.terminals: terminal family needs a terminal set");
    if (terminals.size() >= n) throw ValidationError("params.terminals: T must be a strict subset of the points");
  }
  if ((cs.family == Family::topk_mixed || cs.family == Family::topk_unmixed) && !cs.k) {
    throw ValidationError("params.k: top-k family needs k");
  }
  for (std::size_t t : terminals) {
    if (t >= n) throw ValidationError("params.terminals: index " + std::to_string(t) + " out of range");
  }
  for (std::size_t i = 0; i < cs.comparisons.size(); ++i) {
    const Comparison& c = cs.comparisons[i];
    auto fail = [&](const std::string& why) {
      throw ValidationError("comparisons[" + std::to_string(i) + "]: " + why);
    };
    if (c.a >= n || c.b >= n || c.c >= n || c.d >= n) fail("index out of range");
    if (c.a == c.b || c.c == c.d) fail("degenerate pair");
    if (Edge(c.a, c.b) == Edge(c.c, c.d)) fail("compares a pair with itself");
    switch (cs.family) {
      case Family::triplet:
        if (c.a != c.c) fail("triplet comparison must share its anchor (a == c)");
        if (!terminals.empty() && (!terminals.count(c.a) || terminals.count(c.b) || terminals.count(c.d))) {
          fail("terminal-restricted triplet must anchor at a terminal with non-terminal targets");
        }
        break;
      case Family::terminal:
        if (!terminals.count(c.a) || !terminals.count(c.c)) fail("terminal comparison must start at terminals");
        if (terminals.count(c.b) || terminals.count(c.d)) fail("terminal comparison must end at non-terminals");
        break;
      case Family::topk_unmixed:
        if (c.a != c.c) fail("unmixed top-k comparison must share its anchor (a == c)");
        break;
      case Family::topk_mixed:
        break;
      case Family::full:
        if (c.a > c.b || c.c > c.d) fail("full-family pairs must be written low index first");
        break;
    }
  }
  if (!std::is_sorted(cs.comparisons.begin(), cs.comparisons.end())) {
    throw ValidationError("comparisons: not in canonical (lexicographic) order");
  }
}

std::vector<std::size_t> inconsistent_comparisons(const ConstraintSet& cs, const FiniteMetricSpace& space) {
  std::vector<std::size_t> bad;
  for (std::size_t i = 0; i < cs.comparisons.size(); ++i) {
    const Comparison& c = cs.comparisons[i];
    if (!(space(c.a, c.b) < space(c.c, c.d))) bad.push_back(i);
  }
  return bad;
}

FiniteMetricSpace jitter(const FiniteMetricSpace& space, double eps, std::uint64_t seed) {
  if (!(eps >= 0)) throw ValidationError("jitter must be nonnegative");
  const std::size_t n = space.size();
  auto rng = stream_rng(seed, 0);
  std::vector<double> m = space.matrix();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double shifted = space(i, j) + eps * uniform01(rng);
      m[i * n + j] = shifted;
      m[j * n + i] = shifted;
    }
  }
  return FiniteMetricSpace(n, std::move(m));
}

boost::multiprecision::cpp_int count_triplet_orderings_exact(std::size_t n) {
  using boost::multiprecision::cpp_int;
  if (n < 3) throw ValidationError("triplet orderings need n >= 3");
  cpp_int product = 1;
  for (std::size_t i = 0; i + 2 <= n; ++i) {
    // (n-1+i)! / (2i)! = (2i+1)(2i+2)...(n-1+i), since n-1+i >= 2i.
    for (std::size_t x = 2 * i + 1; x <= n - 1 + i; ++x) product *= x;
  }
  return product;
}

std::uint64_t count_triplet_orderings_brute_force(std::size_t n) {
  if (n < 3 || n > 5) throw ValidationError("brute-force ordering count supports n in [3,5]");
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<std::vector<std::size_t>> pair_id(n, std::vector<std::size_t>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      pair_id[i][j] = pair_id[j][i] = pairs.size();
      pairs.emplace_back(i, j);
    }
  }
  std::vector<std::pair<std::size_t, std::size_t>> compared;
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) {
      for (std::size_t z = y + 1; z < n; ++z) {
        if (y != x && z != x) compared.emplace_back(pair_id[x][y], pair_id[x][z]);
      }
    }
  }
  // rank[p] = position of pair p in the total order.
  std::vector<std::size_t> rank(pairs.size());
  std::iota(rank.begin(), rank.end(), 0);
  std::vector<std::uint64_t> patterns;
  do {
    std::uint64_t bits = 0;
    for (std::size_t c = 0; c < compared.size(); ++c) {
      if (rank[compared[c].first] < rank[compared[c].second]) bits |= std::uint64_t{1} << c;
    }
    patterns.push_back(bits);
  } while (std::next_permutation(rank.begin(), rank.end()));
  std::sort(patterns.begin(), patterns.end());
  return static_cast<std::uint64_t>(std::unique(patterns.begin(), patterns.end()) - patterns.begin());
}

double log_superfactorial(std::size_t n) {
  if (n < 1) throw ValidationError("superfactorial needs n >= 1");
  CompensatedSum log_fact, total;
  for (std::size_t i = 1; i < n; ++i) {
    log_fact += std::log(static_cast<double>(i));
    total += log_fact.value();
  }
  return total.value();
}

double log_big(const boost::multiprecision::cpp_int& x) {
  if (x <= 0) throw ValidationError("log of a non-positive integer");
  const std::size_t bits = boost::multiprecision::msb(x) + 1;
  const std::size_t shift = bits > 62 ? bits - 62 : 0;
  const boost::multiprecision::cpp_int top = x >> shift;
  return std::log(top.convert_to<double>()) + static_cast<double>(shift) * std::log(2.0);
}

}  // namespace ordembed
