#include "ordembed/girth_lab.hpp"

#include <algorithm>
#include <cmath>

#include "ordembed/error.hpp"
#include "ordembed/parallel.hpp"
#include "ordembed/random.hpp"

namespace ordembed {
namespace {

/// Depth-limited BFS reusing its buffers between calls.
class BallSearch {
 public:
  explicit BallSearch(std::size_t n) : stamp_(n, 0), depth_(n, 0) {}

  /// True iff `target` is within `radius` hops of `source`.
  bool within(const std::vector<std::vector<std::size_t>>& adj, std::size_t source, std::size_t target,
              std::size_t radius) {
    ++epoch_;
    frontier_.clear();
    frontier_.push_back(source);
    stamp_[source] = epoch_;
    depth_[source] = 0;
    for (std::size_t head = 0; head < frontier_.size(); ++head) {
      const std::size_t u = frontier_[head];
      if (u == target) return true;
      if (depth_[u] == radius) continue;
      for (std::size_t w : adj[u]) {
        if (stamp_[w] != epoch_) {
          stamp_[w] = epoch_;
          depth_[w] = depth_[u] + 1;
          frontier_.push_back(w);
        }
      }
    }
    return false;
  }

 private:
  std::vector<std::uint64_t> stamp_;
  std::vector<std::size_t> depth_;
  std::vector<std::size_t> frontier_;
  std::uint64_t epoch_ = 0;
};

std::vector<WitnessCertificate> witnesses(const SimpleGraph& gi, const SimpleGraph& gj, std::size_t i, std::size_t j,
                                          bool first_only) {
  if (gi.vertex_count() != gj.vertex_count()) {
    throw ValidationError("subgraphs have different vertex counts (" + std::to_string(gi.vertex_count()) + " vs " +
                          std::to_string(gj.vertex_count()) + ")");
  }
  std::vector<WitnessCertificate> found;
  for (std::size_t v = 0; v < gi.vertex_count(); ++v) {
    auto ni = gi.neighbors(v), nj = gj.neighbors(v);
    auto only_i = std::find_if(ni.begin(), ni.end(), [&](std::size_t w) { return !gj.has_edge(v, w); });
    if (only_i == ni.end()) continue;
    auto only_j = std::find_if(nj.begin(), nj.end(), [&](std::size_t w) { return !gi.has_edge(v, w); });
    if (only_j == nj.end()) continue;
    found.push_back({i, j, v, Edge(v, *only_i), Edge(v, *only_j)});
    if (first_only) break;
  }
  return found;
}

}  // namespace

HighGirthResult generate_high_girth(std::size_t n, std::size_t g, std::uint64_t seed,
                                    std::optional<std::size_t> proposal_budget) {
  if (n < 3) throw ValidationError("high-girth generator needs n >= 3");
  if (g < 3) throw ValidationError("target girth must be >= 3");

  std::vector<std::pair<std::uint32_t, std::uint32_t>> candidates;
  candidates.reserve(n * (n - 1) / 2);
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = u + 1; v < n; ++v) {
      candidates.emplace_back(static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v));
    }
  }
  auto rng = stream_rng(seed, 0);
  // Fisher-Yates with our own index draw keeps the order independent of the
  // standard library's distribution implementations.
  for (std::size_t i = candidates.size(); i > 1; --i) {
    const std::size_t r = static_cast<std::size_t>(uniform01(rng) * static_cast<double>(i));
    std::swap(candidates[i - 1], candidates[std::min(r, i - 1)]);
  }

  const std::size_t budget = std::min(candidates.size(), proposal_budget.value_or(candidates.size()));
  std::vector<std::vector<std::size_t>> adj(n);
  std::vector<Edge> edges;
  BallSearch search(n);
  for (std::size_t p = 0; p < budget; ++p) {
    const auto [u, v] = candidates[p];
    // Accept iff dist(u, v) >= g-1, i.e. v is not within g-2 hops.
    if (!search.within(adj, u, v, g - 2)) {
      adj[u].push_back(v);
      adj[v].push_back(u);
      edges.emplace_back(u, v);
    }
  }

  HighGirthResult result{SimpleGraph(n, std::move(edges)), {}};
  HighGirthReport& report = result.report;
  report.n = n;
  report.target_girth = g;
  report.edges = result.graph.edge_count();
  report.target_edges = 0.25 * std::pow(static_cast<double>(n), 1.0 + 1.0 / static_cast<double>(g));
  report.shortfall = static_cast<double>(report.edges) < report.target_edges;
  report.proposals = budget;
  report.achieved_girth = girth(result.graph);
  return result;
}

std::vector<SimpleGraph> sample_ensemble(const EnsembleSpec& spec) {
  if (spec.N < 2) throw ValidationError("ensemble size N must be >= 2");
  if (!(spec.p > 0 && spec.p < 1)) throw ValidationError("edge-keep probability must lie in (0,1)");
  if (spec.base.vertex_count() == 0) throw ValidationError("base graph is empty");
  std::vector<SimpleGraph> out(spec.N);
  parallel_for(spec.N, [&](std::size_t t) {
    auto rng = stream_rng(spec.seed, t);
    std::vector<Edge> kept;
    for (const Edge& e : spec.base.edges()) {
      if (uniform01(rng) < spec.p) kept.push_back(e);
    }
    out[t] = SimpleGraph(spec.base.vertex_count(), std::move(kept));
  });
  return out;
}

std::optional<WitnessCertificate> faraway_pair(const SimpleGraph& gi, const SimpleGraph& gj, std::size_t i,
                                               std::size_t j) {
  auto found = witnesses(gi, gj, i, j, true);
  if (found.empty()) return std::nullopt;
  return found.front();
}

std::vector<WitnessCertificate> all_witnesses(const SimpleGraph& gi, const SimpleGraph& gj, std::size_t i,
                                              std::size_t j) {
  return witnesses(gi, gj, i, j, false);
}

EnsembleReport ensemble_report(const std::vector<SimpleGraph>& ensemble, std::size_t base_girth) {
  const std::size_t N = ensemble.size();
  if (N < 2) throw ValidationError("ensemble needs at least two subgraphs");
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = i + 1; j < N; ++j) pairs.emplace_back(i, j);
  }
  const double floor = static_cast<double>(base_girth) - 1.0;

  std::vector<std::optional<CertificateCheck>> checks(pairs.size());
  parallel_for(pairs.size(), [&](std::size_t idx) {
    const auto [i, j] = pairs[idx];
    auto cert = faraway_pair(ensemble[i], ensemble[j], i, j);
    if (!cert) return;
    CertificateCheck check;
    check.certificate = *cert;
    check.dist_in_i = bfs_distances(ensemble[i], cert->v)[cert->e_j.other(cert->v)];
    check.dist_in_j = bfs_distances(ensemble[j], cert->v)[cert->e_i.other(cert->v)];
    check.passes = check.dist_in_i >= floor && check.dist_in_j >= floor;
    checks[idx] = check;
  });

  EnsembleReport report;
  report.subgraphs = N;
  report.pairs = pairs.size();
  report.base_girth = base_girth;
  for (std::size_t idx = 0; idx < pairs.size(); ++idx) {
    if (!checks[idx]) {
      if (!report.first_failing_pair) report.first_failing_pair = pairs[idx];
      continue;
    }
    ++report.faraway_pairs;
    report.all_certificates_pass = report.all_certificates_pass && checks[idx]->passes;
    report.certificates.push_back(*checks[idx]);
  }
  report.faraway_fraction = static_cast<double>(report.faraway_pairs) / static_cast<double>(report.pairs);
  return report;
}

UnionBound union_bound_log(double n, double m, double N) {
  if (!(N >= 2)) throw ValidationError("union bound needs N >= 2");
  if (!(m >= 0) || !(n >= 0)) throw ValidationError("union bound needs n, m >= 0");
  UnionBound ub;
  const double log2_N = std::log2(N);
  const double log2_pairs = log2_N + std::log2(N - 1.0) - 1.0;
  ub.log2_bound = log2_pairs + n + m * std::log2(0.75);
  ub.log2_n_squared = 2.0 * log2_N;
  ub.log2_four_thirds_m = m * std::log2(4.0 / 3.0);
  ub.high_probability = ub.log2_bound < 0;
  ub.below_threshold = ub.log2_n_squared < ub.log2_four_thirds_m;
  ub.within_1_14_rule = std::log(N) <= m * std::log(1.14);
  return ub;
}

PigeonholeResult pigeonhole_relaxation_check(const Embedding& emb, const FiniteMetricSpace& space_i,
                                             const FiniteMetricSpace& space_j, const WitnessCertificate& cert,
                                             std::size_t g) {
  const std::size_t n = emb.size();
  if (space_i.size() != n || space_j.size() != n) throw ValidationError("spaces and embedding differ in size");
  if (cert.v >= n || cert.e_i.v >= n || cert.e_j.v >= n) throw ValidationError("certificate out of range");
  const FamilySpec triplets{Family::triplet, {}, 1, TiePolicy::skip};
  PigeonholeResult r;
  r.relaxation_i = relaxation(space_i, emb, triplets);
  r.relaxation_j = relaxation(space_j, emb, triplets);
  r.max_relaxation = std::max(r.relaxation_i, r.relaxation_j);
  r.holds = r.max_relaxation >= static_cast<double>(g) - 1.0;
  return r;
}

}  // namespace ordembed
