#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ordembed/metric.hpp"
#include "ordembed/verifier.hpp"

namespace ordembed {

struct HighGirthReport {
  std::size_t n = 0;
  std::size_t target_girth = 0;
  std::size_t edges = 0;
  double target_edges = 0;  // n^{1+1/g} / 4
  bool shortfall = false;   // edges < target_edges
  std::size_t proposals = 0;
  std::optional<std::size_t> achieved_girth;
};

struct HighGirthResult {
  SimpleGraph graph;
  HighGirthReport report;
};

/// Randomized greedy construction: proposes vertex pairs in a uniformly
/// random order and adds a pair as an edge iff its endpoints are at hop
/// distance >= g-1. Distances only shrink as edges are added, so a rejected
/// pair never becomes acceptable and a single pass (the default budget
/// C(n,2)) yields a maximal graph of girth >= g.
HighGirthResult generate_high_girth(std::size_t n, std::size_t g, std::uint64_t seed,
                                    std::optional<std::size_t> proposal_budget = std::nullopt);

struct EnsembleSpec {
  SimpleGraph base;
  std::size_t N = 2;
  double p = 0.5;
  std::uint64_t seed = 0;
};

/// N edge-subgraphs of the base, each base edge kept independently with
/// probability p. Subgraph t draws from its own stream keyed by (seed, t).
std::vector<SimpleGraph> sample_ensemble(const EnsembleSpec& spec);

struct WitnessCertificate {
  std::size_t i = 0, j = 0;  // subgraph indices
  std::size_t v = 0;         // witness vertex
  Edge e_i;                  // in G_i but not G_j, incident to v
  Edge e_j;                  // in G_j but not G_i, incident to v
};

/// First vertex v (in index order) having an incident edge exclusive to each
/// side. Throws ValidationError on vertex-count mismatch.
std::optional<WitnessCertificate> faraway_pair(const SimpleGraph& gi, const SimpleGraph& gj, std::size_t i = 0,
                                               std::size_t j = 1);

/// Every witness vertex, each with its first exclusive edges.
std::vector<WitnessCertificate> all_witnesses(const SimpleGraph& gi, const SimpleGraph& gj, std::size_t i = 0,
                                              std::size_t j = 1);

struct CertificateCheck {
  WitnessCertificate certificate;
  double dist_in_i = 0;  // dist_{G_i}(v, far end of e_j), may be infinite
  double dist_in_j = 0;  // dist_{G_j}(v, far end of e_i)
  bool passes = false;   // both >= g-1
};

struct EnsembleReport {
  std::size_t subgraphs = 0;
  std::size_t pairs = 0;
  std::size_t faraway_pairs = 0;
  double faraway_fraction = 0;
  std::optional<std::pair<std::size_t, std::size_t>> first_failing_pair;
  std::size_t base_girth = 0;
  std::vector<CertificateCheck> certificates;  // one per faraway pair, (i,j) order
  bool all_certificates_pass = true;
};

/// Checks property (*) over all C(N,2) pairs and audits every certificate
/// against shortest-path distances in the subgraphs.
EnsembleReport ensemble_report(const std::vector<SimpleGraph>& ensemble, std::size_t base_girth);

struct UnionBound {
  double log2_bound = 0;          // log2[C(N,2) 2^n (3/4)^m]
  double log2_n_squared = 0;      // 2 log2 N
  double log2_four_thirds_m = 0;  // m log2(4/3)
  bool high_probability = false;  // log2_bound < 0
  bool below_threshold = false;   // N^2 < (4/3)^m
  bool within_1_14_rule = false;  // N <= 1.14^m
};

/// log2 of the probability bound that some pair of the ensemble is not
/// faraway. N may exceed 2^64, hence the real argument.
UnionBound union_bound_log(double n, double m, double N);

struct PigeonholeResult {
  double relaxation_i = 1;
  double relaxation_j = 1;
  double max_relaxation = 1;
  bool holds = false;  // max_relaxation >= g-1
};

/// Triplet relaxation of one embedding against both metrics of a faraway
/// pair. At least one of them must be >= g-1.
PigeonholeResult pigeonhole_relaxation_check(const Embedding& emb, const FiniteMetricSpace& space_i,
                                             const FiniteMetricSpace& space_j, const WitnessCertificate& cert,
                                             std::size_t g);

}  // namespace ordembed
