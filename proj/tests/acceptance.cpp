// Acceptance run: prints one PASS/FAIL line per criterion (details indented
// above it) and exits nonzero if any criterion fails.

#include <chrono>
#include <cstdarg>
#include <numeric>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "oracles.hpp"
#include "ordembed/baselines.hpp"
#include "ordembed/bounds.hpp"
#include "ordembed/cli.hpp"
#include "ordembed/constraints.hpp"
#include "ordembed/girth_lab.hpp"
#include "ordembed/io.hpp"
#include "ordembed/parallel.hpp"
#include "ordembed/random.hpp"
#include "ordembed/terminal_embed.hpp"
#include "ordembed/verifier.hpp"
#include "test_graphs.hpp"

using namespace ordembed;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;
  void note(const std::string& s) { details.push_back(s); }
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      note("failed: " + what);
    }
  }
};

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

std::size_t pick(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {  // uniform in [lo, hi]
  return lo + std::min(hi - lo, static_cast<std::size_t>(uniform01(rng) * static_cast<double>(hi - lo + 1)));
}

Embedding gaussian_embedding(std::size_t n, std::size_t d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  std::vector<double> x(n * d);
  for (double& v : x) v = normal(rng);
  return Embedding(n, d, x);
}

// 1. Terminal embeddings realize the terminal family exactly.
Outcome terminal_exactness() {
  Outcome o;
  auto rng = stream_rng(1, 0);
  std::size_t comparisons = 0, max_n = 0, max_k = 0;
  for (std::size_t t = 0; t < 200; ++t) {
    const std::size_t n = pick(rng, 10, 200);
    const std::size_t k = pick(rng, 1, std::min<std::size_t>(20, n - 1));
    const bool graph = t % 2 == 0;
    const auto space = graph ? metric_from_graph(testgraphs::random_connected(n, pick(rng, 0, 2 * n), 1000 + t))
                             : testgraphs::random_points(n, pick(rng, 1, 6), 2000 + t);
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    for (std::size_t i = 0; i < k; ++i) std::swap(all[i], all[pick(rng, i, n - 1)]);
    std::vector<std::size_t> terminals(all.begin(), all.begin() + static_cast<long>(k));
    const auto te = embed_terminals(space, terminals, std::nullopt, graph ? TieBreak::lexicographic : TieBreak::error);
    const auto cs = extract_terminal(space, terminals, TiePolicy::skip);
    const auto report = check_constraints(te.emb, cs, space);
    const double relax = relaxation(space, te.emb, cs);
    const auto dom = dominance_check(te, space);
    comparisons += cs.comparisons.size();
    max_n = std::max(max_n, n);
    max_k = std::max(max_k, k);
    o.require(report.violated.empty(), fmt("metric %zu: %zu violations", t, report.violated.size()));
    o.require(relax == 1.0, fmt("metric %zu: relaxation %.17g", t, relax));
    o.require(dom.ok(), fmt("metric %zu: dominance check failed", t));
  }
  o.note(fmt("200 metrics (100 graph, 100 point cloud), max n=%zu, max k=%zu, %zu comparisons checked", max_n, max_k,
             comparisons));
  return o;
}

// 2. Closed-form triplet order count against projection counts.
Outcome ordering_count() {
  Outcome o;
  for (std::size_t n : {3u, 4u, 5u}) {
    const auto formula = count_triplet_orderings_exact(n);
    const std::uint64_t projections = count_triplet_orderings_brute_force(n);
    const std::uint64_t acyclic = oracle::triplet_patterns_by_acyclicity(n);
    o.note(fmt("n=%zu: closed form %s, projection count %llu, acyclicity oracle %llu", n, formula.str().c_str(),
               static_cast<unsigned long long>(projections), static_cast<unsigned long long>(acyclic)));
    o.require(projections == acyclic, fmt("n=%zu: projection count disagrees with the acyclicity oracle", n));
    o.require(formula == projections, fmt("n=%zu: closed form != projection count", n));
  }
  return o;
}

// 3. The p=2 case of the l_p sign-pattern form equals the p=2 form.
Outcome sign_identity() {
  Outcome o;
  double worst = 0;
  std::size_t points = 0;
  for (int a = 0; a < 10; ++a) {
    const double m = std::round(std::pow(10.0, 1.2 * a));
    for (int b = 0; b < 10; ++b) {
      const double l = std::round(std::pow(10.0, 0.7 * b));
      const double beta = std::max(1.0, std::round(std::pow(m, (b + 0.5) / 10.0)));
      const double x = sign_pattern_log_bound(m, l, beta, 2.0);
      const double y = sign_pattern_log_bound_lp(m, l, beta, 2.0);
      worst = std::max(worst, std::abs(x - y) / std::max(std::abs(x), 1e-300));
      ++points;
    }
  }
  o.note(fmt("%zu grid points, worst relative difference %.3g", points, worst));
  o.require(worst <= 1e-12, "relative difference above 1e-12");
  return o;
}

// 4. Witness certificates and the pigeonhole step on the Heawood base.
Outcome faraway_property() {
  Outcome o;
  const auto base = testgraphs::heawood();
  const std::size_t g = *girth(base);
  const auto ens = sample_ensemble({base, 50, 0.5, 2024});
  const auto report = ensemble_report(ens, g);
  std::size_t failing = 0;
  for (const auto& c : report.certificates) failing += !c.passes;
  o.note(fmt("girth %zu, %zu of %zu pairs faraway (fraction %.4f), %zu certificates failing the >= %zu checks", g,
             report.faraway_pairs, report.pairs, report.faraway_fraction, failing, g - 1));
  o.require(report.all_certificates_pass && failing == 0, "a certificate failed its distance check");
  o.require(report.certificates.size() >= 20, "fewer than 20 faraway pairs");

  const double cap = static_cast<double>(base.vertex_count());
  std::size_t trials = 0, counterexamples = 0;
  double weakest = INFINITY;
  auto rng = stream_rng(4, 0);
  for (std::size_t idx = 0; idx < std::min<std::size_t>(20, report.certificates.size()); ++idx) {
    const auto& cert = report.certificates[idx].certificate;
    const auto si = metric_from_graph(ens[cert.i], cap), sj = metric_from_graph(ens[cert.j], cap);
    for (std::size_t e = 0; e < 100; ++e) {
      const auto emb = gaussian_embedding(base.vertex_count(), 1 + e % 4, rng);
      const auto r = pigeonhole_relaxation_check(emb, si, sj, cert, g);
      weakest = std::min(weakest, r.max_relaxation);
      counterexamples += !(r.holds && r.max_relaxation >= 4.0);
      ++trials;
    }
  }
  o.note(fmt("%zu embeddings over 20 pairs, %zu counterexamples, smallest max relaxation %.4g", trials,
             counterexamples, weakest));
  o.require(trials == 2000 && counterexamples == 0, "pigeonhole relaxation check failed");
  return o;
}

// 5. Union bound against 50-digit evaluation, plus monotonicity.
Outcome union_bound() {
  Outcome o;
  auto rng = stream_rng(5, 0);
  double worst = 0;
  bool monotone = true;
  for (int t = 0; t < 50; ++t) {
    const double n = std::floor(1 + 999 * uniform01(rng));
    const double m = std::floor(1e5 * uniform01(rng));
    const double N = std::floor(std::pow(10.0, 0.31 + 11.7 * uniform01(rng)));
    const double lib = union_bound_log(n, m, N).log2_bound;
    const double ref = oracle::union_bound_log2_precise(n, m, N);
    worst = std::max(worst, std::abs(lib - ref) / std::max(1.0, std::abs(ref)));
    monotone = monotone && union_bound_log(n, m, N * 2).log2_bound > lib &&
               union_bound_log(n + 1, m, N).log2_bound > lib && union_bound_log(n, m + 1, N).log2_bound < lib;
  }
  o.note(fmt("50 tuples, worst error %.3g (relative, floored at 1)", worst));
  o.require(worst <= 1e-9, "error above 1e-9");
  o.require(monotone, "monotonicity in N, n or m violated");
  return o;
}

// 6. Relaxation never exceeds distortion.
Outcome relaxation_vs_distortion() {
  Outcome o;
  auto rng = stream_rng(6, 0);
  std::size_t violations = 0;
  double max_relax = 1;
  for (std::size_t t = 0; t < 1000; ++t) {
    const std::size_t n = pick(rng, 3, 32);
    const auto space = t % 2 == 0 ? metric_from_graph(testgraphs::random_connected(n, pick(rng, 0, n), 6000 + t))
                                   : testgraphs::random_points(n, pick(rng, 1, 5), 7000 + t);
    const auto emb = gaussian_embedding(n, pick(rng, 1, 4), rng);
    const double r = relaxation(space, emb, FamilySpec{Family::full});
    const double d = distortion(space, emb);
    max_relax = std::max(max_relax, r);
    if (r > d * (1 + 1e-12)) ++violations;
  }
  o.note(fmt("1000 embeddings, full family, %zu with relaxation > distortion, largest relaxation %.4g", violations,
             max_relax));
  o.require(violations == 0, "relaxation exceeded distortion");
  return o;
}

// 7. Bourgain + JL: relaxation <= distortion <= 4 ln n in >= 90% of trials.
Outcome bourgain_route() {
  Outcome o;
  const std::size_t n = 64;
  const auto d_out = static_cast<std::size_t>(std::ceil(8 * std::log(double(n))));
  const double limit = 4 * std::log(double(n));
  std::size_t good = 0;
  double lo = INFINITY, hi = 0;
  for (std::uint64_t t = 0; t < 20; ++t) {
    const auto space = metric_from_graph(testgraphs::random_connected(n, n / 2, 8000 + t));
    const auto emb = jl_project(bourgain_embed(space, 24, 100 + t), d_out, 200 + t);
    const double r = relaxation(space, emb, FamilySpec{Family::full});
    const double d = distortion(space, emb);
    lo = std::min(lo, d);
    hi = std::max(hi, d);
    good += r <= d && d <= limit;
  }
  o.note(fmt("n=64, %zu JL dimensions, distortion in [%.3f, %.3f], limit %.3f, %zu/20 trials within", d_out, lo, hi,
             limit, good));
  o.require(good >= 18, "fewer than 90% of trials within the limit");
  return o;
}

// 8. Bound calculators.
Outcome bound_calculators() {
  Outcome o;
  const BoundMode modes[] = {BoundMode::triplet,           BoundMode::terminal_linear, BoundMode::terminal_sublinear,
                             BoundMode::terminal_no_inter, BoundMode::topk_mixed,      BoundMode::topk_unmixed};
  for (BoundMode mode : modes) {
    std::string line = to_string(mode) + ":";
    std::size_t prev = 0;
    for (std::size_t n : {100u, 1000u, 10000u}) {
      const auto r = certify_lower_bound({mode, n});
      line += fmt(" n=%zu d=%zu", n, r.certified_d);
      o.require(r.certified_d < n, to_string(mode) + fmt(" certified_d >= n at n=%zu", n));
      o.require(r.certified_d >= prev, to_string(mode) + fmt(" certified_d decreased at n=%zu", n));
      prev = r.certified_d;
    }
    o.note(line);
  }
  BoundQuery linear{BoundMode::terminal_linear, 1000};
  linear.k = 500;
  BoundQuery no_inter = linear;
  no_inter.mode = BoundMode::terminal_no_inter;
  const auto a = certify_lower_bound(linear), b = certify_lower_bound(no_inter);
  o.note(fmt("n=1000, k=500: terminal_linear certifies d=%zu (ln orderings %.6g), terminal_no_inter d=%zu (%.6g)",
             a.certified_d, a.log_orderings, b.certified_d, b.log_orderings));
  const long gap = static_cast<long>(a.certified_d) - static_cast<long>(b.certified_d);
  o.require(std::abs(gap) <= 1, "terminal_no_inter and terminal_linear differ by more than one dimension");
  return o;
}

// 9. Planted recovery and gradient check.
Outcome fitter_sanity() {
  Outcome o;
  std::size_t recovered = 0;
  for (std::uint64_t inst = 0; inst < 50; ++inst) {
    const std::size_t n = 5 + inst % 16, d = 1 + inst % 3;
    auto rng = stream_rng(2024, inst);
    const auto points = gaussian_embedding(n, d, rng);
    const FiniteMetricSpace space(n, oracle::euclidean_matrix(points.coords(), n, d));
    FitConfig cfg;
    cfg.d = d;
    cfg.seed = inst;
    const auto r = fit_triplets(space, extract_triplets(space), cfg);
    if (r.violations == 0) {
      ++recovered;
    } else {
      o.note(fmt("instance %zu (n=%zu, d=%zu): %zu violations", static_cast<std::size_t>(inst), n, d, r.violations));
    }
  }
  o.note(fmt("%zu/50 planted instances recovered with zero violations", recovered));
  o.require(recovered == 50, "planted instance not recovered");

  auto rng = stream_rng(9, 1);
  double worst = 0;
  std::size_t checked = 0;
  for (std::size_t attempt = 0; checked < 100 && attempt < 10000; ++attempt) {
    const std::size_t n = pick(rng, 4, 10), d = pick(rng, 1, 3);
    const auto space = testgraphs::random_points(n, 2, 9000 + attempt);
    const auto cs = extract_triplets(space);
    const auto emb = gaussian_embedding(n, d, rng);
    const double gamma = 0.05 * uniform01(rng);
    bool near_kink = false;
    for (const auto& c : cs.comparisons) {
      const double a = embedded_distance(emb, c.a, c.b), b = embedded_distance(emb, c.c, c.d);
      near_kink = near_kink || std::abs(gamma + a * a - b * b) < 1e-3;
    }
    if (near_kink) continue;
    const auto grad = hinge_gradient(emb, cs, gamma);
    auto f = [&](const std::vector<double>& x) { return hinge_loss(Embedding(n, d, x), cs, gamma); };
    double diff = 0, norm = 0;
    for (std::size_t i = 0; i < grad.size(); ++i) {
      const double fd = oracle::central_difference(f, emb.coords(), i, 1e-6);
      diff += (fd - grad[i]) * (fd - grad[i]);
      norm += grad[i] * grad[i];
    }
    if (norm == 0) continue;
    worst = std::max(worst, std::sqrt(diff / norm));
    ++checked;
  }
  o.note(fmt("gradient check at %zu points, worst relative error %.3g", checked, worst));
  o.require(checked == 100 && worst < 1e-5, "gradient check");
  return o;
}

std::string library_pipeline() {
  std::ostringstream out;
  const auto hg = generate_high_girth(60, 5, 11);
  const auto space = metric_from_graph(hg.graph, 60.0);
  out << io::dump_json(io::to_json(hg.graph));
  const auto ens = sample_ensemble({hg.graph, 30, 0.5, 3});
  out << io::ensemble_csv(ensemble_report(ens, 5));
  out << io::dump_json(io::to_json(extract_topk(jitter(space, 1e-6, 4), 3, true), 60));
  out << io::dump_json(io::to_json(jl_project(bourgain_embed(space, 8, 5), 30, 6)));
  const auto small = testgraphs::random_points(10, 2, 7);
  FitConfig cfg;
  cfg.d = 2;
  cfg.seed = 8;
  cfg.restarts = 6;
  cfg.iterations = 300;
  out << io::dump_json(io::to_json(fit_triplets(small, extract_triplets(small), cfg)));
  out << io::bounds_csv(certify_lower_bound({BoundMode::topk_mixed, 500}));
  return out.str();
}

int quiet_dispatch(std::vector<std::string> args) {
  args.insert(args.begin(), "ordembed");
  std::ostringstream sink;
  auto* old = std::cout.rdbuf(sink.rdbuf());
  const int code = cli::dispatch(args);
  std::cout.rdbuf(old);
  return code;
}

// 10. Same seed, 1 vs 8 threads: identical bytes.
Outcome determinism() {
  Outcome o;
  set_thread_count(1);
  const std::string one = library_pipeline();
  set_thread_count(8);
  const std::string eight = library_pipeline();
  set_thread_count(1);
  o.note(fmt("library pipeline: %zu bytes, %s", one.size(), one == eight ? "identical" : "different"));
  o.require(one == eight, "library output depends on the thread count");

  const fs::path root = fs::temp_directory_path() / ("ordembed_accept_" + std::to_string(::getpid()));
  fs::remove_all(root);
  std::size_t compared = 0, differing = 0;
  for (const char* t : {"1", "8"}) {
    const std::string d = (root / t).string();
    fs::create_directories(d);
    const std::vector<std::vector<std::string>> steps = {
        {"gen-graph", "--n", "50", "--girth", "5", "--seed", "21", "--out", d + "/g.json", "--report", d + "/gr.json"},
        {"metric-from-graph", "--graph", d + "/g.json", "--out", d + "/m.json"},
        {"constraints", "--metric", d + "/m.json", "--family", "topk_unmixed", "--k", "4", "--jitter", "1e-6",
         "--seed", "22", "--out", d + "/c.json"},
        {"ensemble", "--graph", d + "/g.json", "--N", "30", "--seed", "23", "--out", d + "/e.json", "--csv",
         d + "/e.csv"},
        {"bourgain", "--metric", d + "/m.json", "--reps", "6", "--jl-dim", "20", "--seed", "24", "--out",
         d + "/b.json", "--report", d + "/br.json"},
        {"fit", "--metric", d + "/m.json", "--dim", "3", "--seed", "25", "--restarts", "4", "--iterations", "100",
         "--out", d + "/f.json", "--report", d + "/fr.json"},
    };
    for (auto step : steps) {
      step.push_back("--threads");
      step.push_back(t);
      const int code = quiet_dispatch(step);
      o.require(code == 0, step.front() + " exited with " + std::to_string(code));
    }
  }
  for (const auto& entry : fs::directory_iterator(root / "1")) {
    const std::string name = entry.path().filename().string();
    if (name.find(".manifest.json") != std::string::npos) continue;
    ++compared;
    if (io::read_text_file(entry.path().string()) != io::read_text_file((root / "8" / name).string())) {
      ++differing;
      o.note("differs: " + name);
    }
  }
  fs::remove_all(root);
  set_thread_count(1);
  o.note(fmt("CLI: %zu artifacts compared, %zu differ", compared, differing));
  o.require(compared > 0 && differing == 0, "CLI artifacts depend on the thread count");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"terminal embedding exactness", terminal_exactness},
      {"ordering-count oracle equivalence", ordering_count},
      {"sign-bound identity", sign_identity},
      {"faraway/witness property", faraway_property},
      {"union-bound calculator", union_bound},
      {"relaxation <= distortion", relaxation_vs_distortion},
      {"Bourgain + JL route", bourgain_route},
      {"bound calculators", bound_calculators},
      {"fitter sanity", fitter_sanity},
      {"determinism", determinism},
  };
  set_thread_count(1);
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.note(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (const auto& d : o.details) std::cout << "    " << d << "\n";
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].first
              << fmt(" (%.1f s)", secs) << std::endl;
    failures += !o.pass;
  }
  return failures == 0 ? 0 : 1;
}
