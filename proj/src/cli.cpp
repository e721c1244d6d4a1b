#include "ordembed/cli.hpp"

#include <openssl/evp.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "ordembed/baselines.hpp"
#include "ordembed/bounds.hpp"
#include "ordembed/constraints.hpp"
#include "ordembed/error.hpp"
#include "ordembed/girth_lab.hpp"
#include "ordembed/io.hpp"
#include "ordembed/metric.hpp"
#include "ordembed/parallel.hpp"
#include "ordembed/random.hpp"
#include "ordembed/terminal_embed.hpp"
#include "ordembed/verifier.hpp"

namespace ordembed::cli {
namespace {

using io::Json;
using Clock = std::chrono::steady_clock;

/// Records inputs and seeds, writes artifacts with their manifests.
class Run {
 public:
  explicit Run(std::vector<std::string> args) : args_(std::move(args)), start_(Clock::now()) {}

  void seed(const std::string& name, std::uint64_t value) { seeds_[name] = value; }

  std::string read(const std::string& path) {
    std::string text = io::read_text_file(path);
    inputs_.emplace_back(path, sha256_hex(text));
    return text;
  }
  Json read_json(const std::string& path) { return io::parse_json(read(path), path); }

  FiniteMetricSpace metric(const std::string& path) { return wrap(path, [&] { return io::metric_from_json(read_json(path)); }); }
  SimpleGraph graph(const std::string& path) { return wrap(path, [&] { return io::graph_from_json(read_json(path)); }); }
  Embedding embedding(const std::string& path) {
    return wrap(path, [&] { return io::embedding_from_json(read_json(path)); });
  }
  ConstraintSet constraints(const std::string& path, std::size_t n) {
    return wrap(path, [&] { return io::constraints_from_json(read_json(path), n); });
  }

  /// Writes `content` to `path` and the run manifest to `path`.manifest.json.
  void emit(const std::string& path, const std::string& content) {
    io::write_text_file(path, content);
    Json seeds = Json::object();
    for (const auto& [name, value] : seeds_) seeds[name] = value;
    Json inputs = Json::array();
    for (const auto& [p, digest] : inputs_) inputs.push_back(Json{{"path", p}, {"sha256", digest}});
    std::string command;
    for (const std::string& a : args_) command += (command.empty() ? "" : " ") + a;
    const double wall = std::chrono::duration<double>(Clock::now() - start_).count();
    const Json manifest{{"tool", "ordembed"},
                        {"version", kToolVersion},
                        {"command_line", command},
                        {"seeds", std::move(seeds)},
                        {"inputs", std::move(inputs)},
                        {"output", Json{{"path", path}, {"sha256", sha256_hex(content)}}},
                        {"threads", thread_count()},
                        {"wall_time_seconds", wall}};
    io::write_text_file(path + ".manifest.json", io::dump_json(manifest));
  }

 private:
  template <class F>
  static auto wrap(const std::string& path, F&& f) -> decltype(f()) {
    try {
      return f();
    } catch (const IoError&) {
      throw;
    } catch (const ValidationError& e) {
      const std::string what = e.what();
      if (what.rfind(path, 0) == 0) throw;
      throw ValidationError(path + ": " + what);
    }
  }

  std::vector<std::string> args_;
  Clock::time_point start_;
  std::map<std::string, std::uint64_t> seeds_;
  std::vector<std::pair<std::string, std::string>> inputs_;
};

double parse_norm(const std::string& text) {
  if (text == "inf" || text == "infinity") return kInfinityNorm;
  try {
    std::size_t used = 0;
    const double p = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    if (!(p >= 1)) throw ValidationError("norm exponent p must be >= 1 or 'inf'");
    return p;
  } catch (const std::logic_error&) {
    throw ValidationError("cannot parse norm exponent '" + text + "'");
  }
}

TiePolicy parse_ties(const std::string& text) {
  if (text == "skip") return TiePolicy::skip;
  if (text == "error") return TiePolicy::error;
  throw ValidationError("tie policy must be 'skip' or 'error'");
}

std::size_t default_threads() {
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : hw;
}

std::string fixed(double x) { return io::format_double(x); }

struct Options {
  std::size_t threads = default_threads();
  std::uint64_t seed = 0;
  std::size_t n = 0, g = 0, k = 0, N = 2, d = 1, reps = 24, jl_dim = 0, restarts = 16, iterations = 2000;
  std::optional<std::size_t> budget, k_opt, girth_opt, d_min, d_max;
  std::optional<double> cap, lambda, beta_exp, jitter;
  std::optional<std::uint64_t> M;
  double p_keep = 0.5, tol = 1e-9, tie_tol = 0, c = 8, margin = 1e-3, step = 1.0;
  std::string p_norm = "2";
  std::string graph, metric, embedding, constraints, out, report, csv, family, ties, tie_break = "error", mode;
  std::vector<std::size_t> terminals;
  bool oracle = false, all_witnesses = false;
};

FamilySpec family_spec(const Options& o, TiePolicy default_ties) {
  FamilySpec spec;
  spec.family = family_from_string(o.family);
  spec.terminals = o.terminals;
  spec.ties = o.ties.empty() ? default_ties : parse_ties(o.ties);
  if (spec.family == Family::topk_mixed || spec.family == Family::topk_unmixed) {
    if (!o.k_opt) throw ValidationError("--k is required for top-k families");
    spec.k = *o.k_opt;
  }
  if (spec.family == Family::terminal && spec.terminals.empty()) {
    throw ValidationError("--terminals is required for the terminal family");
  }
  return spec;
}

/// Family from the options; a triplet family with --terminals keeps only
/// triplets anchored at a terminal over non-terminal targets.
ConstraintSet family_constraints(const FiniteMetricSpace& space, const Options& o, TiePolicy default_ties) {
  FamilySpec spec = family_spec(o, default_ties);
  if (spec.family == Family::triplet && !spec.terminals.empty()) {
    return restrict_triplets_to_terminals(extract_triplets(space, spec.ties), spec.terminals);
  }
  return extract(space, spec);
}

// ---- subcommands ----

int gen_graph(Run& run, const Options& o) {
  run.seed("seed", o.seed);
  HighGirthResult r = generate_high_girth(o.n, o.g, o.seed, o.budget);
  run.emit(o.out, io::dump_json(io::to_json(r.graph)));
  const std::string report = io::dump_json(io::to_json(r.report));
  if (!o.report.empty()) run.emit(o.report, report);
  std::cout << report;
  if (r.report.shortfall) {
    std::cerr << "note: " << r.report.edges << " edges is below the density target " << fixed(r.report.target_edges)
              << "\n";
  }
  return 0;
}

int metric_from_graph_cmd(Run& run, const Options& o) {
  const SimpleGraph g = run.graph(o.graph);
  const double cap = o.cap.value_or(static_cast<double>(g.vertex_count()));
  if (!(cap > 0) || !std::isfinite(cap)) throw ValidationError("--disconnected-cap must be a positive finite distance");
  run.emit(o.out, io::dump_json(io::to_json(metric_from_graph(g, cap))));
  return 0;
}

int check_metric_cmd(Run& run, const Options& o) {
  const FiniteMetricSpace space = run.metric(o.metric);
  const MetricReport report = check_metric(space, o.tol);
  const std::string text = io::dump_json(io::to_json(report));
  if (!o.out.empty()) run.emit(o.out, text);
  std::cout << text;
  if (!report.ok()) {
    std::cerr << o.metric << ": " << report.violations.size() << " metric axiom violation(s)\n";
    return 1;
  }
  return 0;
}

int constraints_cmd(Run& run, const Options& o) {
  FiniteMetricSpace space = run.metric(o.metric);
  if (o.jitter) {
    run.seed("seed", o.seed);
    space = jitter(space, *o.jitter, o.seed);
  }
  const Family family = family_from_string(o.family);
  const TiePolicy default_ties = family == Family::triplet || family == Family::full ? TiePolicy::skip : TiePolicy::error;
  const ConstraintSet cs = family_constraints(space, o, default_ties);
  run.emit(o.out, io::dump_json(io::to_json(cs, space.size())));
  std::cout << to_string(cs.family) << ": " << cs.comparisons.size() << " comparisons\n";
  return 0;
}

ConstraintSet constraints_for(Run& run, const Options& o, const std::optional<FiniteMetricSpace>& space, std::size_t n) {
  if (!o.constraints.empty()) return run.constraints(o.constraints, n);
  if (o.family.empty()) throw ValidationError("give --constraints or --family");
  if (!space) throw ValidationError("--family needs --metric to generate comparisons");
  return family_constraints(*space, o, TiePolicy::skip);
}

int verify_cmd(Run& run, const Options& o) {
  const Embedding emb = run.embedding(o.embedding);
  std::optional<FiniteMetricSpace> space;
  if (!o.metric.empty()) space = run.metric(o.metric);
  if (space && space->size() != emb.size()) throw ValidationError("metric and embedding have different n");
  const ConstraintSet cs = constraints_for(run, o, space, emb.size());
  const CheckOptions opts{parse_norm(o.p_norm), o.tie_tol};
  const ViolationReport report = space ? check_constraints(emb, cs, *space, opts) : check_constraints(emb, cs, opts);
  Json j = io::to_json(report);
  j["family"] = to_string(cs.family);
  std::optional<double> relax;
  if (space) {
    relax = relaxation(*space, emb, cs, opts.p);
    j["relaxation"] = io::json_real(*relax);
  }
  const std::string text = io::dump_json(j);
  if (!o.out.empty()) run.emit(o.out, text);
  if (!o.csv.empty()) run.emit(o.csv, io::violations_csv(report));
  std::cout << "violations: " << report.violated.size() << " of " << report.total << "\n";
  if (relax) std::cout << "relaxation: " << fixed(*relax) << "\n";
  return 0;
}

int relaxation_cmd(Run& run, const Options& o) {
  const FiniteMetricSpace space = run.metric(o.metric);
  const Embedding emb = run.embedding(o.embedding);
  if (space.size() != emb.size()) throw ValidationError("metric and embedding have different n");
  const ConstraintSet cs = constraints_for(run, o, space, emb.size());
  const double p = parse_norm(o.p_norm);
  const double r = relaxation(space, emb, cs, p);
  if (!o.out.empty()) {
    run.emit(o.out, io::dump_json(Json{{"family", to_string(cs.family)},
                                       {"comparisons", cs.comparisons.size()},
                                       {"p", io::json_real(p)},
                                       {"relaxation", io::json_real(r)}}));
  }
  std::cout << "relaxation: " << fixed(r) << "\n";
  return 0;
}

int embed_terminal_cmd(Run& run, const Options& o) {
  const FiniteMetricSpace space = run.metric(o.metric);
  TieBreak tb;
  if (o.tie_break == "error") {
    tb = TieBreak::error;
  } else if (o.tie_break == "lexicographic") {
    tb = TieBreak::lexicographic;
  } else {
    throw ValidationError("--tie-break must be 'error' or 'lexicographic'");
  }
  const TerminalEmbedding te = embed_terminals(space, o.terminals, o.M, tb, parse_norm(o.p_norm));
  const DominanceReport dom = dominance_check(te, space);
  run.emit(o.out, io::dump_json(io::to_json(te.emb)));
  Json report = io::to_json(dom);
  report["M"] = te.M;
  report["p"] = io::json_real(te.p);
  report["terminals"] = te.ranks.terminals();
  const std::string text = io::dump_json(report);
  if (!o.report.empty()) run.emit(o.report, text);
  std::cout << "M: " << te.M << "\ndominance: " << (dom.ok() ? "ok" : "FAILED") << " (" << dom.pairs_checked
            << " pairs)\n";
  if (!dom.ok()) {
    std::cerr << "dominance check failed: " << dom.mismatches.front().problem << "\n";
    return 1;
  }
  return 0;
}

int ensemble_cmd(Run& run, const Options& o) {
  run.seed("seed", o.seed);
  const SimpleGraph base = run.graph(o.graph);
  const std::optional<std::size_t> measured = girth(base);
  std::size_t g = 0;
  if (o.girth_opt) {
    g = *o.girth_opt;
    if (measured && *measured < g) {
      throw ValidationError("--girth " + std::to_string(g) + " exceeds the base graph's girth " +
                            std::to_string(*measured));
    }
  } else {
    if (!measured) throw ValidationError("base graph is a forest; pass --girth explicitly");
    g = *measured;
  }
  const auto ensemble = sample_ensemble(EnsembleSpec{base, o.N, o.p_keep, o.seed});
  const EnsembleReport report = ensemble_report(ensemble, g);
  const UnionBound ub = union_bound_log(static_cast<double>(base.vertex_count()),
                                        static_cast<double>(base.edge_count()), static_cast<double>(o.N));
  Json j{{"base", Json{{"n", base.vertex_count()}, {"m", base.edge_count()}, {"girth", g}}},
         {"N", o.N},
         {"p", o.p_keep},
         {"seed", o.seed}};
  j["report"] = io::to_json(report);
  j["union_bound"] = io::to_json(ub);
  if (o.all_witnesses) {
    Json all = Json::array();
    for (std::size_t i = 0; i < ensemble.size(); ++i) {
      for (std::size_t jj = i + 1; jj < ensemble.size(); ++jj) {
        for (const WitnessCertificate& w : ordembed::all_witnesses(ensemble[i], ensemble[jj], i, jj)) {
          all.push_back(io::to_json(w));
        }
      }
    }
    j["all_witnesses"] = std::move(all);
  }
  run.emit(o.out, io::dump_json(j));
  if (!o.csv.empty()) run.emit(o.csv, io::ensemble_csv(report));
  std::cout << "faraway fraction: " << fixed(report.faraway_fraction) << " (" << report.faraway_pairs << " of "
            << report.pairs << ")\ncertificates pass: " << (report.all_certificates_pass ? "yes" : "NO")
            << "\nlog2 union bound: " << fixed(ub.log2_bound) << "\n";
  return 0;
}

int bounds_cmd(Run& run, const Options& o) {
  BoundQuery q;
  q.mode = bound_mode_from_string(o.mode);
  q.n = o.n;
  q.k = o.k_opt;
  q.lambda = o.lambda;
  q.beta_exp = o.beta_exp;
  q.p = parse_norm(o.p_norm);
  if (o.d_min || o.d_max) {
    const std::size_t lo = o.d_min.value_or(1), hi = o.d_max.value_or(o.n > 0 ? o.n - 1 : 0);
    if (lo > hi) throw ValidationError("--d-min exceeds --d-max");
    for (std::size_t d = lo; d <= hi; ++d) q.d_range.push_back(d);
  }
  const BoundReport report = certify_lower_bound(q);
  const std::string text = io::dump_json(io::to_json(report));
  if (!o.out.empty()) run.emit(o.out, text);
  if (!o.csv.empty()) run.emit(o.csv, io::bounds_csv(report));
  std::cout << to_string(report.mode) << " n=" << report.n;
  if (report.k) std::cout << " k=" << *report.k;
  std::cout << ": certified_d=" << report.certified_d << " (ratio " << fixed(report.certified_ratio) << ")\n";
  return 0;
}

int relaxation_floor_cmd(Run& run, const Options& o) {
  const RelaxationFloor r = relaxation_floor(o.n, o.d, o.c);
  const std::string text = io::dump_json(io::to_json(r));
  if (!o.out.empty()) run.emit(o.out, text);
  std::cout << text;
  return 0;
}

int fit_cmd(Run& run, const Options& o) {
  run.seed("seed", o.seed);
  const FiniteMetricSpace space = run.metric(o.metric);
  const ConstraintSet cs =
      o.constraints.empty() ? extract_triplets(space, TiePolicy::skip) : run.constraints(o.constraints, space.size());
  FitConfig cfg;
  cfg.d = o.d;
  cfg.margin_rel = o.margin;
  cfg.step = o.step;
  cfg.iterations = o.iterations;
  cfg.restarts = o.restarts;
  cfg.seed = o.seed;
  const FitResult r = fit_triplets(space, cs, cfg);
  run.emit(o.out, io::dump_json(io::to_json(r.emb)));
  const std::string text = io::dump_json(io::to_json(r));
  if (!o.report.empty()) run.emit(o.report, text);
  std::cout << r.status << ": loss " << fixed(r.loss) << ", " << r.violations << " violation(s) in d=" << o.d << "\n";
  return 0;
}

int bourgain_cmd(Run& run, const Options& o) {
  run.seed("seed", o.seed);
  const FiniteMetricSpace space = run.metric(o.metric);
  Embedding emb = bourgain_embed(space, o.reps, o.seed);
  if (o.jl_dim > 0) {
    // Separate stream so the projection does not reuse the subset draws.
    emb = jl_project(emb, o.jl_dim, splitmix64(o.seed ^ 0x6a09e667f3bcc909ULL));
  }
  run.emit(o.out, io::dump_json(io::to_json(emb)));
  Json report{{"n", emb.size()}, {"dim", emb.dim()}, {"reps_per_scale", o.reps}, {"jl_dim", o.jl_dim}};
  try {
    report["distortion"] = io::json_real(distortion(space, emb));
  } catch (const ValidationError& e) {
    report["distortion"] = nullptr;
    report["distortion_error"] = e.what();
  }
  report["triplet_relaxation"] = io::json_real(relaxation(space, emb, FamilySpec{Family::triplet, {}, 1, TiePolicy::skip}));
  const std::string text = io::dump_json(report);
  if (!o.report.empty()) run.emit(o.report, text);
  std::cout << text;
  return 0;
}

int count_orderings_cmd(Run& run, const Options& o) {
  if (o.n < 3) throw ValidationError("--n must be >= 3");
  Json j{{"n", o.n}};
  if (o.n <= 200) {
    const auto exact = count_triplet_orderings_exact(o.n);
    j["formula"] = exact.str();
    std::cout << "formula: " << exact << "\n";
  }
  j["log_formula"] = io::json_real(triplet_orderings_log(o.n).value);
  j["log_superfactorial"] = io::json_real(log_superfactorial(o.n));
  std::cout << "ln(formula or lower bound): " << fixed(j["log_formula"].get<double>()) << "\n";
  if (o.oracle) {
    if (o.n > 5) throw ValidationError("--oracle supports n in [3, 5]");
    const std::uint64_t oracle = count_triplet_orderings_brute_force(o.n);
    const bool match = count_triplet_orderings_exact(o.n) == oracle;
    j["oracle"] = oracle;
    j["match"] = match;
    std::cout << "oracle: " << oracle << "\n";
    if (!match) std::cout << "MISMATCH: formula and brute-force projection disagree\n";
  }
  if (!o.out.empty()) run.emit(o.out, io::dump_json(j));
  return 0;
}

// ---- option wiring ----

CLI::Option* add_threads(CLI::App* sub, Options& o) {
  return sub->add_option("--threads", o.threads, "worker threads (count); output does not depend on it")
      ->envname("ORDEMBED_THREADS")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
}

void add_family_options(CLI::App* sub, Options& o, bool with_ties) {
  sub->add_option("--family", o.family, "comparison family: triplet, terminal, topk_mixed, topk_unmixed, full");
  sub->add_option("--terminals", o.terminals,
                  "terminal indices, comma separated (terminal family; with triplet, restricts to terminal anchors)")
      ->delimiter(',');
  sub->add_option("--k", o.k_opt, "neighbours per point (top-k families)");
  if (with_ties) {
    sub->add_option("--ties", o.ties,
                    "exact distance ties: skip or error (default: error for terminal/top-k, skip otherwise)");
  }
}

}  // namespace

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1) {
    throw IoError("SHA-256 computation failed");
  }
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

int dispatch(const std::vector<std::string>& args) {
  Options o;
  CLI::App app{"ordembed: construct, verify and stress-test ordinal embeddings of finite metric spaces"};
  app.name("ordembed");
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  std::map<CLI::App*, std::function<int(Run&, const Options&)>> handlers;
  auto sub = [&](const char* name, const char* help, std::function<int(Run&, const Options&)> h) {
    CLI::App* s = app.add_subcommand(name, help);
    add_threads(s, o);
    handlers[s] = std::move(h);
    return s;
  };

  auto* s = sub("gen-graph", "random greedy graph of girth >= g", gen_graph);
  s->add_option("--n", o.n, "vertices (count)")->required();
  s->add_option("--girth", o.g, "target girth (hops, >= 3)")->required();
  s->add_option("--seed", o.seed, "RNG seed")->required();
  s->add_option("--budget", o.budget, "pair proposals (count; default all n(n-1)/2 pairs)");
  s->add_option("--out", o.out, "graph JSON output path")->required();
  s->add_option("--report", o.report, "report JSON output path (also printed)");

  s = sub("metric-from-graph", "shortest-path metric of a graph", metric_from_graph_cmd);
  s->add_option("--graph", o.graph, "graph JSON input")->required();
  s->add_option("--disconnected-cap", o.cap, "distance for disconnected pairs (hops; default n)");
  s->add_option("--out", o.out, "metric JSON output path")->required();

  s = sub("check-metric", "report metric axiom violations; exit 1 if any", check_metric_cmd);
  s->add_option("--metric", o.metric, "metric JSON input")->required();
  s->add_option("--tol", o.tol, "triangle inequality tolerance (distance units)")->capture_default_str();
  s->add_option("--out", o.out, "report JSON output path (also printed)");

  s = sub("constraints", "extract a comparison family from a metric", constraints_cmd);
  s->add_option("--metric", o.metric, "metric JSON input")->required();
  add_family_options(s, o, true);
  s->get_option("--family")->required();
  s->add_option("--jitter", o.jitter, "add seeded U[0,eps) noise to distances before extraction (distance units)");
  s->add_option("--seed", o.seed, "RNG seed (required with --jitter)");
  s->add_option("--out", o.out, "constraints JSON output path")->required();

  s = sub("verify", "check an embedding against a comparison family", verify_cmd);
  s->add_option("--embedding", o.embedding, "embedding JSON input")->required();
  s->add_option("--metric", o.metric, "metric JSON input (needed with --family and for ratios)");
  s->add_option("--constraints", o.constraints, "constraints JSON input (instead of --family)");
  add_family_options(s, o, false);
  s->add_option("--p", o.p_norm, "norm exponent of the embedding space (>= 1 or 'inf')")->capture_default_str();
  s->add_option("--tie-tol", o.tie_tol, "embedded gaps at or below this count as violations (distance units)")
      ->capture_default_str();
  s->add_option("--out", o.out, "violation report JSON output path");
  s->add_option("--csv", o.csv, "violation table CSV output path");

  s = sub("relaxation", "ordinal relaxation of an embedding", relaxation_cmd);
  s->add_option("--metric", o.metric, "metric JSON input")->required();
  s->add_option("--embedding", o.embedding, "embedding JSON input")->required();
  s->add_option("--constraints", o.constraints, "constraints JSON input (instead of --family)");
  add_family_options(s, o, false);
  s->add_option("--p", o.p_norm, "norm exponent (>= 1 or 'inf')")->capture_default_str();
  s->add_option("--out", o.out, "result JSON output path");

  s = sub("embed-terminal", "exact terminal ordinal embedding into k dimensions", embed_terminal_cmd);
  s->add_option("--metric", o.metric, "metric JSON input")->required();
  s->add_option("--terminals", o.terminals, "terminal indices, comma separated")->delimiter(',')->required();
  s->add_option("--M", o.M, "terminal offset (integer; default: smallest valid, k^3 n^2 for p=2)");
  s->add_option("--p", o.p_norm, "target norm exponent (> 1 or 'inf')")->capture_default_str();
  s->add_option("--tie-break", o.tie_break, "equal terminal distances: error or lexicographic")->capture_default_str();
  s->add_option("--out", o.out, "embedding JSON output path")->required();
  s->add_option("--report", o.report, "dominance report JSON output path");

  s = sub("ensemble", "sample subgraph ensembles and audit faraway pairs", ensemble_cmd);
  s->add_option("--graph", o.graph, "base graph JSON input")->required();
  s->add_option("--N", o.N, "subgraphs (count, >= 2)")->capture_default_str();
  s->add_option("--p", o.p_keep, "edge keep probability in (0,1)")->capture_default_str();
  s->add_option("--seed", o.seed, "RNG seed")->required();
  s->add_option("--girth", o.girth_opt, "girth used for the g-1 checks (hops; default: measured)");
  s->add_flag("--all-witnesses", o.all_witnesses, "also list every witness of every pair");
  s->add_option("--out", o.out, "report JSON output path")->required();
  s->add_option("--csv", o.csv, "per-pair CSV output path");

  s = sub("bounds", "certified dimension lower bounds from counting", bounds_cmd);
  s->add_option("--mode", o.mode,
                "triplet, terminal_linear, terminal_sublinear, terminal_no_inter, topk_mixed, topk_unmixed")
      ->required();
  s->add_option("--n", o.n, "points (count)")->required();
  s->add_option("--k", o.k_opt, "terminals or neighbours (count; overrides --lambda)");
  s->add_option("--lambda", o.lambda,
                "k = round(lambda n^(1-beta_exp)) (default 0.5 for linear terminal modes, 1 otherwise)");
  s->add_option("--beta-exp", o.beta_exp, "exponent in k = lambda n^(1-beta_exp) (default 0 linear, 0.5 otherwise)");
  s->add_option("--d-min", o.d_min, "smallest dimension tested (default 1)");
  s->add_option("--d-max", o.d_max, "largest dimension tested (default n-1)");
  s->add_option("--p", o.p_norm, "polynomial degree / norm exponent (>= 2)")->capture_default_str();
  s->add_option("--out", o.out, "report JSON output path");
  s->add_option("--csv", o.csv, "per-dimension CSV output path");

  s = sub("relaxation-floor", "girth-based relaxation forced in d dimensions (both log bases)", relaxation_floor_cmd);
  s->add_option("--n", o.n, "points (count, >= 3)")->required();
  s->add_option("--d", o.d, "dimension (>= 1)")->required();
  s->add_option("--c", o.c, "additive constant in the denominator")->capture_default_str();
  s->add_option("--out", o.out, "result JSON output path (also printed)");

  s = sub("fit", "hinge-loss triplet fitter; zero violations certify triplet dimension <= d", fit_cmd);
  s->add_option("--metric", o.metric, "metric JSON input")->required();
  s->add_option("--constraints", o.constraints, "triplet constraints JSON (default: all strict triplets)");
  s->add_option("--dim", o.d, "target dimension")->required();
  s->add_option("--seed", o.seed, "RNG seed")->required();
  s->add_option("--restarts", o.restarts, "random restarts (count)")->capture_default_str();
  s->add_option("--iterations", o.iterations, "descent steps per phase per restart (count)")->capture_default_str();
  s->add_option("--margin", o.margin, "margin relative to the median squared distance")->capture_default_str();
  s->add_option("--step", o.step, "initial line-search step")->capture_default_str();
  s->add_option("--out", o.out, "embedding JSON output path")->required();
  s->add_option("--report", o.report, "fit report JSON output path");

  s = sub("bourgain", "Bourgain embedding, optionally followed by a JL projection", bourgain_cmd);
  s->add_option("--metric", o.metric, "metric JSON input")->required();
  s->add_option("--reps", o.reps, "repetitions per scale (count)")->capture_default_str();
  s->add_option("--jl-dim", o.jl_dim, "JL output dimension (0 = no projection)")->capture_default_str();
  s->add_option("--seed", o.seed, "RNG seed")->required();
  s->add_option("--out", o.out, "embedding JSON output path")->required();
  s->add_option("--report", o.report, "distortion/relaxation JSON output path (also printed)");

  s = sub("count-orderings", "number of distinct triplet orders of n points", count_orderings_cmd);
  s->add_option("--n", o.n, "points (count, >= 3)")->required();
  s->add_flag("--oracle", o.oracle, "also count by brute-force projection of all distance orders (n <= 5)");
  s->add_option("--out", o.out, "result JSON output path");

  std::vector<const char*> argv;
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n\n";
    const auto parsed = app.get_subcommands();
    std::cerr << (parsed.empty() ? app.help() : parsed.front()->help());
    return 1;
  }

  CLI::App* chosen = app.get_subcommands().front();
  try {
    if (chosen->get_name() == "constraints" && o.jitter && chosen->count("--seed") == 0) {
      throw ValidationError("--jitter is randomized and requires --seed");
    }
    set_thread_count(o.threads);
    Run run(args);
    return handlers.at(chosen)(run, o);
  } catch (const IoError& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

int dispatch(int argc, const char* const* argv) {
  std::vector<std::string> args(argv, argv + argc);
  return dispatch(args);
}

}  // namespace ordembed::cli
