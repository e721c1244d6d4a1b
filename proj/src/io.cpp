#include "ordembed/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "ordembed/error.hpp"

namespace ordembed::io {
namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) { throw ValidationError(path + ": " + what); }

std::string at(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

const Json& field(const Json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) fail(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) fail(path + "." + key, "missing field");
  return *it;
}

const Json* optional_field(const Json& obj, const char* key) {
  auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

const Json& array(const Json& v, const std::string& path) {
  if (!v.is_array()) fail(path, "expected an array");
  return v;
}

std::size_t index(const Json& v, const std::string& path) {
  if (!v.is_number_unsigned()) fail(path, "expected a nonnegative integer");
  return v.get<std::size_t>();
}

double real(const Json& v, const std::string& path) {
  if (!v.is_number()) fail(path, "expected a number");
  return v.get<double>();
}

std::vector<std::size_t> index_list(const Json& v, const std::string& path) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < array(v, path).size(); ++i) out.push_back(index(v[i], at(path, i)));
  return out;
}

Json optional_index(const std::optional<std::size_t>& v) { return v ? Json(*v) : Json(nullptr); }

Json edge_json(const Edge& e) { return Json::array({e.u, e.v}); }

std::string csv_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return format_double(x);
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("error while reading '" + path + "'");
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("error while writing '" + path + "'");
}

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(source + ": malformed JSON (" + e.what() + ")");
  }
}

Json read_json_file(const std::string& path) { return parse_json(read_text_file(path), path); }

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

Json json_real(double x) {
  if (std::isfinite(x)) return x;
  if (std::isnan(x)) return "nan";
  return x > 0 ? "inf" : "-inf";
}

Json to_json(const SimpleGraph& g) {
  Json edges = Json::array();
  for (const Edge& e : g.edges()) edges.push_back(edge_json(e));
  return Json{{"n", g.vertex_count()}, {"edges", std::move(edges)}};
}

SimpleGraph graph_from_json(const Json& j) {
  const std::size_t n = index(field(j, "n", "$"), "$.n");
  const Json& edges = array(field(j, "edges", "$"), "$.edges");
  std::vector<Edge> out;
  out.reserve(edges.size());
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string path = at("$.edges", i);
    const Json& e = array(edges[i], path);
    if (e.size() != 2) fail(path, "expected [u, v]");
    const std::size_t u = index(e[0], at(path, 0)), v = index(e[1], at(path, 1));
    if (u >= n || v >= n) fail(path, "endpoint out of range for n=" + std::to_string(n));
    if (u == v) fail(path, "self-loop");
    out.emplace_back(u, v);
  }
  try {
    return SimpleGraph(n, std::move(out));
  } catch (const ValidationError& e) {
    fail("$.edges", e.what());
  }
}

Json to_json(const FiniteMetricSpace& space) {
  Json dist = Json::array();
  for (double d : space.upper_triangle()) {
    if (!std::isfinite(d)) throw ValidationError("metric has a non-finite distance; export needs a disconnected cap");
    dist.push_back(d);
  }
  return Json{{"n", space.size()}, {"dist", std::move(dist)}};
}

FiniteMetricSpace metric_from_json(const Json& j) {
  const std::size_t n = index(field(j, "n", "$"), "$.n");
  if (n < 1) fail("$.n", "must be >= 1");
  const Json& dist = array(field(j, "dist", "$"), "$.dist");
  const std::size_t expected = n * (n - 1) / 2;
  if (dist.size() != expected) {
    fail("$.dist", "has length " + std::to_string(dist.size()) + ", expected n(n-1)/2 = " + std::to_string(expected));
  }
  std::vector<double> upper(expected);
  for (std::size_t i = 0; i < expected; ++i) {
    const double d = real(dist[i], at("$.dist", i));
    if (!std::isfinite(d) || d < 0) fail(at("$.dist", i), "expected a finite nonnegative distance");
    upper[i] = d;
  }
  return FiniteMetricSpace::from_upper_triangle(n, upper);
}

Json to_json(const ConstraintSet& cs, std::optional<std::size_t> n) {
  Json params = Json::object();
  if (n) params["n"] = *n;
  if (!cs.terminals.empty()) params["terminals"] = cs.terminals;
  if (cs.k) params["k"] = *cs.k;
  Json comparisons = Json::array();
  for (const Comparison& c : cs.comparisons) comparisons.push_back(Json::array({c.a, c.b, c.c, c.d}));
  return Json{{"family", to_string(cs.family)}, {"params", std::move(params)}, {"comparisons", std::move(comparisons)}};
}

ConstraintSet constraints_from_json(const Json& j, std::optional<std::size_t> n) {
  ConstraintSet cs;
  const Json& family = field(j, "family", "$");
  if (!family.is_string()) fail("$.family", "expected a string");
  try {
    cs.family = family_from_string(family.get<std::string>());
  } catch (const ValidationError& e) {
    fail("$.family", e.what());
  }
  std::optional<std::size_t> declared_n;
  if (const Json* params = optional_field(j, "params")) {
    if (!params->is_object()) fail("$.params", "expected an object");
    if (const Json* t = optional_field(*params, "terminals")) cs.terminals = index_list(*t, "$.params.terminals");
    if (const Json* k = optional_field(*params, "k")) cs.k = index(*k, "$.params.k");
    if (const Json* pn = optional_field(*params, "n")) declared_n = index(*pn, "$.params.n");
  }
  const Json& comparisons = array(field(j, "comparisons", "$"), "$.comparisons");
  std::size_t largest = 0;
  cs.comparisons.reserve(comparisons.size());
  for (std::size_t i = 0; i < comparisons.size(); ++i) {
    const std::string path = at("$.comparisons", i);
    const Json& c = array(comparisons[i], path);
    if (c.size() != 4) fail(path, "expected [a, b, c, d]");
    std::size_t v[4];
    for (std::size_t q = 0; q < 4; ++q) {
      v[q] = index(c[q], at(path, q));
      if (v[q] > UINT32_MAX) fail(at(path, q), "index too large");
      largest = std::max(largest, v[q]);
    }
    cs.comparisons.push_back({static_cast<std::uint32_t>(v[0]), static_cast<std::uint32_t>(v[1]),
                              static_cast<std::uint32_t>(v[2]), static_cast<std::uint32_t>(v[3])});
  }
  if (n && declared_n && *n != *declared_n) {
    fail("$.params.n", "declares n=" + std::to_string(*declared_n) + " but the metric has n=" + std::to_string(*n));
  }
  const std::size_t points = n ? *n : declared_n ? *declared_n : largest + 1;
  try {
    validate_constraints(cs, points);
  } catch (const ValidationError& e) {
    fail("$", e.what());
  }
  return cs;
}

Json to_json(const Embedding& emb) {
  Json coords = Json::array();
  for (std::size_t i = 0; i < emb.size(); ++i) {
    Json row = Json::array();
    for (double x : emb.row(i)) row.push_back(x);
    coords.push_back(std::move(row));
  }
  return Json{{"n", emb.size()}, {"dim", emb.dim()}, {"coords", std::move(coords)}};
}

Embedding embedding_from_json(const Json& j) {
  const std::size_t n = index(field(j, "n", "$"), "$.n");
  const std::size_t dim = index(field(j, "dim", "$"), "$.dim");
  if (dim < 1) fail("$.dim", "must be >= 1");
  const Json& coords = array(field(j, "coords", "$"), "$.coords");
  if (coords.size() != n) fail("$.coords", "has " + std::to_string(coords.size()) + " rows, expected n");
  std::vector<double> flat;
  flat.reserve(n * dim);
  for (std::size_t i = 0; i < n; ++i) {
    const std::string path = at("$.coords", i);
    const Json& row = array(coords[i], path);
    if (row.size() != dim) fail(path, "has " + std::to_string(row.size()) + " entries, expected dim");
    for (std::size_t q = 0; q < dim; ++q) {
      const double x = real(row[q], at(path, q));
      if (!std::isfinite(x)) fail(at(path, q), "expected a finite coordinate");
      flat.push_back(x);
    }
  }
  return Embedding(n, dim, std::move(flat));
}

Json to_json(const MetricReport& r) {
  Json violations = Json::array();
  for (const MetricViolation& v : r.violations) {
    Json e{{"kind", to_string(v.kind)}, {"i", v.i}, {"j", v.j}};
    if (v.kind == MetricViolationKind::triangle) e["k"] = v.k;
    e["excess"] = json_real(v.excess);
    violations.push_back(std::move(e));
  }
  return Json{{"ok", r.ok()}, {"violation_count", r.violations.size()}, {"violations", std::move(violations)}};
}

Json to_json(const ViolationReport& r) {
  Json violated = Json::array();
  for (const Violation& v : r.violated) {
    const Comparison& c = v.comparison;
    violated.push_back(Json{{"comparison", Json::array({c.a, c.b, c.c, c.d})},
                            {"source_gap", json_real(v.source_gap)},
                            {"embedded_gap", json_real(v.embedded_gap)}});
  }
  return Json{{"total", r.total},
              {"violation_count", r.violated.size()},
              {"max_ratio", r.max_ratio ? json_real(*r.max_ratio) : Json(nullptr)},
              {"violated", std::move(violated)}};
}

Json to_json(const DominanceReport& r) {
  Json mismatches = Json::array();
  for (const DominanceEntry& m : r.mismatches) {
    mismatches.push_back(Json{{"terminal", m.terminal}, {"point", m.point}, {"rank", m.rank}, {"problem", m.problem}});
  }
  return Json{{"ok", r.ok()},
              {"pairs_checked", r.pairs_checked},
              {"max_rank_mass", r.max_rank_mass.str()},
              {"bound", r.bound.str()},
              {"mismatches", std::move(mismatches)}};
}

Json to_json(const HighGirthReport& r) {
  return Json{{"n", r.n},
              {"target_girth", r.target_girth},
              {"edges", r.edges},
              {"target_edges", r.target_edges},
              {"shortfall", r.shortfall},
              {"proposals", r.proposals},
              {"achieved_girth", optional_index(r.achieved_girth)}};
}

Json to_json(const WitnessCertificate& c) {
  return Json{{"i", c.i}, {"j", c.j}, {"v", c.v}, {"e_i", edge_json(c.e_i)}, {"e_j", edge_json(c.e_j)}};
}

Json to_json(const EnsembleReport& r) {
  Json certificates = Json::array();
  for (const CertificateCheck& c : r.certificates) {
    Json e = to_json(c.certificate);
    e["dist_in_i"] = json_real(c.dist_in_i);
    e["dist_in_j"] = json_real(c.dist_in_j);
    e["passes"] = c.passes;
    certificates.push_back(std::move(e));
  }
  Json failing = nullptr;
  if (r.first_failing_pair) failing = Json::array({r.first_failing_pair->first, r.first_failing_pair->second});
  return Json{{"subgraphs", r.subgraphs},
              {"pairs", r.pairs},
              {"faraway_pairs", r.faraway_pairs},
              {"faraway_fraction", r.faraway_fraction},
              {"first_failing_pair", std::move(failing)},
              {"base_girth", r.base_girth},
              {"all_certificates_pass", r.all_certificates_pass},
              {"certificates", std::move(certificates)}};
}

Json to_json(const UnionBound& u) {
  return Json{{"log2_bound", json_real(u.log2_bound)},
              {"log2_n_squared", json_real(u.log2_n_squared)},
              {"log2_four_thirds_m", json_real(u.log2_four_thirds_m)},
              {"high_probability", u.high_probability},
              {"below_threshold", u.below_threshold},
              {"within_1_14_rule", u.within_1_14_rule}};
}

namespace {

Json beta_json(const BetaCandidate& b) {
  return Json{{"beta", b.beta}, {"mu", b.mu ? Json(*b.mu) : Json(nullptr)}, {"x", b.x ? Json(*b.x) : Json(nullptr)}};
}

}  // namespace

Json to_json(const BoundReport& r) {
  Json rows = Json::array();
  for (const BoundRow& row : r.rows) {
    rows.push_back(Json{{"d", row.d},
                        {"log_orderings", json_real(row.log_orderings)},
                        {"best_beta", beta_json(row.best_beta)},
                        {"log_sign_bound", json_real(row.log_sign_bound)},
                        {"certified", row.certified}});
  }
  Json minimizer = nullptr;
  for (const BoundRow& row : r.rows) {
    if (row.d == r.certified_d) minimizer = beta_json(row.best_beta);
  }
  return Json{{"mode", to_string(r.mode)},
              {"n", r.n},
              {"k", optional_index(r.k)},
              {"m", json_real(r.m)},
              {"log_orderings", json_real(r.log_orderings)},
              {"orderings_source", r.orderings_source},
              {"certified_d", r.certified_d},
              {"certified_ratio", r.certified_ratio},
              {"minimizer_at_certified_d", std::move(minimizer)},
              {"rows", std::move(rows)}};
}

Json to_json(const RelaxationFloor& r) {
  return Json{{"n", r.n},
              {"d", r.d},
              {"c", r.c},
              {"girth_base2", json_real(r.girth_base2)},
              {"girth_natural", json_real(r.girth_natural)},
              {"relaxation_base2", json_real(r.relaxation_base2)},
              {"relaxation_natural", json_real(r.relaxation_natural)}};
}

Json to_json(const FitResult& r) {
  Json losses = Json::array();
  for (double l : r.restart_losses) losses.push_back(json_real(l));
  return Json{{"status", r.status},
              {"loss", json_real(r.loss)},
              {"margin", json_real(r.margin)},
              {"restart", r.restart},
              {"violations", r.violations},
              {"dim", r.emb.dim()},
              {"restart_losses", std::move(losses)}};
}

std::string violations_csv(const ViolationReport& r) {
  std::string out = "a,b,c,d,source_gap,embedded_gap\n";
  for (const Violation& v : r.violated) {
    const Comparison& c = v.comparison;
    out += std::to_string(c.a) + "," + std::to_string(c.b) + "," + std::to_string(c.c) + "," + std::to_string(c.d) +
           "," + csv_real(v.source_gap) + "," + csv_real(v.embedded_gap) + "\n";
  }
  return out;
}

std::string ensemble_csv(const EnsembleReport& r) {
  std::string out = "i,j,faraway,v,e_i_u,e_i_v,e_j_u,e_j_v,dist_in_i,dist_in_j,passes\n";
  std::size_t next = 0;
  for (std::size_t i = 0; i < r.subgraphs; ++i) {
    for (std::size_t j = i + 1; j < r.subgraphs; ++j) {
      out += std::to_string(i) + "," + std::to_string(j) + ",";
      if (next < r.certificates.size() && r.certificates[next].certificate.i == i &&
          r.certificates[next].certificate.j == j) {
        const CertificateCheck& c = r.certificates[next++];
        const WitnessCertificate& w = c.certificate;
        out += "1," + std::to_string(w.v) + "," + std::to_string(w.e_i.u) + "," + std::to_string(w.e_i.v) + "," +
               std::to_string(w.e_j.u) + "," + std::to_string(w.e_j.v) + "," + csv_real(c.dist_in_i) + "," +
               csv_real(c.dist_in_j) + "," + (c.passes ? "1" : "0") + "\n";
      } else {
        out += "0,,,,,,,,\n";
      }
    }
  }
  return out;
}

std::string bounds_csv(const BoundReport& r) {
  std::string out = "d,log_orderings,best_beta,beta_mu,beta_x,log_sign_bound,certified\n";
  for (const BoundRow& row : r.rows) {
    out += std::to_string(row.d) + "," + csv_real(row.log_orderings) + "," + csv_real(row.best_beta.beta) + "," +
           (row.best_beta.mu ? csv_real(*row.best_beta.mu) : "") + "," +
           (row.best_beta.x ? csv_real(*row.best_beta.x) : "") + "," + csv_real(row.log_sign_bound) + "," +
           (row.certified ? "1" : "0") + "\n";
  }
  return out;
}

}  // namespace ordembed::io
