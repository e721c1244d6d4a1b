#pragma once

#include <optional>
#include <string>

#include <json.hpp>

#include "ordembed/baselines.hpp"
#include "ordembed/bounds.hpp"
#include "ordembed/constraints.hpp"
#include "ordembed/girth_lab.hpp"
#include "ordembed/metric.hpp"
#include "ordembed/terminal_embed.hpp"
#include "ordembed/verifier.hpp"

namespace ordembed::io {

using Json = nlohmann::ordered_json;

/// Throws IoError when the file cannot be read or written.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

/// Throws ValidationError naming `source` on malformed JSON.
Json parse_json(const std::string& text, const std::string& source = "input");
Json read_json_file(const std::string& path);
/// Two-space indented, trailing newline.
std::string dump_json(const Json& j);

/// 17 significant digits.
std::string format_double(double x);
/// Finite values as numbers, others as "inf", "-inf" or "nan".
Json json_real(double x);

Json to_json(const SimpleGraph& g);
SimpleGraph graph_from_json(const Json& j);

/// Upper-triangle form; throws ValidationError for non-finite distances.
Json to_json(const FiniteMetricSpace& space);
FiniteMetricSpace metric_from_json(const Json& j);

Json to_json(const ConstraintSet& cs, std::optional<std::size_t> n = std::nullopt);
/// Validates the family invariants against `n`, else against params.n, else
/// against the largest index seen.
ConstraintSet constraints_from_json(const Json& j, std::optional<std::size_t> n = std::nullopt);

Json to_json(const Embedding& emb);
Embedding embedding_from_json(const Json& j);

Json to_json(const MetricReport& r);
Json to_json(const ViolationReport& r);
Json to_json(const DominanceReport& r);
Json to_json(const HighGirthReport& r);
Json to_json(const WitnessCertificate& c);
Json to_json(const EnsembleReport& r);
Json to_json(const UnionBound& u);
Json to_json(const BoundReport& r);
Json to_json(const RelaxationFloor& r);
/// Summary without the coordinates.
Json to_json(const FitResult& r);

/// a,b,c,d,source_gap,embedded_gap
std::string violations_csv(const ViolationReport& r);
/// i,j,faraway,v,e_i_u,e_i_v,e_j_u,e_j_v,dist_in_i,dist_in_j,passes
std::string ensemble_csv(const EnsembleReport& r);
/// d,log_orderings,best_beta,beta_mu,beta_x,log_sign_bound,certified
std::string bounds_csv(const BoundReport& r);

}  // namespace ordembed::io
