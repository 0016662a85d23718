#include "superhedge_cli/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "superhedge/error.hpp"

namespace superhedge {

namespace {

[[noreturn]] void invalid(const std::string& what) {
  throw Error(ErrorCode::kValidationError, what);
}

const Json& require(const Json& j, const char* key, const char* where) {
  if (!j.is_object() || !j.contains(key)) {
    invalid(std::string(where) + ": missing \"" + key + "\"");
  }
  return j.at(key);
}

double as_number(const Json& j, const std::string& where) {
  if (!j.is_number()) invalid(where + ": expected a number");
  return j.get<double>();
}

std::vector<double> as_numbers(const Json& j, const std::string& where) {
  if (!j.is_array()) invalid(where + ": expected an array of numbers");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(as_number(j[i], where + "[" + std::to_string(i) + "]"));
  }
  return out;
}

Eigen::VectorXd as_vector(const Json& j, const std::string& where) {
  const std::vector<double> v = as_numbers(j, where);
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

void check_version(const Json& j) {
  if (j.is_object() && j.contains("schema_version") && j.at("schema_version") != kSchemaVersion) {
    invalid("unsupported schema_version (expected 1)");
  }
}

std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < text.size() && i + 1 < byte; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

Sequence sequence_from_json(const Json& j, const std::string& where) {
  const std::string kind = require(j, "kind", where.c_str()).get<std::string>();
  if (kind == "geometric") {
    return geometric_sequence(as_number(require(j, "r", where.c_str()), where + ".r"));
  }
  if (kind == "powerlaw") {
    return powerlaw_sequence(as_number(require(j, "s", where.c_str()), where + ".s"));
  }
  invalid(where + ": unknown sequence kind '" + kind + "'");
}

Json entropy_json(const EntropyValue& e) {
  Json j;
  j["value"] = number(e.value);
  j["partial_sum"] = number(e.partial_sum);
  j["finite"] = e.finite;
  j["method"] = e.method == EntropyMethod::kExactSum ? "exact_sum" : "series_partial";
  j["verdict"] = std::string(series_verdict_name(e.verdict));
  j["n_terms"] = e.n_terms;
  return j;
}

}  // namespace

Json parse_json_text(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    const auto [line, col] = line_column(text, e.byte);
    std::string msg = e.what();
    const auto pos = msg.find("]: ");
    if (pos != std::string::npos) msg = msg.substr(pos + 3);
    throw Error(ErrorCode::kParseError,
                origin + ":" + std::to_string(line) + ":" + std::to_string(col) + ": " + msg);
  }
}

Json load_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParseError, path.string() + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json_text(ss.str(), path.string());
}

MarketModel market_from_json(const Json& j) {
  check_version(j);
  const Json& assets = require(j, "assets", "market");
  if (!assets.is_number_integer()) invalid("market.assets: expected an integer");
  const Json& tree = require(j, "tree", "market");
  if (!tree.is_array()) invalid("market.tree: expected an array");
  std::vector<NodeSpec> specs;
  for (std::size_t i = 0; i < tree.size(); ++i) {
    const std::string where = "market.tree[" + std::to_string(i) + "]";
    const Json& node = tree[i];
    NodeSpec s;
    const Json& id = require(node, "id", where.c_str());
    if (!id.is_string()) invalid(where + ".id: expected a string");
    s.id = id.get<std::string>();
    if (node.contains("parent") && !node.at("parent").is_null()) {
      if (!node.at("parent").is_string()) invalid(where + ".parent: expected a string or null");
      s.parent = node.at("parent").get<std::string>();
      s.probability = as_number(require(node, "p", where.c_str()), where + ".p");
    } else if (node.contains("p")) {
      s.probability = as_number(node.at("p"), where + ".p");
    }
    s.prices = as_numbers(require(node, "prices", where.c_str()), where + ".prices");
    specs.push_back(std::move(s));
  }
  return build_market(assets.get<int>(), specs);
}

ClaimSpec claim_spec_from_json(const Json& j) {
  check_version(j);
  ClaimSpec c;
  const std::string type = require(j, "type", "claim").get<std::string>();
  if (type == "call" || type == "put") {
    c.type = type == "call" ? ClaimSpec::Type::kCall : ClaimSpec::Type::kPut;
    c.strike = as_number(require(j, "strike", "claim"), "claim.strike");
    if (j.contains("asset")) {
      if (!j.at("asset").is_number_integer()) invalid("claim.asset: expected an integer");
      c.asset = j.at("asset").get<int>();
    }
  } else if (type == "vector") {
    c.type = ClaimSpec::Type::kVector;
    c.values = as_numbers(require(j, "values", "claim"), "claim.values");
  } else {
    invalid("claim.type: unknown claim type '" + type + "'");
  }
  return c;
}

UtilityFunction utility_from_json(const Json& j, const std::filesystem::path& base_dir) {
  check_version(j);
  const std::string kind = require(j, "kind", "utility").get<std::string>();
  const Json params = j.contains("params") ? j.at("params") : Json::object();
  if (kind == "exponential") {
    return exponential_utility(params.contains("gamma") ? as_number(params.at("gamma"), "utility.params.gamma") : 1.0);
  }
  if (kind == "log") return log_utility();
  if (kind == "power") {
    return power_utility(as_number(require(params, "p", "utility.params"), "utility.params.p"));
  }
  if (kind == "glued_unbounded") return glued_unbounded_utility();
  if (kind == "slow_loss") return slow_loss_utility();
  if (kind == "custom") {
    const Json& csv = require(params, "csv", "utility.params");
    if (!csv.is_string()) invalid("utility.params.csv: expected a path");
    return tabulated_utility_from_csv((base_dir / csv.get<std::string>()).string());
  }
  invalid("utility.kind: unknown utility kind '" + kind + "'");
}

UtilityFunction load_utility(const std::filesystem::path& path) {
  if (path.extension() == ".csv") return tabulated_utility_from_csv(path.string());
  return utility_from_json(load_json_file(path), path.parent_path());
}

MeasureInput measure_from_json(const Json& j) {
  check_version(j);
  MeasureInput m;
  if (j.contains("density")) {
    m.density = as_vector(j.at("density"), "measure.density");
    if (j.contains("reference")) m.reference = as_vector(j.at("reference"), "measure.reference");
    return m;
  }
  if (j.contains("countable")) {
    const Json& c = j.at("countable");
    Sequence p = sequence_from_json(require(c, "p", "measure.countable"), "measure.countable.p");
    Sequence q = sequence_from_json(require(c, "q", "measure.countable"), "measure.countable.q");
    std::int64_t n = 1000000;
    if (j.contains("n_max")) {
      if (!j.at("n_max").is_number_integer()) invalid("measure.n_max: expected an integer");
      n = j.at("n_max").get<std::int64_t>();
    }
    m.countable = make_countable_model(std::move(p), std::move(q), n);
    return m;
  }
  invalid("measure: expected \"density\" or \"countable\"");
}

MeasureDensity finite_measure(const MeasureInput& in, const Eigen::VectorXd* reference) {
  if (!in.density) invalid("measure: expected a finite density");
  Eigen::VectorXd p;
  if (reference != nullptr) {
    p = *reference;
  } else if (in.reference) {
    p = *in.reference;
  } else {
    p = Eigen::VectorXd::Constant(in.density->size(), 1.0 / static_cast<double>(in.density->size()));
  }
  return MeasureDensity::finite(*in.density, p);
}

ConeInput cone_from_json(const Json& j) {
  check_version(j);
  const Json& dim = require(j, "dim", "cone");
  if (!dim.is_number_integer() || dim.get<int>() < 1) invalid("cone.dim: expected a positive integer");
  ConeInput out;
  out.cone.dim = dim.get<int>();
  const Json& gens = require(j, "generators", "cone");
  if (!gens.is_array()) invalid("cone.generators: expected an array");
  std::vector<bool> linear(gens.size(), false);
  if (j.contains("linear")) {
    const Json& l = j.at("linear");
    if (!l.is_array() || l.size() != gens.size()) {
      invalid("cone.linear: expected one flag per generator");
    }
    for (std::size_t i = 0; i < l.size(); ++i) linear[i] = l[i].get<bool>();
  }
  for (std::size_t i = 0; i < gens.size(); ++i) {
    Eigen::VectorXd g = as_vector(gens[i], "cone.generators[" + std::to_string(i) + "]");
    if (g.size() != out.cone.dim) {
      throw Error(ErrorCode::kDimensionError,
                  "cone.generators[" + std::to_string(i) + "] has the wrong dimension");
    }
    out.cone.add_generator(std::move(g), linear[i]);
  }
  if (j.contains("weights")) {
    out.weights = as_vector(j.at("weights"), "cone.weights");
    if (out.weights.size() != out.cone.dim) {
      throw Error(ErrorCode::kDimensionError, "cone.weights has the wrong dimension");
    }
  } else {
    out.weights = Eigen::VectorXd::Constant(out.cone.dim, 1.0 / out.cone.dim);
  }
  return out;
}

Json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "+inf" : "-inf";
  return v == 0.0 ? 0.0 : v;
}

Json vector_json(const Eigen::VectorXd& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number(v(i)));
  return a;
}

Json report_header(const char* kind) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = kind;
  return j;
}

Json to_json(const PriceReport& r, ConeChoice cone, std::optional<double> bound, double tol) {
  Json j = report_header("price_report");
  j["cone"] = std::string(cone_choice_name(cone));
  j["bound"] = bound ? number(*bound) : Json(nullptr);
  j["primal"] = number(r.primal);
  j["dual"] = number(r.dual);
  j["gap"] = number(r.gap);
  j["gap_ok"] = r.gap_ok;
  j["tolerance"] = number(tol);
  j["dual_vertex"] = vector_json(r.dual_certificate.probabilities);
  j["dual_density"] = vector_json(r.dual_certificate.density);
  j["strategy"] = vector_json(r.primal_certificate.theta);
  j["primal_x"] = number(r.primal_certificate.x);
  j["slack"] = vector_json(r.primal_certificate.slack);
  return j;
}

Json to_json(const DualResult& r) {
  Json j = report_header("dual_report");
  j["dual"] = number(r.price);
  j["dual_vertex"] = vector_json(r.probabilities);
  j["dual_density"] = vector_json(r.density);
  return j;
}

Json to_json(const DualityReport& r, const MeasurePolytope& poly, double tol) {
  Json j = report_header("duality_report");
  j["tolerance"] = number(tol);
  bool all = true;
  Json chain = Json::array();
  for (const auto& c : r.chain_equalities) {
    const bool holds = c.max_violation <= tol;
    all = all && holds;
    Json e;
    e["name"] = c.name;
    e["holds"] = holds;
    e["max_violation"] = number(c.max_violation);
    chain.push_back(std::move(e));
  }
  j["all_hold"] = all;
  j["claims_checked"] = r.claims_checked;
  Json verts = Json::array();
  for (const auto& v : poly.vertices) verts.push_back(vector_json(v));
  j["vertices"] = std::move(verts);
  j["chain"] = std::move(chain);
  return j;
}

Json to_json(const RepresentationReport& r, std::uint64_t seed) {
  Json j = report_header("representation_report");
  j["seed"] = seed;
  j["measures_sampled"] = r.measures_sampled;
  j["partial"] = r.partial;
  j["all_agree"] = r.all_agree;
  j["all_rejections_separated"] = r.all_rejections_separated;
  Json entries = Json::array();
  for (const auto& e : r.entries) {
    Json x;
    x["claim"] = vector_json(e.claim);
    x["in_cu"] = e.in_cu;
    x["projections_pass"] = e.projections_pass;
    x["agree"] = e.agree;
    x["residual"] = number(e.membership_residual);
    x["separating_vertex"] = e.separating_measure ? vector_json(*e.separating_measure) : Json(nullptr);
    x["separating_value"] = number(e.separating_value);
    entries.push_back(std::move(x));
  }
  j["entries"] = std::move(entries);
  return j;
}

Json to_json(const EntropyReport& r) {
  Json j = report_header("entropy_report");
  j["b"] = number(r.b_used);
  j["loss"] = entropy_json(r.loss);
  j["full"] = entropy_json(r.full);
  j["in_M1"] = r.in_m1;
  j["in_hatMV"] = r.in_hat_mv;
  j["in_MV"] = r.in_mv;
  j["m1_violation"] = number(r.m1_violation);
  return j;
}

Json to_json(const std::vector<TruncationRow>& rows, const TruncationFamily& f, double bound) {
  Json j = report_header("gap_study_report");
  Json fam;
  fam["r"] = number(f.r);
  fam["s0"] = number(f.s0);
  fam["claim"] = f.claim == TruncationFamily::ClaimKind::kUnboundedBelow ? "unbounded" : "call";
  fam["strike"] = number(f.strike);
  j["family"] = std::move(fam);
  j["bound"] = number(bound);
  Json out = Json::array();
  for (const auto& r : rows) {
    Json x;
    x["n"] = r.n;
    x["primal"] = number(r.primal);
    x["dual"] = number(r.dual);
    x["gap"] = number(r.gap);
    x["theta"] = number(r.theta);
    out.push_back(std::move(x));
  }
  j["rows"] = std::move(out);
  return j;
}

Json error_json(const std::string& code, const std::string& message) {
  Json j = report_header("error");
  j["code"] = code;
  j["message"] = message;
  return j;
}

}  // namespace superhedge
