#include "superhedge_cli/commands.hpp"

#include <cmath>
#include <cstdlib>
#include <functional>
#include <map>
#include <random>
#include <sstream>

#include "superhedge/error.hpp"
#include "superhedge_cli/json_io.hpp"
#include "superhedge_cli/schema.hpp"

namespace superhedge {

namespace {

struct Output {
  Json report;
  int exit_code = kExitOk;
};

int verdict(bool ok) { return ok ? kExitOk : kExitVerificationFailure; }

[[noreturn]] void input_error(const std::string& what) {
  throw Error(ErrorCode::kValidationError, what);
}

const std::string& need(const std::string& path, const char* flag) {
  if (path.empty()) input_error(std::string("missing required option --") + flag);
  return path;
}

double resolve_tol(const RunConfig& c, double fallback) {
  double tol = fallback;
  if (const char* env = std::getenv("SUPERHEDGE_TOL"); env != nullptr && *env != '\0') {
    char* end = nullptr;
    tol = std::strtod(env, &end);
    if (end == env || *end != '\0') input_error("SUPERHEDGE_TOL is not a number");
  }
  if (c.tol) tol = *c.tol;
  if (!(tol > 0.0) || !std::isfinite(tol)) input_error("tolerance must be positive");
  return tol;
}

ConeChoice parse_cone_choice(const std::string& s) {
  if (s == "C_U") return ConeChoice::kCU;
  if (s == "K_U") return ConeChoice::kKU;
  if (s == "K_adm") return ConeChoice::kAdmissible;
  input_error("--cone-choice must be C_U, K_U or K_adm");
}

Claim load_claim(const MarketModel& m, const std::string& path) {
  return make_claim(m, claim_spec_from_json(load_json_file(path)));
}

Output cmd_price(const RunConfig& c) {
  const MarketModel m = market_from_json(load_json_file(need(c.market, "market")));
  const Claim x = load_claim(m, need(c.claim, "claim"));
  const double tol = resolve_tol(c, kGapTolerance);
  const ConeChoice cone = parse_cone_choice(c.cone_choice);
  PriceReport r = price_report(m, x);
  std::optional<double> bound;
  if (cone != ConeChoice::kCU) {
    bound = cone == ConeChoice::kAdmissible ? std::optional<double>(c.bound.value_or(kDefaultAdmissibilityBound))
                                            : std::nullopt;
    const PrimalResult p = suprep_primal(m, x, cone, bound.value_or(kDefaultAdmissibilityBound));
    r.primal = p.price;
    r.primal_certificate = p.certificate;
    r.gap = r.primal - r.dual;
  }
  r.gap_ok = std::abs(r.gap) <= tol;
  // A bounded admissible set may price above the dual; only weak duality is asserted there.
  const bool holds = cone == ConeChoice::kAdmissible ? r.gap >= -tol : r.gap_ok;
  return {to_json(r, cone, bound, tol), verdict(holds)};
}

Output cmd_dual(const RunConfig& c) {
  const MarketModel m = market_from_json(load_json_file(need(c.market, "market")));
  const Claim x = load_claim(m, need(c.claim, "claim"));
  return {to_json(suprep_dual(m, x))};
}

Output cmd_verify_duality(const RunConfig& c) {
  const MarketModel m = market_from_json(load_json_file(need(c.market, "market")));
  const double tol = resolve_tol(c, kMembershipTol);
  DualityReport r = verify_duality_chain(m);
  const MeasurePolytope poly = separating_polytope(m);
  Json j = to_json(r, poly, tol);
  const bool ok = j["all_hold"].get<bool>();
  return {std::move(j), verdict(ok)};
}

Output cmd_verify_representation(const RunConfig& c) {
  const MarketModel m = market_from_json(load_json_file(need(c.market, "market")));
  if (c.samples < 0) input_error("--samples must be nonnegative");
  std::vector<Claim> claims;
  if (!c.claim.empty()) claims.push_back(load_claim(m, c.claim));
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  for (int k = 0; k < c.samples; ++k) {
    Claim x{Eigen::VectorXd(m.num_states())};
    for (int i = 0; i < m.num_states(); ++i) x.payoff(i) = unit(rng);
    claims.push_back(std::move(x));
  }
  const RepresentationReport r = verify_representation(m, claims, default_sample_measures(m));
  return {to_json(r, c.seed), verdict(r.all_agree && r.all_rejections_separated)};
}

Output cmd_utility_check(const RunConfig& c) {
  const UtilityFunction u = load_utility(need(c.utility, "utility"));
  Json j = report_header("utility_report");
  j["utility"] = std::string(utility_kind_name(u.kind));

  const std::vector<double> grid = default_utility_grid(u);
  const UtilityInvariantReport inv = check_utility_invariants(u, grid);
  Json ji;
  ji["increasing"] = inv.increasing;
  ji["strictly_concave"] = inv.strictly_concave;
  ji["derivative_positive_decreasing"] = inv.derivative_positive_decreasing;
  j["invariants"] = std::move(ji);

  const InadaReport in = check_inada(u);
  Json jn;
  jn["lower_limit_ok"] = in.lower_limit_ok;
  jn["upper_limit_ok"] = in.upper_limit_ok;
  jn["lower_sample"] = number(in.lower_sample);
  jn["upper_sample"] = number(in.upper_sample);
  j["inada"] = std::move(jn);

  const ElasticityReport ae = asymptotic_elasticity_minus(u);
  Json je;
  je["verdict"] = std::string(elasticity_verdict_name(ae.verdict));
  je["estimate"] = number(ae.estimate);
  je["tail_minimum"] = number(ae.tail_minimum);
  je["extrapolated"] = number(ae.extrapolated);
  je["grid_points"] = ae.grid_points;
  j["elasticity"] = std::move(je);

  const ConjugatePair pair = conjugate(u);
  Json jc;
  jc["v_at_zero"] = number(pair.v_at_zero);
  Json samples = Json::array();
  for (double y : {0.01, 0.1, 1.0, 10.0, 100.0}) {
    Json s;
    s["y"] = y;
    s["v"] = number(pair.v(y));
    s["v_prime"] = number(pair.v_prime(y));
    samples.push_back(std::move(s));
  }
  jc["samples"] = std::move(samples);
  j["conjugate"] = std::move(jc);

  j["growth"] = nullptr;
  j["growth_error"] = nullptr;
  try {
    const GrowthCertificate g = growth_constants(u, c.alpha);
    Json jg;
    jg["alpha"] = number(g.alpha);
    jg["b"] = number(g.b);
    jg["d_const"] = number(g.d_const);
    jg["sup_ratio"] = number(g.sup_ratio);
    jg["verification_grid_size"] = g.verification_grid_size;
    jg["violations"] = g.violations;
    j["growth"] = std::move(jg);
  } catch (const Error& e) {
    j["growth_error"] = std::string(error_code_name(e.code())) + ": " + e.what();
  }
  return {std::move(j)};
}

Output cmd_entropy_classify(const RunConfig& c) {
  const MeasureInput in = measure_from_json(load_json_file(need(c.measure, "measure")));
  const ConjugatePair pair = conjugate(load_utility(need(c.utility, "utility")));
  std::optional<MarketModel> m;
  if (!c.market.empty()) m = market_from_json(load_json_file(c.market));
  if (in.countable) {
    if (m) throw Error(ErrorCode::kDimensionError, "a countable measure cannot be priced in a finite market");
    const EntropyReport r = classify_measure(MeasureDensity::countable(*in.countable), pair, nullptr, c.b);
    return {to_json(r)};
  }
  const MeasureDensity q = finite_measure(in, m ? &m->reference_probabilities() : nullptr);
  const EntropyReport r = classify_measure(q, pair, m ? &*m : nullptr, c.b);
  return {to_json(r)};
}

Output cmd_polar(const RunConfig& c) {
  const ConeInput in = cone_from_json(load_json_file(need(c.cone, "cone")));
  const double tol = resolve_tol(c, kMembershipTol);
  const PolyCone p = polar(in.cone, in.weights);
  const BipolarReport b = bipolar_check(in.cone, in.weights);
  Json j = report_header("polar_report");
  j["dim"] = in.cone.dim;
  j["weights"] = vector_json(in.weights);
  Json jp;
  Json gens = Json::array(), lin = Json::array(), hs = Json::array(), eq = Json::array();
  for (std::size_t i = 0; i < p.generators.size(); ++i) {
    gens.push_back(vector_json(p.generators[i]));
    lin.push_back(static_cast<bool>(p.linear[i]));
  }
  for (std::size_t i = 0; i < p.halfspaces.size(); ++i) {
    hs.push_back(vector_json(p.halfspaces[i]));
    eq.push_back(static_cast<bool>(p.halfspace_equality[i]));
  }
  jp["generators"] = std::move(gens);
  jp["linear"] = std::move(lin);
  jp["halfspaces"] = std::move(hs);
  jp["halfspace_equality"] = std::move(eq);
  j["polar"] = std::move(jp);
  const bool holds = b.bipolar.max_violation <= tol && b.hull_polar.max_violation <= tol;
  j["bipolar_holds"] = holds;
  j["bipolar_violation"] = number(b.bipolar.max_violation);
  j["hull_polar_violation"] = number(b.hull_polar.max_violation);
  j["tolerance"] = number(tol);
  return {std::move(j), verdict(holds)};
}

Output cmd_gap_study(const RunConfig& c) {
  TruncationFamily f;
  f.r = c.r;
  f.s0 = c.s0;
  if (c.claim_kind == "unbounded") {
    f.claim = TruncationFamily::ClaimKind::kUnboundedBelow;
  } else if (c.claim_kind == "call") {
    f.claim = TruncationFamily::ClaimKind::kCall;
  } else {
    input_error("--claim-kind must be 'unbounded' or 'call'");
  }
  const double bound = c.bound.value_or(1.0);
  return {to_json(truncation_gap_study(f, c.levels, bound), f, bound)};
}

Output cmd_validate(const RunConfig& c) {
  if (c.inputs.empty()) input_error("validate needs at least one file");
  std::optional<MarketModel> m;
  if (!c.market.empty()) m = market_from_json(load_json_file(c.market));
  Json reports = Json::array();
  bool ok = true;
  for (const auto& path : c.inputs) {
    const ValidationOutcome v = schema_validate(path, m ? &m->reference_probabilities() : nullptr);
    Json j = report_header("validation_report");
    j["path"] = path;
    j["file_kind"] = v.file_kind;
    j["ok"] = v.ok();
    j["errors"] = v.errors;
    ok = ok && v.ok();
    reports.push_back(std::move(j));
  }
  // Invalid input is an input error, not a verification failure.
  return {reports.size() == 1 ? reports[0] : reports, ok ? kExitOk : kExitInputError};
}

const std::map<std::string, std::function<Output(const RunConfig&)>>& commands() {
  static const std::map<std::string, std::function<Output(const RunConfig&)>> table{
      {"price", cmd_price},
      {"dual", cmd_dual},
      {"verify-duality", cmd_verify_duality},
      {"verify-representation", cmd_verify_representation},
      {"utility-check", cmd_utility_check},
      {"entropy-classify", cmd_entropy_classify},
      {"polar", cmd_polar},
      {"gap-study", cmd_gap_study},
      {"validate", cmd_validate},
  };
  return table;
}

std::string emit(const Json& j, bool text) {
  const std::string s = j.dump(2) + "\n";
  return text ? render_text(s) : s;
}

void render(const Json& j, const std::string& prefix, std::ostringstream& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) {
      render(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    }
  } else if (j.is_array() && !j.empty() && (j[0].is_object() || j[0].is_array())) {
    for (std::size_t i = 0; i < j.size(); ++i) render(j[i], prefix + "[" + std::to_string(i) + "]", out);
  } else {
    out << prefix << ": " << (j.is_string() ? j.get<std::string>() : j.dump()) << "\n";
  }
}

}  // namespace

std::string render_text(const std::string& json_text) {
  std::ostringstream out;
  render(Json::parse(json_text), "", out);
  return out.str();
}

RunResult run(const RunConfig& config) {
  RunResult result;
  try {
    const auto it = commands().find(config.command);
    if (it == commands().end()) input_error("unknown command '" + config.command + "'");
    const Output o = it->second(config);
    result.output = emit(o.report, config.text);
    result.exit_code = o.exit_code;
  } catch (const Error& e) {
    result.output = emit(error_json(std::string(error_code_name(e.code())), e.what()), config.text);
    result.exit_code = kExitInputError;
  } catch (const std::exception& e) {
    result.output = emit(error_json("InternalError", e.what()), config.text);
    result.exit_code = kExitInputError;
  }
  return result;
}

}  // namespace superhedge
