#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <Eigen/Dense>
#include <json.hpp>

#include "superhedge/cones.hpp"
#include "superhedge/market.hpp"
#include "superhedge/measures.hpp"
#include "superhedge/pricing.hpp"
#include "superhedge/utility.hpp"

namespace superhedge {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Parses a file; syntax errors become ParseError with "path:line:column".
Json load_json_file(const std::filesystem::path& path);
Json parse_json_text(const std::string& text, const std::string& origin);

MarketModel market_from_json(const Json& j);
ClaimSpec claim_spec_from_json(const Json& j);
/// `base_dir` resolves the relative CSV path of a custom utility.
UtilityFunction utility_from_json(const Json& j, const std::filesystem::path& base_dir);
/// Accepts a JSON utility file or a tabulated CSV (by extension).
UtilityFunction load_utility(const std::filesystem::path& path);

struct MeasureInput {
  std::optional<Eigen::VectorXd> density;
  std::optional<Eigen::VectorXd> reference;
  std::optional<CountableModel> countable;
};

MeasureInput measure_from_json(const Json& j);
/// A finite density checked against the given reference (or the file's own
/// "reference" entry, else uniform weights).
MeasureDensity finite_measure(const MeasureInput& in, const Eigen::VectorXd* reference);

struct ConeInput {
  PolyCone cone;
  Eigen::VectorXd weights;  // uniform unless given
};

ConeInput cone_from_json(const Json& j);

// Emitters. Numbers are written with shortest round-trip formatting; -0 is
// written as 0 and non-finite values as "+inf", "-inf" or "nan".
Json number(double v);
Json vector_json(const Eigen::VectorXd& v);
Json report_header(const char* kind);

Json to_json(const PriceReport& r, ConeChoice cone, std::optional<double> bound, double tol);
Json to_json(const DualResult& r);
Json to_json(const DualityReport& r, const MeasurePolytope& poly, double tol);
Json to_json(const RepresentationReport& r, std::uint64_t seed);
Json to_json(const EntropyReport& r);
Json to_json(const std::vector<TruncationRow>& rows, const TruncationFamily& f, double bound);
Json error_json(const std::string& code, const std::string& message);

}  // namespace superhedge
