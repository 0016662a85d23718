#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "superhedge_cli/json_io.hpp"

namespace superhedge {

/// Names of the shipped schemas ("market", "price_report", ...).
std::vector<std::string> schema_names();
/// The embedded schema document; throws ValidationError for unknown names.
const Json& schema_document(std::string_view name);

/// Validates against the subset of JSON Schema used by the shipped
/// schemas: type, const, enum, required, properties, additionalProperties,
/// items, minItems, minimum, maximum, exclusiveMinimum, oneOf and local
/// $ref. Each error is prefixed with the JSON pointer of the offending value.
std::vector<std::string> validate_against(const Json& doc, const Json& schema);

/// Guesses which schema a document is meant for from its keys.
std::string detect_kind(const Json& doc);

struct ValidationOutcome {
  std::string file_kind;
  std::vector<std::string> errors;
  bool ok() const { return errors.empty(); }
};

/// Parses, validates against the detected schema, then runs the semantic
/// checks of the matching loader (tree structure, density normalization).
/// `reference` supplies P for density files without their own weights.
ValidationOutcome schema_validate(const std::filesystem::path& path,
                                  const Eigen::VectorXd* reference = nullptr);

}  // namespace superhedge
