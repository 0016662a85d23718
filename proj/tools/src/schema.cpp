#include "superhedge_cli/schema.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <utility>

#include "superhedge/error.hpp"

namespace superhedge {

namespace detail {
// Generated at configure time from schemas/*.schema.json.
const std::vector<std::pair<std::string_view, std::string_view>>& embedded_schemas();
}  // namespace detail

namespace {

const std::map<std::string, Json, std::less<>>& schema_table() {
  static const auto table = [] {
    std::map<std::string, Json, std::less<>> t;
    for (const auto& [name, text] : detail::embedded_schemas()) {
      t.emplace(std::string(name), parse_json_text(std::string(text), std::string(name)));
    }
    return t;
  }();
  return table;
}

std::string type_of(const Json& v) {
  if (v.is_null()) return "null";
  if (v.is_boolean()) return "boolean";
  if (v.is_number_integer()) return "integer";
  if (v.is_number()) return "number";
  if (v.is_string()) return "string";
  if (v.is_array()) return "array";
  return "object";
}

bool type_matches(const Json& v, const std::string& t) {
  const std::string actual = type_of(v);
  return actual == t || (t == "number" && actual == "integer");
}

std::string pointer_or_root(const std::string& ptr) { return ptr.empty() ? "/" : ptr; }

class Validator {
 public:
  explicit Validator(const Json& root) : root_(root) {}

  void check(const Json& v, const Json& s, const std::string& ptr, std::vector<std::string>& errs) const {
    if (s.contains("$ref")) {
      check(v, resolve(s.at("$ref").get<std::string>()), ptr, errs);
      return;
    }
    const std::string at = pointer_or_root(ptr);
    if (s.contains("type")) {
      const Json& t = s.at("type");
      bool ok = false;
      if (t.is_string()) {
        ok = type_matches(v, t.get<std::string>());
      } else {
        for (const auto& e : t) ok = ok || type_matches(v, e.get<std::string>());
      }
      if (!ok) {
        errs.push_back(at + ": expected type " + t.dump() + ", found " + type_of(v));
        return;
      }
    }
    if (s.contains("const") && v != s.at("const")) {
      errs.push_back(at + ": expected " + s.at("const").dump());
    }
    if (s.contains("enum")) {
      const Json& e = s.at("enum");
      if (std::find(e.begin(), e.end(), v) == e.end()) {
        errs.push_back(at + ": value " + v.dump() + " not in " + e.dump());
      }
    }
    if (v.is_number()) {
      const double x = v.get<double>();
      if (s.contains("minimum") && x < s.at("minimum").get<double>()) {
        errs.push_back(at + ": " + v.dump() + " is below the minimum " + s.at("minimum").dump());
      }
      if (s.contains("maximum") && x > s.at("maximum").get<double>()) {
        errs.push_back(at + ": " + v.dump() + " is above the maximum " + s.at("maximum").dump());
      }
      if (s.contains("exclusiveMinimum") && !(x > s.at("exclusiveMinimum").get<double>())) {
        errs.push_back(at + ": " + v.dump() + " must exceed " + s.at("exclusiveMinimum").dump());
      }
    }
    if (v.is_array()) {
      if (s.contains("minItems") && v.size() < s.at("minItems").get<std::size_t>()) {
        errs.push_back(at + ": expected at least " + s.at("minItems").dump() + " items");
      }
      if (s.contains("items")) {
        for (std::size_t i = 0; i < v.size(); ++i) {
          check(v[i], s.at("items"), ptr + "/" + std::to_string(i), errs);
        }
      }
    }
    if (v.is_object()) {
      if (s.contains("required")) {
        for (const auto& r : s.at("required")) {
          if (!v.contains(r.get<std::string>())) {
            errs.push_back(at + ": missing required field \"" + r.get<std::string>() + "\"");
          }
        }
      }
      const Json props = s.contains("properties") ? s.at("properties") : Json::object();
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (props.contains(it.key())) {
          check(it.value(), props.at(it.key()), ptr + "/" + it.key(), errs);
        } else if (s.contains("additionalProperties") && s.at("additionalProperties") == false) {
          errs.push_back(at + ": unknown field \"" + it.key() + "\"");
        }
      }
    }
    if (s.contains("oneOf")) {
      int matches = 0;
      std::vector<std::string> first;
      for (const auto& alt : s.at("oneOf")) {
        std::vector<std::string> sub;
        check(v, alt, ptr, sub);
        if (sub.empty()) {
          ++matches;
        } else if (first.empty()) {
          first = sub;
        }
      }
      if (matches != 1) {
        errs.push_back(at + ": must match exactly one alternative (matched " +
                       std::to_string(matches) + ")" + (first.empty() ? "" : "; " + first.front()));
      }
    }
  }

 private:
  const Json& resolve(const std::string& ref) const {
    if (ref.rfind("#/", 0) != 0) {
      throw Error(ErrorCode::kValidationError, "unsupported schema reference " + ref);
    }
    return root_.at(Json::json_pointer(ref.substr(1)));
  }

  const Json& root_;
};

}  // namespace

std::vector<std::string> schema_names() {
  std::vector<std::string> out;
  for (const auto& [name, doc] : schema_table()) out.push_back(name);
  return out;
}

const Json& schema_document(std::string_view name) {
  const auto& t = schema_table();
  const auto it = t.find(name);
  if (it == t.end()) {
    throw Error(ErrorCode::kValidationError, "no schema named '" + std::string(name) + "'");
  }
  return it->second;
}

std::vector<std::string> validate_against(const Json& doc, const Json& schema) {
  std::vector<std::string> errs;
  Validator(schema).check(doc, schema, "", errs);
  return errs;
}

std::string detect_kind(const Json& doc) {
  if (!doc.is_object()) return "unknown";
  if (doc.contains("kind") && doc.at("kind").is_string()) {
    const std::string k = doc.at("kind").get<std::string>();
    if (schema_table().count(k) != 0 && k != "utility") return k;
    return "utility";
  }
  if (doc.contains("tree")) return "market";
  if (doc.contains("type")) return "claim";
  if (doc.contains("density") || doc.contains("countable")) return "measure";
  if (doc.contains("generators")) return "cone";
  return "unknown";
}

ValidationOutcome schema_validate(const std::filesystem::path& path,
                                  const Eigen::VectorXd* reference) {
  ValidationOutcome out;
  const Json doc = load_json_file(path);  // ParseError propagates with location
  out.file_kind = detect_kind(doc);
  if (out.file_kind == "unknown") {
    out.errors.push_back("/: cannot tell which schema applies to this document");
    return out;
  }
  out.errors = validate_against(doc, schema_document(out.file_kind));
  if (!out.errors.empty()) return out;
  try {
    if (out.file_kind == "market") {
      market_from_json(doc);
    } else if (out.file_kind == "claim") {
      claim_spec_from_json(doc);
    } else if (out.file_kind == "measure") {
      const MeasureInput m = measure_from_json(doc);
      if (m.density) finite_measure(m, reference);
    } else if (out.file_kind == "utility") {
      utility_from_json(doc, path.parent_path());
    } else if (out.file_kind == "cone") {
      cone_from_json(doc);
    }
  } catch (const Error& e) {
    out.errors.push_back(std::string(error_code_name(e.code())) + ": " + e.what());
  }
  return out;
}

}  // namespace superhedge
