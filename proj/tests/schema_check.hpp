#pragma once

// Minimal JSON Schema checker covering the keywords used by
// docs/output-schema.json: $ref (local), allOf, oneOf, type, required,
// properties, items, enum, const, minimum. Annotation keywords are ignored.

#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace schema {

using json = nlohmann::json;

inline json load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open schema " + path);
  return json::parse(in);
}

class Checker {
 public:
  explicit Checker(json root) : root_(std::move(root)) {}

  /// Empty on success, otherwise the first few violations with JSON pointers.
  std::vector<std::string> errors(const json& doc) const {
    std::vector<std::string> out;
    check(root_, doc, "", out);
    return out;
  }

  bool valid(const json& doc) const { return errors(doc).empty(); }

 private:
  json root_;

  const json& resolve(const std::string& ref) const {
    const std::string prefix = "#/$defs/";
    if (ref.rfind(prefix, 0) != 0) throw std::runtime_error("unsupported $ref " + ref);
    return root_.at("$defs").at(ref.substr(prefix.size()));
  }

  static bool has_type(const json& v, const std::string& t) {
    if (t == "object") return v.is_object();
    if (t == "array") return v.is_array();
    if (t == "string") return v.is_string();
    if (t == "boolean") return v.is_boolean();
    if (t == "null") return v.is_null();
    if (t == "integer") return v.is_number_integer();
    if (t == "number") return v.is_number();
    throw std::runtime_error("unknown schema type " + t);
  }

  // JSON equality with integers compared by value regardless of signedness.
  static bool same(const json& a, const json& b) {
    if (a.is_number_integer() && b.is_number_integer()) return a.get<long long>() == b.get<long long>();
    return a == b;
  }

  void check(const json& s, const json& v, const std::string& at, std::vector<std::string>& out) const {
    if (s.contains("$ref")) check(resolve(s["$ref"]), v, at, out);
    if (s.contains("allOf"))
      for (const auto& sub : s["allOf"]) check(sub, v, at, out);
    if (s.contains("oneOf")) {
      int matches = 0;
      for (const auto& sub : s["oneOf"]) {
        std::vector<std::string> tmp;
        check(sub, v, at, tmp);
        if (tmp.empty()) ++matches;
      }
      if (matches != 1) out.push_back(at + ": matches " + std::to_string(matches) + " oneOf branches");
    }
    if (s.contains("type")) {
      bool ok = false;
      if (s["type"].is_array()) {
        for (const auto& t : s["type"]) ok = ok || has_type(v, t.get<std::string>());
      } else {
        ok = has_type(v, s["type"].get<std::string>());
      }
      if (!ok) {
        out.push_back(at + ": expected type " + s["type"].dump() + ", got " + v.type_name());
        return;
      }
    }
    if (s.contains("const") && !same(s["const"], v)) out.push_back(at + ": expected " + s["const"].dump());
    if (s.contains("enum")) {
      bool ok = false;
      for (const auto& e : s["enum"]) ok = ok || same(e, v);
      if (!ok) out.push_back(at + ": " + v.dump() + " not in " + s["enum"].dump());
    }
    if (s.contains("minimum") && v.is_number() && v.get<double>() < s["minimum"].get<double>())
      out.push_back(at + ": below minimum " + s["minimum"].dump());
    if (v.is_object()) {
      if (s.contains("required"))
        for (const auto& k : s["required"])
          if (!v.contains(k.get<std::string>())) out.push_back(at + ": missing key " + k.get<std::string>());
      if (s.contains("properties"))
        for (const auto& [k, sub] : s["properties"].items())
          if (v.contains(k)) check(sub, v[k], at + "/" + k, out);
    }
    if (v.is_array() && s.contains("items"))
      for (std::size_t i = 0; i < v.size(); ++i) check(s["items"], v[i], at + "/" + std::to_string(i), out);
  }
};

}  // namespace schema
