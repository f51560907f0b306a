#pragma once

// Typed field access for input documents. Every failure is a ConfigError
// carrying the dotted path of the field, e.g. "devices[0].cores".

#include <json.hpp>
#include <optional>
#include <string>

#include "eithne/error.hpp"

namespace eithne::detail {

using Json = nlohmann::json;

inline std::string join_path(const std::string& base, const std::string& key) {
  return base.empty() ? key : base + "." + key;
}

inline std::string index_path(const std::string& base, std::size_t i) { return base + "[" + std::to_string(i) + "]"; }

inline const Json& require_object(const Json& j, const std::string& path) {
  if (!j.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
  return j;
}

inline const Json& require_array(const Json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path, "expected an array");
  return j;
}

inline const Json* find(const Json& obj, const std::string& key) {
  const auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

inline std::string get_string(const Json& obj, const std::string& key, const std::string& path) {
  const Json* v = find(obj, key);
  if (!v) throw ConfigError(join_path(path, key), "missing required field");
  if (!v->is_string()) throw ConfigError(join_path(path, key), "expected a string");
  return v->get<std::string>();
}

inline std::optional<std::string> opt_string(const Json& obj, const std::string& key, const std::string& path) {
  const Json* v = find(obj, key);
  if (!v) return std::nullopt;
  if (!v->is_string()) throw ConfigError(join_path(path, key), "expected a string");
  return v->get<std::string>();
}

inline std::optional<double> opt_number(const Json& obj, const std::string& key, const std::string& path) {
  const Json* v = find(obj, key);
  if (!v) return std::nullopt;
  if (!v->is_number()) throw ConfigError(join_path(path, key), "expected a number");
  return v->get<double>();
}

inline double get_number(const Json& obj, const std::string& key, const std::string& path) {
  auto v = opt_number(obj, key, path);
  if (!v) throw ConfigError(join_path(path, key), "missing required field");
  return *v;
}

inline std::optional<long long> opt_integer(const Json& obj, const std::string& key, const std::string& path) {
  const Json* v = find(obj, key);
  if (!v) return std::nullopt;
  if (!v->is_number_integer()) throw ConfigError(join_path(path, key), "expected an integer");
  return v->get<long long>();
}

inline long long get_integer(const Json& obj, const std::string& key, const std::string& path) {
  auto v = opt_integer(obj, key, path);
  if (!v) throw ConfigError(join_path(path, key), "missing required field");
  return *v;
}

inline std::optional<bool> opt_bool(const Json& obj, const std::string& key, const std::string& path) {
  const Json* v = find(obj, key);
  if (!v) return std::nullopt;
  if (!v->is_boolean()) throw ConfigError(join_path(path, key), "expected true or false");
  return v->get<bool>();
}

/// Parses text, turning syntax errors into ConfigError with the byte offset.
inline Json parse_document(std::string_view text, std::string_view source) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const Json::parse_error& e) {
    throw ConfigError(std::string(source), "invalid JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

}  // namespace eithne::detail
