#pragma once

// Strict accessors over nlohmann::json used by every file loader: unknown
// keys and wrongly-typed values become ParseError.

#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <string_view>

#include "json.hpp"
#include "ssaf/error.hpp"

namespace ssaf::json_util {

using nlohmann::json;

inline void require_object(const json& j, std::string_view what) {
  if (!j.is_object())
    throw ParseError(std::string(what) + ": expected a JSON object");
}

inline void reject_unknown_keys(const json& j, std::string_view what,
                                std::initializer_list<std::string_view> known) {
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (auto k : known) ok = ok || key == k;
    if (!ok)
      throw ParseError(std::string(what) + ": unknown key \"" + key + "\"");
  }
}

inline const json& member(const json& j, std::string_view what,
                          const char* key) {
  auto it = j.find(key);
  if (it == j.end())
    throw ParseError(std::string(what) + ": missing key \"" + key + "\"");
  return *it;
}

inline std::string get_string(const json& j, std::string_view what,
                              const char* key) {
  const json& v = member(j, what, key);
  if (!v.is_string())
    throw ParseError(std::string(what) + ": \"" + key + "\" must be a string");
  return v.get<std::string>();
}

inline std::string get_string_or(const json& j, std::string_view what,
                                 const char* key, std::string fallback) {
  if (!j.contains(key)) return fallback;
  return get_string(j, what, key);
}

inline double get_number(const json& v, std::string_view what) {
  if (!v.is_number())
    throw ParseError(std::string(what) + ": expected a number");
  return v.get<double>();
}

inline const json& get_array(const json& j, std::string_view what,
                             const char* key) {
  const json& v = member(j, what, key);
  if (!v.is_array())
    throw ParseError(std::string(what) + ": \"" + key + "\" must be an array");
  return v;
}

inline json parse_text(std::string_view text, std::string_view what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

// IO failures are reported as ParseError; callers map both to one exit code.
inline json read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str(), path);
}

}  // namespace ssaf::json_util
