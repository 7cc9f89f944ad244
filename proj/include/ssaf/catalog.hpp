#pragma once

// Safety and security requirement catalogs.
//
// A catalog holds requirements from both domains and the security classes
// that group security requirements.  Catalogs are plain values: load_catalog
// returns only catalogs for which validate_catalog reports no errors, and a
// loaded catalog is never mutated afterwards.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"
#include "ssaf/error.hpp"
#include "ssaf/json_util.hpp"
#include "ssaf/ontology.hpp"
#include "ssaf/validation.hpp"

namespace ssaf {

struct Requirement {
  std::string id;
  Domain domain = Domain::Safety;
  std::string standard;
  std::string title;
  // Required for safety requirements; security requirements are typed via
  // the class they belong to.
  std::optional<ReqType> req_type;

  bool operator==(const Requirement&) const = default;
};

struct SecurityClass {
  std::string id;
  std::string name;
  std::vector<std::string> members;

  bool operator==(const SecurityClass&) const = default;
};

struct Catalog {
  std::vector<Requirement> requirements;
  std::vector<SecurityClass> classes;

  bool operator==(const Catalog&) const = default;

  std::size_t safety_count() const { return count(Domain::Safety); }
  std::size_t security_count() const { return count(Domain::Security); }

  const Requirement* find_requirement(std::string_view id) const {
    for (const auto& r : requirements)
      if (r.id == id) return &r;
    return nullptr;
  }

  const SecurityClass* find_class(std::string_view id) const {
    for (const auto& c : classes)
      if (c.id == id) return &c;
    return nullptr;
  }

  // Safety requirements of the given type, in catalog order.
  std::vector<std::string> safety_ids_of(ReqType t) const {
    std::vector<std::string> out;
    for (const auto& r : requirements)
      if (r.domain == Domain::Safety && r.req_type == t) out.push_back(r.id);
    return out;
  }

 private:
  std::size_t count(Domain d) const {
    std::size_t n = 0;
    for (const auto& r : requirements) n += r.domain == d;
    return n;
  }
};

inline ValidationReport validate_catalog(const Catalog& catalog) {
  ValidationReport report;

  std::map<std::string, int> seen;
  for (const auto& r : catalog.requirements) ++seen[r.id];
  for (const auto& c : catalog.classes) ++seen[c.id];
  for (const auto& [id, n] : seen)
    if (n > 1) report.error(id, "duplicate id (" + std::to_string(n) + " occurrences)");

  for (const auto& r : catalog.requirements)
    if (r.domain == Domain::Safety && !r.req_type)
      report.error(r.id, "safety requirement without req_type");

  std::set<std::string> classed;
  for (const auto& c : catalog.classes) {
    for (const auto& m : c.members) {
      const Requirement* r = catalog.find_requirement(m);
      if (r == nullptr) {
        report.error(m, "class " + c.id + " references unknown requirement");
      } else if (r->domain != Domain::Security) {
        report.error(m, "class " + c.id + " references a safety requirement");
      } else {
        classed.insert(m);
      }
    }
  }

  for (const auto& r : catalog.requirements)
    if (r.domain == Domain::Security && !classed.count(r.id))
      report.warning(r.id, "security requirement belongs to no class");

  return report;
}

using CatalogElement =
    std::variant<const Requirement*, const SecurityClass*>;

// Ids are case-sensitive.  Throws NotFoundError when absent.
inline CatalogElement lookup(const Catalog& catalog, std::string_view id) {
  if (const Requirement* r = catalog.find_requirement(id)) return r;
  if (const SecurityClass* c = catalog.find_class(id)) return c;
  throw NotFoundError(std::string(id));
}

inline nlohmann::json to_json(const Catalog& catalog) {
  nlohmann::json reqs = nlohmann::json::array();
  for (const auto& r : catalog.requirements) {
    nlohmann::json j = {{"id", r.id},
                        {"domain", to_string(r.domain)},
                        {"standard", r.standard},
                        {"title", r.title}};
    if (r.req_type) j["req_type"] = to_string(*r.req_type);
    reqs.push_back(std::move(j));
  }
  nlohmann::json classes = nlohmann::json::array();
  for (const auto& c : catalog.classes)
    classes.push_back({{"id", c.id}, {"name", c.name}, {"members", c.members}});
  return {{"requirements", reqs}, {"classes", classes}};
}

// Parses without validating.  Throws ParseError.
inline Catalog parse_catalog(const nlohmann::json& doc) {
  using namespace json_util;
  require_object(doc, "catalog");
  reject_unknown_keys(doc, "catalog", {"requirements", "classes"});

  Catalog out;
  for (const auto& j : get_array(doc, "catalog", "requirements")) {
    require_object(j, "requirement");
    reject_unknown_keys(j, "requirement",
                        {"id", "domain", "standard", "title", "req_type"});
    Requirement r;
    r.id = get_string(j, "requirement", "id");
    const std::string where = "requirement " + r.id;
    auto domain = parse_domain(get_string(j, where, "domain"));
    if (!domain) throw ParseError(where + ": domain must be safety or security");
    r.domain = *domain;
    r.standard = get_string(j, where, "standard");
    r.title = get_string(j, where, "title");
    if (j.contains("req_type")) {
      const std::string t = get_string(j, where, "req_type");
      r.req_type = parse_req_type(t);
      if (!r.req_type) throw ParseError(where + ": unknown req_type \"" + t + "\"");
    }
    out.requirements.push_back(std::move(r));
  }
  for (const auto& j : get_array(doc, "catalog", "classes")) {
    require_object(j, "class");
    reject_unknown_keys(j, "class", {"id", "name", "members"});
    SecurityClass c;
    c.id = get_string(j, "class", "id");
    const std::string where = "class " + c.id;
    c.name = get_string(j, where, "name");
    for (const auto& m : get_array(j, where, "members")) {
      if (!m.is_string()) throw ParseError(where + ": members must be strings");
      c.members.push_back(m.get<std::string>());
    }
    out.classes.push_back(std::move(c));
  }
  return out;
}

// Parses and validates; throws ParseError or ValidationError (the message
// names every offending id).  Warnings do not fail the load.
inline Catalog load_catalog(const nlohmann::json& doc) {
  Catalog catalog = parse_catalog(doc);
  ValidationReport report = validate_catalog(catalog);
  if (report.has_errors())
    throw ValidationError("invalid catalog: " + report.error_summary());
  return catalog;
}

inline Catalog load_catalog_file(const std::string& path) {
  return load_catalog(json_util::read_file(path));
}

}  // namespace ssaf
