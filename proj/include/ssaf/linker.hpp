#pragma once

// Cross-domain link table: which security classes feed which requirement
// types, and how strongly.  Compiling links against a catalog yields the
// three-layer NetworkSpec.

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "ssaf/catalog.hpp"
#include "ssaf/error.hpp"
#include "ssaf/json_util.hpp"
#include "ssaf/network_spec.hpp"
#include "ssaf/ontology.hpp"
#include "ssaf/validation.hpp"

namespace ssaf {

struct Link {
  std::string source_class;
  ReqType target_type = ReqType::ResourceUse;
  std::optional<double> weight;  // falls back to CompileParams::default_weight

  bool operator==(const Link&) const = default;
};

struct CompileParams {
  double default_weight = 0.9;
  double leak = 0.0;
  double leaf_prior = 0.05;

  bool operator==(const CompileParams&) const = default;
};

struct LinkTable {
  std::vector<Link> links;

  bool operator==(const LinkTable&) const = default;
  bool empty() const { return links.empty(); }
  std::size_t size() const { return links.size(); }
};

struct LinkDocument {
  LinkTable links;
  CompileParams params;
};

namespace detail {

inline bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

// Checks that need no catalog: pair uniqueness and ranges.
inline ValidationReport check_link_table(const LinkTable& table,
                                         const CompileParams& params) {
  ValidationReport report;
  if (!is_probability(params.default_weight))
    report.error("defaults.weight", "must lie in [0,1]");
  if (!is_probability(params.leak)) report.error("defaults.leak", "must lie in [0,1]");
  if (!is_probability(params.leaf_prior))
    report.error("defaults.leaf_prior", "must lie in [0,1]");

  std::set<std::pair<std::string, ReqType>> seen;
  for (const auto& l : table.links) {
    const std::string id = l.source_class + "->" + std::string(to_string(l.target_type));
    if (!seen.emplace(l.source_class, l.target_type).second)
      report.error(id, "duplicate link");
    if (l.weight && !is_probability(*l.weight))
      report.error(id, "weight " + std::to_string(*l.weight) + " outside [0,1]");
  }
  return report;
}

}  // namespace detail

// Parses without range or uniqueness checks.  Throws ParseError.
inline LinkDocument parse_link_document(const nlohmann::json& doc) {
  using namespace json_util;
  require_object(doc, "links");
  reject_unknown_keys(doc, "links", {"defaults", "links"});
  LinkDocument out;
  if (doc.contains("defaults")) {
    const auto& d = doc["defaults"];
    require_object(d, "defaults");
    reject_unknown_keys(d, "defaults", {"weight", "leak", "leaf_prior"});
    if (d.contains("weight")) out.params.default_weight = get_number(d["weight"], "defaults.weight");
    if (d.contains("leak")) out.params.leak = get_number(d["leak"], "defaults.leak");
    if (d.contains("leaf_prior"))
      out.params.leaf_prior = get_number(d["leaf_prior"], "defaults.leaf_prior");
  }
  for (const auto& j : get_array(doc, "links", "links")) {
    require_object(j, "link");
    reject_unknown_keys(j, "link", {"source_class", "target_type", "weight"});
    Link l;
    l.source_class = get_string(j, "link", "source_class");
    const std::string t = get_string(j, "link", "target_type");
    auto type = parse_req_type(t);
    if (!type) throw ParseError("link " + l.source_class + ": unknown target_type \"" + t + "\"");
    l.target_type = *type;
    if (j.contains("weight")) l.weight = get_number(j["weight"], "link weight");
    out.links.links.push_back(std::move(l));
  }
  return out;
}

// Parses and checks ranges and pair uniqueness; throws ParseError or
// ValidationError.
inline LinkDocument load_link_table(const nlohmann::json& doc) {
  LinkDocument out = parse_link_document(doc);
  ValidationReport r = detail::check_link_table(out.links, out.params);
  if (r.has_errors()) throw ValidationError("invalid links: " + r.error_summary());
  return out;
}

inline LinkDocument load_link_table_file(const std::string& path) {
  return load_link_table(json_util::read_file(path));
}

inline nlohmann::json to_json(const LinkDocument& doc) {
  nlohmann::json links = nlohmann::json::array();
  for (const auto& l : doc.links.links) {
    nlohmann::json j = {{"source_class", l.source_class},
                        {"target_type", to_string(l.target_type)}};
    if (l.weight) j["weight"] = *l.weight;
    links.push_back(std::move(j));
  }
  return {{"defaults",
           {{"weight", doc.params.default_weight},
            {"leak", doc.params.leak},
            {"leaf_prior", doc.params.leaf_prior}}},
          {"links", links}};
}

// Errors: dangling class ids, duplicate pairs, out-of-range weights.
// Warnings: classes with no links, linked types with no safety requirement.
inline ValidationReport validate_links(const Catalog& catalog,
                                       const LinkTable& links,
                                       const CompileParams& params = {}) {
  ValidationReport report = detail::check_link_table(links, params);

  std::set<std::string> linked;
  std::set<ReqType> warned;
  for (const auto& l : links.links) {
    if (catalog.find_class(l.source_class) == nullptr) {
      report.error(l.source_class, "link source is not a security class in the catalog");
      continue;
    }
    linked.insert(l.source_class);
    if (catalog.safety_ids_of(l.target_type).empty() &&
        warned.insert(l.target_type).second)
      report.warning(std::string(to_string(l.target_type)),
                     "linked type has no safety requirement in the catalog");
  }
  for (const auto& c : catalog.classes)
    if (!linked.count(c.id)) report.warning(c.id, "security class has no links");
  return report;
}

struct GroupRow {
  SafetyState state;
  std::vector<std::string> safety;    // catalog order
  std::vector<std::string> security;  // lexicographic, no duplicates
};

struct GroupingReport {
  std::vector<GroupRow> groups;  // S1, S2, S3

  const GroupRow& group(SafetyState s) const {
    for (const auto& g : groups)
      if (g.state == s) return g;
    throw NotFoundError(std::string(to_string(s)));
  }
};

inline GroupingReport grouping_report(const Catalog& catalog,
                                      const LinkTable& links) {
  GroupingReport out;
  for (SafetyState s : kViolationStates) {
    GroupRow row{s, {}, {}};
    for (const auto& r : catalog.requirements)
      if (r.domain == Domain::Safety && r.req_type && group_of(*r.req_type) == s)
        row.safety.push_back(r.id);
    std::set<std::string> classes;
    for (const auto& l : links.links)
      if (group_of(l.target_type) == s) classes.insert(l.source_class);
    row.security.assign(classes.begin(), classes.end());
    out.groups.push_back(std::move(row));
  }
  return out;
}

inline nlohmann::json to_json(const GroupingReport& report) {
  nlohmann::json groups = nlohmann::json::array();
  for (const auto& g : report.groups)
    groups.push_back({{"state", to_string(g.state)},
                      {"name", describe(g.state)},
                      {"safety", g.safety},
                      {"security", g.security}});
  return groups;
}

struct CompileResult {
  NetworkSpec spec;
  ValidationReport findings;  // warnings only; errors throw
};

// Throws ValidationError when validate_links reports errors, or when a
// class id collides with a generated node id.
inline CompileResult compile_network_spec(const Catalog& catalog,
                                          const LinkTable& links,
                                          const CompileParams& params = {}) {
  CompileResult result;
  result.findings = validate_links(catalog, links, params);
  if (result.findings.has_errors())
    throw ValidationError("cannot compile links: " + result.findings.error_summary());
  if (links.empty()) result.findings.warning("links", "empty link table compiles to an empty network");

  // type -> (class -> weight); std::map keeps parents lexicographic.
  std::map<ReqType, std::map<std::string, double>> feeds;
  std::set<std::string> leaves;
  for (const auto& l : links.links) {
    feeds[l.target_type][l.source_class] = l.weight.value_or(params.default_weight);
    leaves.insert(l.source_class);
  }

  std::map<std::string, NodeSpec> nodes;
  for (const auto& c : leaves)
    nodes[c] = NodeSpec{c, NodeRole::Leaf, {}, PriorCpt{params.leaf_prior}, {}, {}, {}};

  std::map<SafetyState, std::vector<std::string>> indicator_parents;
  for (const auto& [type, parents] : feeds) {
    NodeSpec n{type_node_id(type), NodeRole::Type, {}, NoisyOrCpt{{}, params.leak},
               type, {}, catalog.safety_ids_of(type)};
    auto& cpt = std::get<NoisyOrCpt>(n.cpt);
    for (const auto& [cls, w] : parents) {
      n.parents.push_back(cls);
      cpt.weights.push_back(w);
    }
    indicator_parents[group_of(type)].push_back(n.id);
    if (nodes.count(n.id)) throw ValidationError("node id collision: " + n.id);
    nodes[n.id] = std::move(n);
  }
  for (auto& [state, parents] : indicator_parents) {
    std::sort(parents.begin(), parents.end());
    NodeSpec n{indicator_node_id(state), NodeRole::Indicator, parents,
               DeterministicOrCpt{}, {}, state, {}};
    if (nodes.count(n.id)) throw ValidationError("node id collision: " + n.id);
    nodes[n.id] = std::move(n);
  }

  for (auto& [_, n] : nodes) result.spec.nodes.push_back(std::move(n));
  return result;
}

}  // namespace ssaf
