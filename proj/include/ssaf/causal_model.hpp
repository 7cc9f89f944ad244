#pragma once

// Typed conditions linked by labeled cross-domain causal relations.
//
// Relations are checked against an admissibility catalog of
// (source kind, label, target kind) triples.  A relation outside the catalog
// is accepted only when flagged user_extended.  TradeOff is symmetric: it is
// stored once and reported from both endpoints, and path search may traverse
// it in either direction.

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "ssaf/error.hpp"
#include "ssaf/json_util.hpp"
#include "ssaf/ontology.hpp"

namespace ssaf {

enum class ConditionKind : std::uint8_t {
  Vulnerability,
  Failure,
  Hazard,
  Threat,
  Attack,
  SafetyEffect,
  SafetyRequirement,
  SecurityRequirement,
  SecurityControl,
};

inline constexpr std::array<ConditionKind, 9> kAllConditionKinds = {
    ConditionKind::Vulnerability,     ConditionKind::Failure,
    ConditionKind::Hazard,            ConditionKind::Threat,
    ConditionKind::Attack,            ConditionKind::SafetyEffect,
    ConditionKind::SafetyRequirement, ConditionKind::SecurityRequirement,
    ConditionKind::SecurityControl,
};

constexpr Domain domain_of(ConditionKind k) {
  switch (k) {
    case ConditionKind::Failure:
    case ConditionKind::Hazard:
    case ConditionKind::SafetyEffect:
    case ConditionKind::SafetyRequirement:
      return Domain::Safety;
    case ConditionKind::Vulnerability:
    case ConditionKind::Threat:
    case ConditionKind::Attack:
    case ConditionKind::SecurityRequirement:
    case ConditionKind::SecurityControl:
      return Domain::Security;
  }
  return Domain::Safety;
}

constexpr std::string_view to_string(ConditionKind k) {
  switch (k) {
    case ConditionKind::Vulnerability: return "Vulnerability";
    case ConditionKind::Failure: return "Failure";
    case ConditionKind::Hazard: return "Hazard";
    case ConditionKind::Threat: return "Threat";
    case ConditionKind::Attack: return "Attack";
    case ConditionKind::SafetyEffect: return "SafetyEffect";
    case ConditionKind::SafetyRequirement: return "SafetyRequirement";
    case ConditionKind::SecurityRequirement: return "SecurityRequirement";
    case ConditionKind::SecurityControl: return "SecurityControl";
  }
  return "?";
}

inline std::optional<ConditionKind> parse_condition_kind(std::string_view s) {
  for (ConditionKind k : kAllConditionKinds)
    if (to_string(k) == s) return k;
  return std::nullopt;
}

enum class RelationLabel : std::uint8_t {
  Causes,
  ContributesTo,
  Motivates,
  SafetyImpact,
  Influences,
  TradeOff,
  ConflictsWith,
};

inline constexpr std::array<RelationLabel, 7> kAllRelationLabels = {
    RelationLabel::Causes,       RelationLabel::ContributesTo,
    RelationLabel::Motivates,    RelationLabel::SafetyImpact,
    RelationLabel::Influences,   RelationLabel::TradeOff,
    RelationLabel::ConflictsWith,
};

constexpr std::string_view to_string(RelationLabel l) {
  switch (l) {
    case RelationLabel::Causes: return "Causes";
    case RelationLabel::ContributesTo: return "ContributesTo";
    case RelationLabel::Motivates: return "Motivates";
    case RelationLabel::SafetyImpact: return "SafetyImpact";
    case RelationLabel::Influences: return "Influences";
    case RelationLabel::TradeOff: return "TradeOff";
    case RelationLabel::ConflictsWith: return "ConflictsWith";
  }
  return "?";
}

constexpr bool is_symmetric(RelationLabel l) {
  return l == RelationLabel::TradeOff;
}

inline std::optional<RelationLabel> parse_relation_label(std::string_view s) {
  for (RelationLabel l : kAllRelationLabels)
    if (to_string(l) == s) return l;
  return std::nullopt;
}

struct AdmissibleTriple {
  ConditionKind source;
  RelationLabel label;
  ConditionKind target;
};

// The published causal-relationship examples, one entry per row.
inline constexpr std::array<AdmissibleTriple, 8> kAdmissibility = {{
    {ConditionKind::Vulnerability, RelationLabel::Causes, ConditionKind::Failure},
    {ConditionKind::Vulnerability, RelationLabel::ContributesTo, ConditionKind::Hazard},
    {ConditionKind::SafetyEffect, RelationLabel::Motivates, ConditionKind::Attack},
    {ConditionKind::Threat, RelationLabel::SafetyImpact, ConditionKind::Hazard},
    {ConditionKind::Threat, RelationLabel::Influences, ConditionKind::SafetyRequirement},
    {ConditionKind::SafetyRequirement, RelationLabel::TradeOff, ConditionKind::SecurityRequirement},
    {ConditionKind::SecurityRequirement, RelationLabel::TradeOff, ConditionKind::SafetyRequirement},
    {ConditionKind::SecurityControl, RelationLabel::ConflictsWith, ConditionKind::SafetyRequirement},
}};

constexpr bool is_admissible(ConditionKind source, RelationLabel label,
                             ConditionKind target) {
  for (const auto& t : kAdmissibility)
    if (t.source == source && t.label == label && t.target == target)
      return true;
  return false;
}

struct Condition {
  std::string id;
  ConditionKind kind = ConditionKind::Vulnerability;
  // When absent on input, filled from the kind.
  std::optional<Domain> domain;
  std::string description;

  bool operator==(const Condition&) const = default;
};

struct SyncPoint {
  std::string id;
  std::string phase;
  std::string description;

  bool operator==(const SyncPoint&) const = default;
};

struct CausalRelation {
  std::string source;
  std::string target;
  RelationLabel label = RelationLabel::Causes;
  std::optional<std::string> sync_point;
  std::string rationale;
  bool user_extended = false;

  bool operator==(const CausalRelation&) const = default;
};

// One relation as seen from a given condition.  For a TradeOff edge queried
// from its stored target, `reversed` is set and from/to are swapped.
struct RelationView {
  const CausalRelation* relation;
  std::string from;
  std::string to;
  bool reversed;
};

struct DomainCrossing {
  std::size_t step;  // index of the edge within the path
  Domain from;
  Domain to;
};

struct CausalPath {
  std::vector<std::string> nodes;      // nodes.size() == labels.size() + 1
  std::vector<RelationLabel> labels;
  std::vector<DomainCrossing> crossings;

  std::size_t length() const { return labels.size(); }
};

class CausalGraph {
 public:
  static constexpr std::size_t kDefaultMaxPathLength = 8;

  // Every mutation validates fully before touching the graph, so a failed
  // call leaves it unchanged.
  void add_condition(Condition c) {
    if (index_.count(c.id)) throw ValidationError("duplicate condition id: " + c.id);
    if (sync_index_.count(c.id))
      throw ValidationError("id already used by a sync point: " + c.id);
    const Domain expected = domain_of(c.kind);
    if (c.domain && *c.domain != expected)
      throw ValidationError("condition " + c.id + ": " +
                            std::string(to_string(c.kind)) + " is a " +
                            std::string(to_string(expected)) + "-domain kind");
    c.domain = expected;
    index_.emplace(c.id, conditions_.size());
    conditions_.push_back(std::move(c));
  }

  void add_sync_point(SyncPoint s) {
    if (sync_index_.count(s.id) || index_.count(s.id))
      throw ValidationError("duplicate sync point id: " + s.id);
    sync_index_.emplace(s.id, sync_points_.size());
    sync_points_.push_back(std::move(s));
  }

  void add_relation(CausalRelation r) {
    const Condition& src = condition(r.source);
    const Condition& dst = condition(r.target);
    if (r.sync_point && !sync_index_.count(*r.sync_point))
      throw NotFoundError(*r.sync_point);
    if (!r.user_extended && !is_admissible(src.kind, r.label, dst.kind))
      throw ValidationError(
          "inadmissible relation " + r.source + " -" +
          std::string(to_string(r.label)) + "-> " + r.target + " (" +
          std::string(to_string(src.kind)) + " to " +
          std::string(to_string(dst.kind)) + ")");
    relations_.push_back(std::move(r));
  }

  const Condition& condition(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) throw NotFoundError(std::string(id));
    return conditions_[it->second];
  }

  bool contains(std::string_view id) const {
    return index_.count(std::string(id)) > 0;
  }

  const std::vector<Condition>& conditions() const { return conditions_; }
  const std::vector<CausalRelation>& relations() const { return relations_; }
  const std::vector<SyncPoint>& sync_points() const { return sync_points_; }

  // Relations incident to `id` in either direction.
  std::vector<RelationView> relations_of(std::string_view id) const {
    condition(id);
    std::vector<RelationView> out;
    for (const auto& r : relations_) {
      if (r.source == id) {
        out.push_back({&r, r.source, r.target, false});
      } else if (r.target == id) {
        if (is_symmetric(r.label))
          out.push_back({&r, r.target, r.source, true});
        else
          out.push_back({&r, r.source, r.target, false});
      }
    }
    return out;
  }

  // All simple directed paths from `from` to `to` with at most
  // `max_length` edges, TradeOff edges traversable both ways.  Paths are
  // emitted in depth-first order following relation insertion order.
  std::vector<CausalPath> cross_domain_paths(
      std::string_view from, std::string_view to,
      std::size_t max_length = kDefaultMaxPathLength) const {
    condition(from);
    condition(to);
    std::vector<CausalPath> out;
    if (from == to) return out;

    std::vector<std::string> nodes{std::string(from)};
    std::vector<RelationLabel> labels;
    std::vector<bool> on_path(conditions_.size(), false);
    on_path[index_.at(std::string(from))] = true;
    search(std::string(to), max_length, nodes, labels, on_path, out);
    return out;
  }

 private:
  void search(const std::string& goal, std::size_t max_length,
              std::vector<std::string>& nodes, std::vector<RelationLabel>& labels,
              std::vector<bool>& on_path, std::vector<CausalPath>& out) const {
    if (labels.size() >= max_length) return;
    const std::string here = nodes.back();
    for (const auto& r : relations_) {
      const std::string* next = nullptr;
      if (r.source == here)
        next = &r.target;
      else if (is_symmetric(r.label) && r.target == here)
        next = &r.source;
      if (next == nullptr) continue;
      const std::size_t idx = index_.at(*next);
      if (on_path[idx]) continue;

      nodes.push_back(*next);
      labels.push_back(r.label);
      if (*next == goal) {
        out.push_back(make_path(nodes, labels));
      } else {
        on_path[idx] = true;
        search(goal, max_length, nodes, labels, on_path, out);
        on_path[idx] = false;
      }
      nodes.pop_back();
      labels.pop_back();
    }
  }

  CausalPath make_path(const std::vector<std::string>& nodes,
                       const std::vector<RelationLabel>& labels) const {
    CausalPath p{nodes, labels, {}};
    for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
      const Domain a = *condition(nodes[i]).domain;
      const Domain b = *condition(nodes[i + 1]).domain;
      if (a != b) p.crossings.push_back({i, a, b});
    }
    return p;
  }

  std::vector<Condition> conditions_;
  std::vector<CausalRelation> relations_;
  std::vector<SyncPoint> sync_points_;
  std::map<std::string, std::size_t> index_;
  std::map<std::string, std::size_t> sync_index_;
};

inline nlohmann::json to_json(const CausalGraph& g) {
  nlohmann::json conditions = nlohmann::json::array();
  for (const auto& c : g.conditions())
    conditions.push_back({{"id", c.id},
                          {"kind", to_string(c.kind)},
                          {"domain", to_string(*c.domain)},
                          {"description", c.description}});
  nlohmann::json relations = nlohmann::json::array();
  for (const auto& r : g.relations()) {
    nlohmann::json j = {{"source", r.source},
                        {"target", r.target},
                        {"label", to_string(r.label)},
                        {"rationale", r.rationale}};
    if (r.sync_point) j["sync_point"] = *r.sync_point;
    if (r.user_extended) j["user_extended"] = true;
    relations.push_back(std::move(j));
  }
  nlohmann::json syncs = nlohmann::json::array();
  for (const auto& s : g.sync_points())
    syncs.push_back(
        {{"id", s.id}, {"phase", s.phase}, {"description", s.description}});
  return {{"conditions", conditions},
          {"relations", relations},
          {"sync_points", syncs}};
}

inline CausalGraph load_causal_graph(const nlohmann::json& doc) {
  using namespace json_util;
  require_object(doc, "causal graph");
  reject_unknown_keys(doc, "causal graph",
                      {"conditions", "relations", "sync_points"});
  CausalGraph g;

  if (doc.contains("sync_points")) {
    for (const auto& j : get_array(doc, "causal graph", "sync_points")) {
      require_object(j, "sync point");
      reject_unknown_keys(j, "sync point", {"id", "phase", "description"});
      g.add_sync_point({get_string(j, "sync point", "id"),
                        get_string(j, "sync point", "phase"),
                        get_string_or(j, "sync point", "description", "")});
    }
  }

  for (const auto& j : get_array(doc, "causal graph", "conditions")) {
    require_object(j, "condition");
    reject_unknown_keys(j, "condition", {"id", "kind", "domain", "description"});
    Condition c;
    c.id = get_string(j, "condition", "id");
    const std::string where = "condition " + c.id;
    const std::string kind = get_string(j, where, "kind");
    auto k = parse_condition_kind(kind);
    if (!k) throw ParseError(where + ": unknown kind \"" + kind + "\"");
    c.kind = *k;
    if (j.contains("domain")) {
      auto d = parse_domain(get_string(j, where, "domain"));
      if (!d) throw ParseError(where + ": domain must be safety or security");
      c.domain = d;
    }
    c.description = get_string_or(j, where, "description", "");
    g.add_condition(std::move(c));
  }

  for (const auto& j : get_array(doc, "causal graph", "relations")) {
    require_object(j, "relation");
    reject_unknown_keys(j, "relation",
                        {"source", "target", "label", "sync_point",
                         "rationale", "user_extended"});
    CausalRelation r;
    r.source = get_string(j, "relation", "source");
    r.target = get_string(j, "relation", "target");
    const std::string label = get_string(j, "relation", "label");
    auto l = parse_relation_label(label);
    if (!l) throw ParseError("relation: unknown label \"" + label + "\"");
    r.label = *l;
    if (j.contains("sync_point"))
      r.sync_point = get_string(j, "relation", "sync_point");
    r.rationale = get_string_or(j, "relation", "rationale", "");
    if (j.contains("user_extended")) {
      if (!j["user_extended"].is_boolean())
        throw ParseError("relation: user_extended must be a boolean");
      r.user_extended = j["user_extended"].get<bool>();
    }
    g.add_relation(std::move(r));
  }
  return g;
}

}  // namespace ssaf
