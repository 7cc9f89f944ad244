#pragma once

// A compiled model: catalog, links and the network built from them, plus
// the scenario documents the CLI consumes.

#include <string>
#include <vector>

#include "json.hpp"
#include "ssaf/bbn.hpp"
#include "ssaf/catalog.hpp"
#include "ssaf/json_util.hpp"
#include "ssaf/linker.hpp"
#include "ssaf/network_spec.hpp"
#include "ssaf/state_machine.hpp"

namespace ssaf {

struct Model {
  Catalog catalog;
  LinkDocument links;
  NetworkSpec spec;
  bbn::Network network;
  ValidationReport findings;  // warnings gathered while compiling

  static Model compile(Catalog catalog, LinkDocument links) {
    Model m{std::move(catalog), std::move(links), {}, {}, {}};
    m.findings = validate_catalog(m.catalog);
    if (m.findings.has_errors())
      throw ValidationError("invalid catalog: " + m.findings.error_summary());
    CompileResult compiled = compile_network_spec(m.catalog, m.links.links, m.links.params);
    m.findings.append(compiled.findings);
    m.spec = std::move(compiled.spec);
    m.network = bbn::build_network(m.spec);
    return m;
  }

  static Model load(const std::string& catalog_path, const std::string& links_path) {
    return compile(load_catalog_file(catalog_path), load_link_table_file(links_path));
  }

  // Security classes that are leaves of the compiled network.
  std::vector<std::string> evidence_classes() const {
    std::vector<std::string> out;
    for (const NodeSpec* n : spec.with_role(NodeRole::Leaf)) out.push_back(n->id);
    return out;
  }

  bool accepts_evidence_on(std::string_view class_id) const {
    const NodeSpec* n = spec.find(class_id);
    return n != nullptr && n->role == NodeRole::Leaf;
  }
};

struct ScenarioEvent {
  EventKind kind;
  std::string requirement_id;
  std::optional<std::uint64_t> seq;
};

struct Scenario {
  bbn::Evidence evidence;
  std::vector<ScenarioEvent> events;
};

// Structural parse only; see check_scenario for reference resolution.
inline Scenario parse_scenario(const nlohmann::json& doc) {
  using namespace json_util;
  require_object(doc, "scenario");
  reject_unknown_keys(doc, "scenario", {"evidence", "events"});
  Scenario s;
  if (doc.contains("evidence")) {
    const auto& ev = doc["evidence"];
    require_object(ev, "scenario evidence");
    for (const auto& [id, v] : ev.items()) {
      if (!v.is_string()) throw ParseError("scenario evidence " + id + ": expected a string");
      auto st = bbn::parse_state(v.get<std::string>());
      if (!st) throw ParseError("scenario evidence " + id + ": state must be violated or not_violated");
      s.evidence[id] = *st;
    }
  }
  if (doc.contains("events")) {
    for (const auto& j : get_array(doc, "scenario", "events")) {
      require_object(j, "event");
      reject_unknown_keys(j, "event", {"kind", "requirement_id", "seq"});
      auto kind = parse_event_kind(get_string(j, "event", "kind"));
      if (!kind) throw ParseError("event: kind must be Violation or Resolution");
      ScenarioEvent e{*kind, get_string(j, "event", "requirement_id"), std::nullopt};
      if (j.contains("seq")) {
        if (!j["seq"].is_number_unsigned()) throw ParseError("event: seq must be unsigned");
        e.seq = j["seq"].get<std::uint64_t>();
      }
      s.events.push_back(std::move(e));
    }
  }
  return s;
}

// Throws NotFoundError for evidence on anything but a network leaf.
inline void check_scenario(const Scenario& s, const Model& model) {
  for (const auto& [id, _] : s.evidence)
    if (!model.accepts_evidence_on(id)) throw NotFoundError(id);
}

// Events without an explicit seq are numbered from their 1-based position.
inline std::vector<MachineEvent> machine_events(const Scenario& s) {
  std::vector<MachineEvent> out;
  for (std::size_t i = 0; i < s.events.size(); ++i) {
    const auto& e = s.events[i];
    out.push_back({e.kind, e.requirement_id, e.seq.value_or(i + 1)});
  }
  return out;
}

}  // namespace ssaf
