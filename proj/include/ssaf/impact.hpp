#pragma once

// Practitioner-facing impact reports and what-if differentials.
//
// The three state probabilities are the marginals of the S1..S3 indicator
// nodes.  They are independent quantities and need not sum to one; the
// machine's discrete state is reported separately.

#include <algorithm>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "ssaf/bbn.hpp"
#include "ssaf/catalog.hpp"
#include "ssaf/network_spec.hpp"
#include "ssaf/ontology.hpp"
#include "ssaf/state_machine.hpp"

namespace ssaf {

inline constexpr std::string_view kIndependenceNote =
    "state probabilities are independent indicator marginals and need not sum to 1";

struct Recommendation {
  SafetyState state;
  double probability;
  int severity_rank;
  std::vector<ReqType> types;
  std::vector<std::string> classes;  // violated classes feeding this state

  bool operator==(const Recommendation&) const = default;
};

struct ImpactReport {
  std::map<SafetyState, double> state_probabilities;  // S1, S2, S3
  SafetyState machine_state = SafetyState::S0;
  std::set<std::string> outstanding;
  std::set<std::string> violated_classes;
  std::map<SafetyState, std::vector<std::string>> affected_safety_requirements;
  std::map<SafetyState, std::vector<ReqType>> implicated_types;
  std::map<SafetyState, std::vector<std::string>> feeding_classes;
  SeverityOrder severity;
  std::vector<Recommendation> recommendation;
};

// Violation states with non-zero probability, most severe first, then by
// descending probability, then by state name.
inline std::vector<Recommendation> recommend(const ImpactReport& report) {
  std::vector<Recommendation> out;
  for (const auto& [state, p] : report.state_probabilities) {
    if (!(p > 0.0)) continue;
    Recommendation r{state, p, report.severity.rank(state), {}, {}};
    if (auto it = report.implicated_types.find(state); it != report.implicated_types.end())
      r.types = it->second;
    if (auto it = report.feeding_classes.find(state); it != report.feeding_classes.end())
      r.classes = it->second;
    out.push_back(std::move(r));
  }
  std::sort(out.begin(), out.end(), [](const Recommendation& a, const Recommendation& b) {
    if (a.severity_rank != b.severity_rank) return a.severity_rank < b.severity_rank;
    if (a.probability != b.probability) return a.probability > b.probability;
    return to_string(a.state) < to_string(b.state);
  });
  return out;
}

namespace detail {

inline std::map<SafetyState, double> state_probabilities(const bbn::Network& net,
                                                         const bbn::Posterior& post) {
  std::map<SafetyState, double> out;
  for (SafetyState s : kViolationStates) {
    const std::string id = indicator_node_id(s);
    out[s] = net.contains(id) ? post.violated(id) : 0.0;
  }
  return out;
}

}  // namespace detail

// Throws whatever inference throws (unknown evidence node, zero-probability
// evidence).
inline ImpactReport generate_report(const bbn::Network& net, const bbn::Evidence& evidence,
                                    const Machine& machine, const Catalog& catalog) {
  const bbn::Posterior post = bbn::posterior_marginals(net, evidence);

  ImpactReport report;
  report.severity = machine.severity_order();
  report.state_probabilities = detail::state_probabilities(net, post);
  report.machine_state = machine.state();
  report.outstanding = machine.outstanding();
  for (const auto& [id, s] : evidence)
    if (s == bbn::State::Violated && net.node(id).parents.empty())
      report.violated_classes.insert(id);

  for (SafetyState s : kViolationStates) {
    auto& affected = report.affected_safety_requirements[s];
    auto& types = report.implicated_types[s];
    std::set<std::string> feeding;
    for (const auto& r : catalog.requirements)
      if (r.domain == Domain::Safety && r.req_type && group_of(*r.req_type) == s)
        affected.push_back(r.id);
    for (ReqType t : types_in(s)) {
      const std::string type_node = type_node_id(t);
      if (!net.contains(type_node)) continue;
      types.push_back(t);
      for (const auto& parent : net.node(type_node).parents)
        if (report.violated_classes.count(parent)) feeding.insert(parent);
    }
    report.feeding_classes[s].assign(feeding.begin(), feeding.end());
  }
  report.recommendation = recommend(report);
  return report;
}

struct WhatIfDiff {
  bbn::Evidence baseline;
  bbn::Evidence alternative;
  std::map<SafetyState, double> baseline_states;
  std::map<SafetyState, double> alternative_states;
  std::map<SafetyState, double> state_delta;       // alternative - baseline
  std::map<std::string, double> node_delta;        // alternative - baseline
};

inline WhatIfDiff what_if(const bbn::Network& net, const bbn::Evidence& baseline,
                          const bbn::Evidence& alternative) {
  const bbn::Posterior base = bbn::posterior_marginals(net, baseline);
  const bbn::Posterior alt = bbn::posterior_marginals(net, alternative);
  WhatIfDiff diff{baseline, alternative, detail::state_probabilities(net, base),
                  detail::state_probabilities(net, alt), {}, {}};
  for (SafetyState s : kViolationStates)
    diff.state_delta[s] = diff.alternative_states[s] - diff.baseline_states[s];
  for (const auto& [id, m] : alt.marginals)
    diff.node_delta[id] = m.violated - base.violated(id);
  return diff;
}

namespace detail {

template <typename V, typename F>
nlohmann::json state_map(const std::map<SafetyState, V>& m, F&& f) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [s, v] : m) j[std::string(to_string(s))] = f(v);
  return j;
}

inline nlohmann::json type_names(const std::vector<ReqType>& types) {
  nlohmann::json j = nlohmann::json::array();
  for (ReqType t : types) j.push_back(to_string(t));
  return j;
}

}  // namespace detail

inline nlohmann::json to_json(const ImpactReport& r) {
  auto same = [](const auto& v) { return v; };
  nlohmann::json recs = nlohmann::json::array();
  for (const auto& rec : r.recommendation)
    recs.push_back({{"state", to_string(rec.state)},
                    {"name", describe(rec.state)},
                    {"probability", rec.probability},
                    {"severity_rank", rec.severity_rank},
                    {"types", detail::type_names(rec.types)},
                    {"classes", rec.classes}});
  return {{"state_probabilities", detail::state_map(r.state_probabilities, same)},
          {"machine_state", to_string(r.machine_state)},
          {"outstanding", r.outstanding},
          {"violated_classes", r.violated_classes},
          {"affected_safety_requirements",
           detail::state_map(r.affected_safety_requirements, same)},
          {"implicated_types", detail::state_map(r.implicated_types, detail::type_names)},
          {"recommendation", recs},
          {"note", kIndependenceNote}};
}

inline nlohmann::json to_json(const WhatIfDiff& d) {
  auto same = [](const auto& v) { return v; };
  return {{"baseline", bbn::to_json(d.baseline)},
          {"alternative", bbn::to_json(d.alternative)},
          {"baseline_states", detail::state_map(d.baseline_states, same)},
          {"alternative_states", detail::state_map(d.alternative_states, same)},
          {"state_delta", detail::state_map(d.state_delta, same)},
          {"node_delta", d.node_delta}};
}

inline std::string render_text(const ImpactReport& r) {
  std::ostringstream os;
  os << "Machine state: " << to_string(r.machine_state) << " (" << describe(r.machine_state)
     << ")\n";
  if (!r.outstanding.empty()) {
    os << "Outstanding violations:";
    for (const auto& id : r.outstanding) os << ' ' << id;
    os << '\n';
  }
  os << "Violated security classes:";
  if (r.violated_classes.empty()) os << " none";
  for (const auto& id : r.violated_classes) os << ' ' << id;
  os << "\n\n";

  os << std::left << std::setw(6) << "State" << std::setw(30) << "Name" << std::setw(13)
     << "P(violated)" << "Affected safety requirements\n";
  for (const auto& [s, p] : r.state_probabilities) {
    os << std::setw(6) << to_string(s) << std::setw(30) << describe(s) << std::setw(13)
       << std::fixed << std::setprecision(6) << p;
    const auto& affected = r.affected_safety_requirements.at(s);
    if (affected.empty()) os << '-';
    for (std::size_t i = 0; i < affected.size(); ++i) os << (i ? ", " : "") << affected[i];
    os << '\n';
  }
  os << "\nNote: " << kIndependenceNote << ".\n\nRecommended order:\n";
  if (r.recommendation.empty()) os << "  (no action: every state probability is zero)\n";
  for (std::size_t i = 0; i < r.recommendation.size(); ++i) {
    const auto& rec = r.recommendation[i];
    os << "  " << i + 1 << ". " << to_string(rec.state) << " p=" << std::setprecision(6)
       << rec.probability << " types:";
    for (ReqType t : rec.types) os << ' ' << to_string(t);
    if (!rec.classes.empty()) {
      os << " fed by:";
      for (const auto& c : rec.classes) os << ' ' << c;
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace ssaf
