#pragma once

// Four-state safety-requirement violation machine.
//
// The machine keeps the full set of outstanding violated safety
// requirements; its state is a pure function of that set: S0 when empty,
// otherwise the most severe group that has an outstanding violation.  Every
// applied event is appended to the trace, and replaying a trace from a fresh
// machine reproduces it exactly.

#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "ssaf/catalog.hpp"
#include "ssaf/error.hpp"
#include "ssaf/ontology.hpp"

namespace ssaf {

enum class EventKind : std::uint8_t { Violation, Resolution };

constexpr std::string_view to_string(EventKind k) {
  return k == EventKind::Violation ? "Violation" : "Resolution";
}

inline std::optional<EventKind> parse_event_kind(std::string_view s) {
  if (s == "Violation") return EventKind::Violation;
  if (s == "Resolution") return EventKind::Resolution;
  return std::nullopt;
}

struct MachineEvent {
  EventKind kind = EventKind::Violation;
  std::string requirement_id;
  std::uint64_t seq = 0;

  bool operator==(const MachineEvent&) const = default;
};

struct TraceEntry {
  MachineEvent event;
  SafetyState state;

  bool operator==(const TraceEntry&) const = default;
};

// Resolves `id` to a safety requirement's type.  Throws NotFoundError for
// an unknown id and ValidationError for a non-safety one.
inline ReqType safety_type_of(const Catalog& catalog, std::string_view id) {
  const Requirement* r = catalog.find_requirement(id);
  if (r == nullptr) throw NotFoundError(std::string(id));
  if (r->domain != Domain::Safety || !r->req_type)
    throw ValidationError(std::string(id) + " is not a safety requirement");
  return *r->req_type;
}

inline SafetyState classify(const std::set<std::string>& outstanding,
                            const Catalog& catalog,
                            const SeverityOrder& order = {}) {
  SafetyState worst = SafetyState::S0;
  for (const auto& id : outstanding) {
    const SafetyState s = group_of(safety_type_of(catalog, id));
    if (order.rank(s) < order.rank(worst)) worst = s;
  }
  return worst;
}

class Machine {
 public:
  Machine() = default;
  explicit Machine(SeverityOrder order) : order_(order) {}

  SafetyState state() const { return state_; }
  const std::set<std::string>& outstanding() const { return outstanding_; }
  const std::vector<TraceEntry>& trace() const { return trace_; }
  const SeverityOrder& severity_order() const { return order_; }

  // Next sequence number that keeps the trace non-decreasing.
  std::uint64_t next_seq() const { return trace_.empty() ? 1 : trace_.back().event.seq + 1; }

  // Applies in place.  On any error the machine is left unchanged.
  void apply(const MachineEvent& event, const Catalog& catalog) {
    safety_type_of(catalog, event.requirement_id);
    if (!trace_.empty() && event.seq < trace_.back().event.seq)
      throw TransitionError(event.seq, "sequence number goes backwards");

    std::set<std::string> next = outstanding_;
    if (event.kind == EventKind::Violation) {
      if (!next.insert(event.requirement_id).second)
        throw TransitionError(event.seq, "duplicate violation of " + event.requirement_id);
    } else {
      if (next.erase(event.requirement_id) == 0)
        throw TransitionError(event.seq, event.requirement_id + " is not outstanding");
    }
    const SafetyState s = classify(next, catalog, order_);
    trace_.push_back({event, s});
    outstanding_ = std::move(next);
    state_ = s;
  }

  bool operator==(const Machine& other) const {
    return state_ == other.state_ && outstanding_ == other.outstanding_ &&
           trace_ == other.trace_ && order_.ranking() == other.order_.ranking();
  }

 private:
  SeverityOrder order_;
  std::set<std::string> outstanding_;
  std::vector<TraceEntry> trace_;
  SafetyState state_ = SafetyState::S0;
};

inline Machine apply_event(Machine machine, const MachineEvent& event,
                           const Catalog& catalog) {
  machine.apply(event, catalog);
  return machine;
}

inline Machine replay(const std::vector<TraceEntry>& trace, const Catalog& catalog,
                      const SeverityOrder& order = {}) {
  Machine m(order);
  for (const auto& entry : trace) m.apply(entry.event, catalog);
  return m;
}

inline nlohmann::json to_json(const TraceEntry& e) {
  return {{"seq", e.event.seq},
          {"kind", to_string(e.event.kind)},
          {"requirement", e.event.requirement_id},
          {"state", to_string(e.state)}};
}

// One compact JSON record per line.
inline std::string trace_jsonl(const std::vector<TraceEntry>& trace) {
  std::string out;
  for (const auto& e : trace) out += to_json(e).dump() + "\n";
  return out;
}

inline std::vector<TraceEntry> parse_trace_jsonl(std::string_view text) {
  std::vector<TraceEntry> out;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(start, end - start);
    start = end + 1;
    if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;

    const auto j = json_util::parse_text(line, "trace line");
    json_util::require_object(j, "trace line");
    json_util::reject_unknown_keys(j, "trace line", {"seq", "kind", "requirement", "state"});
    const auto& seq = json_util::member(j, "trace line", "seq");
    if (!seq.is_number_unsigned()) throw ParseError("trace line: seq must be unsigned");
    auto kind = parse_event_kind(json_util::get_string(j, "trace line", "kind"));
    auto state = parse_safety_state(json_util::get_string(j, "trace line", "state"));
    if (!kind || !state) throw ParseError("trace line: bad kind or state");
    out.push_back({{*kind, json_util::get_string(j, "trace line", "requirement"),
                    seq.get<std::uint64_t>()},
                   *state});
  }
  return out;
}

}  // namespace ssaf
