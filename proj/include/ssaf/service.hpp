#pragma once

// HTTP facade over a single live model session.
//
// Session holds the compiled model, the current evidence and the machine.
// Every mutation takes the exclusive lock and bumps the revision; reads take
// a shared lock, so a response always reflects one revision.  dispatch()
// implements the routes independently of any socket so that the contract is
// testable in-process; mount() binds it to an httplib server.

#include <mutex>
#include <optional>
#include <regex>
#include <shared_mutex>
#include <string>

#include "httplib.h"
#include "json.hpp"
#include "ssaf/error.hpp"
#include "ssaf/impact.hpp"
#include "ssaf/linker.hpp"
#include "ssaf/model.hpp"
#include "ssaf/state_machine.hpp"

namespace ssaf::service {

using nlohmann::json;

class ServiceError : public Error {
 public:
  ServiceError(int status, const std::string& what) : Error(what), status_(status) {}
  int status() const noexcept { return status_; }

 private:
  int status_;
};

class Session {
 public:
  Session() = default;
  explicit Session(Model model) { load(std::move(model)); }

  void load(Model model) {
    std::unique_lock lock(mutex_);
    model_ = std::move(model);
    evidence_.clear();
    machine_ = Machine{};
    ++revision_;
  }

  std::uint64_t revision() const {
    std::shared_lock lock(mutex_);
    return revision_;
  }

  json get_model() const {
    std::shared_lock lock(mutex_);
    const Model& m = loaded();
    json classes = json::array();
    for (const auto& c : m.catalog.classes)
      classes.push_back({{"id", c.id},
                         {"name", c.name},
                         {"linked", m.accepts_evidence_on(c.id)}});
    json requirements = json::array();
    for (const auto& r : m.catalog.requirements)
      if (r.domain == Domain::Safety)
        requirements.push_back({{"id", r.id},
                                {"title", r.title},
                                {"req_type", to_string(*r.req_type)},
                                {"state", to_string(group_of(*r.req_type))}});
    json nodes = json::array();
    for (const auto& n : m.spec.nodes)
      nodes.push_back({{"id", n.id}, {"role", to_string(n.role)}, {"parents", n.parents}});
    return {{"revision", revision_},
            {"nodes", nodes},
            {"classes", classes},
            {"safety_requirements", requirements},
            {"groups", to_json(grouping_report(m.catalog, m.links.links))}};
  }

  // state: "violated" | "not_violated" | "unobserved" (removes the entry).
  json put_evidence(const std::string& class_id, const std::string& state) {
    std::unique_lock lock(mutex_);
    const Model& m = loaded();
    if (!m.accepts_evidence_on(class_id))
      throw ServiceError(404, "unknown security class: " + class_id);
    bbn::Evidence next = evidence_;
    if (state == "unobserved") {
      next.erase(class_id);
    } else if (auto s = bbn::parse_state(state)) {
      next[class_id] = *s;
    } else {
      throw ServiceError(422, "invalid state token: " + state);
    }
    evidence_ = std::move(next);
    ++revision_;
    return {{"revision", revision_}, {"evidence", bbn::to_json(evidence_)}};
  }

  json get_report() const {
    std::shared_lock lock(mutex_);
    const Model& m = loaded();
    try {
      return {{"revision", revision_},
              {"evidence", bbn::to_json(evidence_)},
              {"report", to_json(generate_report(m.network, evidence_, machine_, m.catalog))}};
    } catch (const InferenceError& e) {
      throw ServiceError(422, e.what());
    }
  }

  json post_event(const std::string& kind, const std::string& requirement_id) {
    std::unique_lock lock(mutex_);
    const Model& m = loaded();
    auto k = parse_event_kind(kind);
    if (!k) throw ServiceError(422, "kind must be Violation or Resolution");
    const MachineEvent event{*k, requirement_id, machine_.next_seq()};
    try {
      machine_.apply(event, m.catalog);
    } catch (const NotFoundError& e) {
      throw ServiceError(404, "unknown requirement: " + e.id());
    } catch (const TransitionError& e) {
      throw ServiceError(409, e.what());
    } catch (const ValidationError& e) {
      throw ServiceError(422, e.what());
    }
    ++revision_;
    return {{"revision", revision_},
            {"seq", event.seq},
            {"state", to_string(machine_.state())},
            {"outstanding", machine_.outstanding()}};
  }

  // overlay: {class_id: state} applied over the current evidence.
  json post_whatif(const json& overlay) const {
    std::shared_lock lock(mutex_);
    const Model& m = loaded();
    if (!overlay.is_object()) throw ServiceError(400, "overlay must be an object");
    bbn::Evidence alternative = evidence_;
    for (const auto& [id, v] : overlay.items()) {
      if (!m.accepts_evidence_on(id)) throw ServiceError(404, "unknown security class: " + id);
      if (!v.is_string()) throw ServiceError(422, "invalid state token for " + id);
      const std::string token = v.get<std::string>();
      if (token == "unobserved") {
        alternative.erase(id);
      } else if (auto s = bbn::parse_state(token)) {
        alternative[id] = *s;
      } else {
        throw ServiceError(422, "invalid state token: " + token);
      }
    }
    try {
      return {{"revision", revision_}, {"diff", to_json(what_if(m.network, evidence_, alternative))}};
    } catch (const InferenceError& e) {
      throw ServiceError(422, e.what());
    }
  }

  json get_trace() const {
    std::shared_lock lock(mutex_);
    loaded();
    json trace = json::array();
    for (const auto& e : machine_.trace()) trace.push_back(to_json(e));
    return {{"revision", revision_}, {"state", to_string(machine_.state())}, {"trace", trace}};
  }

 private:
  const Model& loaded() const {
    if (!model_) throw ServiceError(503, "no model loaded");
    return *model_;
  }

  mutable std::shared_mutex mutex_;
  std::optional<Model> model_;
  bbn::Evidence evidence_;
  Machine machine_;
  std::uint64_t revision_ = 0;
};

struct Response {
  int status = 200;
  std::string body;
};

inline Response dispatch(Session& session, const std::string& method, const std::string& path,
                         const std::string& body) {
  static const std::regex evidence_route(R"(^/api/evidence/([^/]+)$)");
  auto parse_body = [&]() {
    try {
      json j = json::parse(body);
      if (!j.is_object()) throw ServiceError(400, "request body must be a JSON object");
      return j;
    } catch (const json::parse_error& e) {
      throw ServiceError(400, std::string("malformed JSON body: ") + e.what());
    }
  };
  auto string_field = [](const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string())
      throw ServiceError(422, std::string("missing string field \"") + key + "\"");
    return it->get<std::string>();
  };

  try {
    std::smatch match;
    json out;
    if (method == "GET" && path == "/api/model") {
      out = session.get_model();
    } else if (method == "GET" && path == "/api/report") {
      out = session.get_report();
    } else if (method == "GET" && path == "/api/trace") {
      out = session.get_trace();
    } else if (method == "PUT" && std::regex_match(path, match, evidence_route)) {
      out = session.put_evidence(match[1].str(), string_field(parse_body(), "state"));
    } else if (method == "POST" && path == "/api/event") {
      const json j = parse_body();
      out = session.post_event(string_field(j, "kind"), string_field(j, "requirement_id"));
    } else if (method == "POST" && path == "/api/whatif") {
      const json j = parse_body();
      auto it = j.find("overlay");
      out = session.post_whatif(it == j.end() ? json::object() : *it);
    } else {
      return {404, json{{"revision", session.revision()},
                        {"error", "no route for " + method + " " + path}}.dump()};
    }
    return {200, out.dump()};
  } catch (const ServiceError& e) {
    return {e.status(), json{{"revision", session.revision()}, {"error", e.what()}}.dump()};
  } catch (const Error& e) {
    return {422, json{{"revision", session.revision()}, {"error", e.what()}}.dump()};
  }
}

// Routes /api/* to dispatch(); serves `static_dir` at / when non-empty.
inline void mount(httplib::Server& server, Session& session, const std::string& static_dir = "") {
  auto handler = [&session](const httplib::Request& req, httplib::Response& res) {
    const Response r = dispatch(session, req.method, req.path, req.body);
    res.status = r.status;
    res.set_content(r.body, "application/json");
  };
  server.Get(R"(/api/.*)", handler);
  server.Put(R"(/api/.*)", handler);
  server.Post(R"(/api/.*)", handler);
  if (!static_dir.empty() && !server.set_mount_point("/", static_dir))
    throw ParseError("static directory not found: " + static_dir);
}

}  // namespace ssaf::service
