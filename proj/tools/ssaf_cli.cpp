// Command-line front end: validate, compile, infer, simulate, report, serve.
//
// Exit codes: 0 ok, 1 validation/model error, 2 parse or IO error,
// 3 oracle mismatch.  Standard output carries only the payload.

#include <csignal>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "httplib.h"
#include "ssaf/bbn.hpp"
#include "ssaf/bbn_oracle.hpp"
#include "ssaf/catalog.hpp"
#include "ssaf/impact.hpp"
#include "ssaf/linker.hpp"
#include "ssaf/model.hpp"
#include "ssaf/service.hpp"
#include "ssaf/state_machine.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 1;
constexpr int kParse = 2;
constexpr int kOracleMismatch = 3;
constexpr double kOracleTolerance = 1e-9;

struct Inputs {
  std::string catalog;
  std::string links;
  std::string scenario;
};

int cmd_validate(const Inputs& in) {
  const ssaf::Catalog catalog = ssaf::parse_catalog(ssaf::json_util::read_file(in.catalog));
  const ssaf::LinkDocument links =
      ssaf::parse_link_document(ssaf::json_util::read_file(in.links));
  ssaf::ValidationReport report = ssaf::validate_catalog(catalog);
  report.append(ssaf::validate_links(catalog, links.links, links.params));
  for (const auto& f : report.findings) std::cout << f << '\n';
  return report.has_errors() ? kInvalid : kOk;
}

int cmd_compile(const Inputs& in) {
  const ssaf::Model model = ssaf::Model::load(in.catalog, in.links);
  for (const auto& f : model.findings.findings) std::cerr << f << '\n';
  std::cout << ssaf::serialize(model.spec);
  return kOk;
}

struct Loaded {
  ssaf::Model model;
  ssaf::Scenario scenario;
};

Loaded load_all(const Inputs& in) {
  Loaded l{ssaf::Model::load(in.catalog, in.links),
           ssaf::parse_scenario(ssaf::json_util::read_file(in.scenario))};
  ssaf::check_scenario(l.scenario, l.model);
  return l;
}

ssaf::Machine run_events(const Loaded& l) {
  ssaf::Machine machine;
  for (const auto& e : ssaf::machine_events(l.scenario)) machine.apply(e, l.model.catalog);
  return machine;
}

int cmd_infer(const Inputs& in, bool oracle) {
  const Loaded l = load_all(in);
  const ssaf::Machine machine = run_events(l);
  const auto report =
      ssaf::generate_report(l.model.network, l.scenario.evidence, machine, l.model.catalog);
  std::cout << ssaf::to_json(report).dump(2) << '\n';
  if (oracle) {
    const auto exact = ssaf::bbn::posterior_marginals(l.model.network, l.scenario.evidence);
    const auto reference = ssaf::bbn::brute_force_marginals(l.model.network, l.scenario.evidence);
    const double diff = ssaf::bbn::max_abs_difference(exact, reference);
    if (diff > kOracleTolerance) {
      std::cerr << "oracle mismatch: max |difference| = " << diff << '\n';
      return kOracleMismatch;
    }
    std::cerr << "oracle agrees (max |difference| = " << diff << ")\n";
  }
  return kOk;
}

int cmd_simulate(const Inputs& in) {
  const Loaded l = load_all(in);
  ssaf::Machine machine;
  for (const auto& e : ssaf::machine_events(l.scenario)) {
    try {
      machine.apply(e, l.model.catalog);
    } catch (const ssaf::TransitionError&) {
      throw;
    } catch (const ssaf::Error& err) {
      throw ssaf::TransitionError(e.seq, err.what());
    }
    std::cout << ssaf::to_json(machine.trace().back()).dump() << '\n' << std::flush;
  }
  return kOk;
}

int cmd_report(const Inputs& in) {
  const Loaded l = load_all(in);
  const ssaf::Machine machine = run_events(l);
  std::cout << ssaf::render_text(
      ssaf::generate_report(l.model.network, l.scenario.evidence, machine, l.model.catalog));
  return kOk;
}

httplib::Server* g_server = nullptr;

int cmd_serve(const std::string& host, int port, const std::string& model_dir,
              const std::string& static_dir) {
  ssaf::service::Session session(
      ssaf::Model::load(model_dir + "/catalog.json", model_dir + "/links.json"));
  httplib::Server server;
  ssaf::service::mount(server, session, static_dir);
  g_server = &server;
  std::signal(SIGINT, [](int) { if (g_server) g_server->stop(); });
  std::signal(SIGTERM, [](int) { if (g_server) g_server->stop(); });
  std::cerr << "serving " << model_dir << " on http://" << host << ':' << port << '\n';
  if (!server.listen(host, port)) {
    std::cerr << "cannot listen on " << host << ':' << port << '\n';
    return kParse;
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Safety-security co-assurance engine"};
  app.require_subcommand(1);

  Inputs in;
  bool oracle = false;
  auto add_model = [&](CLI::App* cmd) {
    cmd->add_option("catalog", in.catalog, "Catalog JSON")->required();
    cmd->add_option("links", in.links, "Links JSON")->required();
  };
  auto add_scenario = [&](CLI::App* cmd) {
    add_model(cmd);
    cmd->add_option("scenario", in.scenario, "Scenario JSON")->required();
  };

  auto* validate = app.add_subcommand("validate", "Validate a catalog and link table");
  add_model(validate);
  auto* compile = app.add_subcommand("compile", "Emit the compiled network spec as JSON");
  add_model(compile);
  auto* infer = app.add_subcommand("infer", "Print the impact report for a scenario as JSON");
  add_scenario(infer);
  infer->add_flag("--oracle", oracle, "Cross-check inference against full enumeration");
  auto* simulate = app.add_subcommand("simulate", "Replay scenario events, one trace line each");
  add_scenario(simulate);
  auto* report = app.add_subcommand("report", "Print a human-readable impact report");
  add_scenario(report);

  std::string host = "127.0.0.1", model_dir, static_dir;
  int port = 8080;
  auto* serve = app.add_subcommand("serve", "Serve the HTTP API for one model");
  serve->add_option("--port", port, "TCP port")->check(CLI::Range(1, 65535));
  serve->add_option("--host", host, "Bind address");
  serve->add_option("--model-dir", model_dir, "Directory holding catalog.json and links.json")
      ->required();
  serve->add_option("--static-dir", static_dir, "Dashboard files served at /");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kOk : kParse;
  }

  try {
    if (*validate) return cmd_validate(in);
    if (*compile) return cmd_compile(in);
    if (*infer) return cmd_infer(in, oracle);
    if (*simulate) return cmd_simulate(in);
    if (*report) return cmd_report(in);
    if (*serve) return cmd_serve(host, port, model_dir, static_dir);
  } catch (const ssaf::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kParse;
  } catch (const ssaf::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInvalid;
  }
  return kOk;
}
