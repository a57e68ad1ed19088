// Copyright 2026 The TopoClaw Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "topoclaw/cron.hpp"
#include "topoclaw/error.hpp"
#include "topoclaw/governance.hpp"
#include "topoclaw/io.hpp"
#include "topoclaw/placement.hpp"
#include "topoclaw/rational.hpp"
#include "topoclaw/runtime.hpp"
#include "topoclaw/scenario.hpp"
#include "topoclaw/skills.hpp"
#include "topoclaw/transcript.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace topoclaw;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitScenario = 2;
constexpr int kExitInvariant = 3;

fs::path asset_dir(const std::string& flag) {
  if (!flag.empty()) return flag;
  if (const char* env = std::getenv("TOPOCLAW_ASSETS")) return env;
  if (fs::exists(TOPOCLAW_SOURCE_ASSET_DIR)) return TOPOCLAW_SOURCE_ASSET_DIR;
  return TOPOCLAW_INSTALL_ASSET_DIR;
}

void emit(const json& j, const std::string& out) {
  if (out.empty()) {
    std::cout << dump_json(j);
  } else {
    write_text_file(out, dump_json(j));
  }
}

KeyStore keystore_for(const Scenario& s) {
  KeyStore keys;
  for (const auto& [ref, secret] : s.keys) keys.add_key(ref, secret);
  for (const auto& u : s.social.users) keys.bind(u);
  return keys;
}

DeviceGraph load_graph(const std::string& file) {
  return topology_from_json(read_json_file(file)).devices;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"topoclaw: placement, governance and scenario runner for twin agents"};
  app.require_subcommand(1);
  std::string assets;
  app.add_option("--assets", assets, "Directory holding skills/, scenarios/ and graphs/");

  // run
  auto* run = app.add_subcommand("run", "Run a scenario and write its transcript");
  std::string run_scenario_file, run_mode, run_out, run_solver = "greedy";
  run->add_option("--scenario", run_scenario_file, "Scenario JSON")->required();
  run->add_option("--mode", run_mode, "single_node | social_only | full_dual");
  run->add_option("--transcript", run_out, "Where to write the transcript");
  run->add_option("--solver", run_solver, "greedy | exhaustive");

  // verify
  auto* verify = app.add_subcommand("verify", "Re-check a transcript offline");
  std::string verify_file, verify_scenario;
  verify->add_option("--transcript", verify_file, "Transcript JSON")->required();
  verify->add_option("--scenario", verify_scenario,
                     "Scenario the transcript came from; enables tag checks");

  // place
  auto* place_cmd = app.add_subcommand("place", "Place a task DAG on a device graph");
  std::string place_graph, place_dag, place_intent, place_solver = "both", place_out;
  place_cmd->add_option("--graph", place_graph, "Topology or device graph JSON")->required();
  auto* dag_opt = place_cmd->add_option("--dag", place_dag, "Task DAG JSON");
  auto* intent_opt = place_cmd->add_option("--intent", place_intent, "Intent script JSON");
  dag_opt->excludes(intent_opt);
  place_cmd->add_option("--solver", place_solver, "exhaustive | greedy | both");
  place_cmd->add_option("--out", place_out, "Output file (default stdout)");

  // compile
  auto* compile = app.add_subcommand("compile", "Compile an intent script into a task DAG");
  std::string compile_intent_file, compile_out;
  compile->add_option("--intent", compile_intent_file, "Intent script JSON")->required();
  compile->add_option("--out", compile_out, "Output file (default stdout)");

  // policy
  auto* policy = app.add_subcommand("policy", "Governance pipeline tools");
  policy->require_subcommand(1);
  auto* check = policy->add_subcommand("check", "Evaluate one action in one context");
  std::string check_action, check_context, check_policy, check_topology;
  check->add_option("--action", check_action, "Action JSON")->required();
  check->add_option("--context", check_context, "Context JSON")->required();
  check->add_option("--policy", check_policy, "Policy configuration JSON");
  check->add_option("--topology", check_topology, "Topology JSON supplying trust edges");
  auto* rules = policy->add_subcommand("rules", "Print the built-in command deny rules");

  // cron
  auto* cron = app.add_subcommand("cron", "Cron expression tools");
  cron->require_subcommand(1);
  auto* next = cron->add_subcommand("next", "Print the next fire times of a cron spec");
  std::string cron_spec, cron_after;
  int cron_count = 1;
  next->add_option("spec", cron_spec, "Five-field cron expression")->required();
  next->add_option("--after", cron_after, "ISO-8601 UTC time")->required();
  next->add_option("--count", cron_count, "How many fire times to print")->check(CLI::Range(1, 1000));

  // skills
  auto* skills = app.add_subcommand("skills", "Skill registry tools");
  skills->require_subcommand(1);
  auto* list = skills->add_subcommand("list", "List the registered skills");
  auto* resolve = skills->add_subcommand("resolve", "Pick the node that would run a skill");
  std::string resolve_name, resolve_graph;
  resolve->add_option("name", resolve_name, "Skill name")->required();
  resolve->add_option("--graph", resolve_graph, "Topology or device graph JSON")->required();
  auto* verbs = skills->add_subcommand("verbs", "Print the verb table derived from the registry");

  // template
  auto* tmpl = app.add_subcommand("template", "Portable assistant templates");
  tmpl->require_subcommand(1);
  auto* pack = tmpl->add_subcommand("pack", "Serialize a template into its portable record");
  std::string pack_file, pack_out;
  pack->add_option("file", pack_file, "Template JSON")->required();
  pack->add_option("--out", pack_out, "Output file (default stdout)");
  auto* install = tmpl->add_subcommand("install", "Instantiate a template record on a graph");
  std::string install_file, install_graph;
  install->add_option("file", install_file, "Template record")->required();
  install->add_option("--graph", install_graph, "Topology or device graph JSON")->required();

  CLI11_PARSE(app, argc, argv);

  auto load_registry = [&] { return SkillRegistry::load_directory(asset_dir(assets) / "skills"); };

  if (*run) {
    Scenario scenario;
    DeploymentMode mode{};
    try {
      scenario = load_scenario(run_scenario_file);
      mode = run_mode.empty() ? scenario.mode.value_or(DeploymentMode::full_dual)
                              : deployment_mode_from_string(run_mode);
    } catch (const std::exception& e) {
      std::cerr << "scenario error: " << e.what() << "\n";
      return kExitScenario;
    }
    try {
      auto registry = load_registry();
      RunOptions options;
      options.solver = solver_from_string(run_solver);
      Transcript transcript = run_scenario(scenario, mode, registry, options);
      if (!run_out.empty()) write_text_file(run_out, transcript.serialize());
      auto keys = keystore_for(scenario);
      auto report = verify_transcript(transcript.to_json(), &keys, &scenario.social);
      std::size_t effects = 0, denials = 0;
      for (const auto& r : transcript.records()) {
        if (r["kind"] == "effect") ++effects;
        if (r["kind"] == "denial") ++denials;
      }
      std::cout << scenario.scenario_id << " (" << to_string(mode) << "): "
                << transcript.records().size() << " records, " << effects << " effects, "
                << denials << " denials\n";
      for (const auto& v : report.violations) std::cerr << "violation: " << v << "\n";
      return report.ok() ? kExitOk : kExitInvariant;
    } catch (const Error& e) {
      std::cerr << "error: " << e.what() << "\n";
      return e.kind() == ErrorKind::mode_mismatch ? kExitScenario : kExitFailure;
    }
  }

  try {
    if (*verify) {
      json transcript;
      try {
        transcript = read_json_file(verify_file);
      } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitScenario;
      }
      std::optional<Scenario> scenario;
      std::optional<KeyStore> keys;
      if (!verify_scenario.empty()) {
        scenario = load_scenario(verify_scenario);
        keys = keystore_for(*scenario);
      }
      auto report = verify_transcript(transcript, keys ? &*keys : nullptr,
                                      scenario ? &scenario->social : nullptr);
      for (const auto& v : report.violations) std::cout << "violation: " << v << "\n";
      std::cout << report.events_checked << " events checked"
                << (report.tags_checked ? "" : " (tags unchecked: pass --scenario)") << ", "
                << (report.ok() ? "ok" : "FAILED") << "\n";
      return report.ok() ? kExitOk : kExitInvariant;
    }

    if (*place_cmd) {
      DeviceGraph g = load_graph(place_graph);
      TaskDag dag;
      if (!place_dag.empty()) {
        dag = dag_from_json(read_json_file(place_dag));
      } else if (!place_intent.empty()) {
        dag = compile_intent(intent_from_json(read_json_file(place_intent)),
                             load_registry().verb_table());
      } else {
        std::cerr << "place: one of --dag or --intent is required\n";
        return kExitFailure;
      }
      json out;
      if (place_solver == "both") {
        auto best = place_exhaustive(dag, g);
        auto greedy = place_greedy(dag, g);
        out = {{"exhaustive", placement_to_json(best)},
               {"greedy", placement_to_json(greedy)},
               {"optimality_gap", rational_to_json(greedy.total_cost - best.total_cost)}};
      } else {
        auto solver = solver_from_string(place_solver);
        out = {{"solver", to_string(solver)}, {"placement", placement_to_json(place(dag, g, solver))}};
      }
      emit(out, place_out);
      return kExitOk;
    }

    if (*compile) {
      auto dag = compile_intent(intent_from_json(read_json_file(compile_intent_file)),
                                load_registry().verb_table());
      emit(dag_to_json(dag), compile_out);
      return kExitOk;
    }

    if (*check) {
      auto action = action_from_json(read_json_file(check_action));
      auto context = context_from_json(read_json_file(check_context));
      auto config = check_policy.empty() ? default_policy_config()
                                         : policy_config_from_json(read_json_file(check_policy));
      auto social = std::make_shared<SocialGraph>();
      auto keys = std::make_shared<KeyStore>();
      if (!check_topology.empty()) {
        *social = topology_from_json(read_json_file(check_topology)).social;
      }
      PolicyEngine engine(config, keys, social);
      auto decision = evaluate_safe(action, context, engine.hub_layers());
      std::cout << dump_json(decision_to_json(decision));
      return decision.overall ? kExitOk : kExitFailure;
    }

    if (*rules) {
      std::cout << dump_json(audit_rules_to_json(default_audit_rules()));
      return kExitOk;
    }

    if (*next) {
      auto spec = parse_cron(cron_spec);
      SimTime t = parse_iso_time(cron_after);
      for (int i = 0; i < cron_count; ++i) {
        t = next_fire(spec, t);
        std::cout << format_iso_time(t) << "\n";
      }
      return kExitOk;
    }

    if (*list) {
      auto registry = load_registry();
      for (const auto& m : registry.skills()) {
        std::cout << m.name << "@" << m.version << "  " << to_string(m.category) << "  env="
                  << to_string(m.required_env) << "  verb=" << m.verb << "  needs {"
                  << join(m.required_capabilities) << "}\n";
      }
      return kExitOk;
    }

    if (*resolve) {
      auto registry = load_registry();
      const auto* m = registry.find(resolve_name);
      if (!m) {
        std::cerr << "unknown skill " << resolve_name << "\n";
        return kExitFailure;
      }
      std::cout << resolve_skill_node(*m, load_graph(resolve_graph)) << "\n";
      return kExitOk;
    }

    if (*verbs) {
      std::cout << dump_json(verb_table_to_json(load_registry().verb_table()));
      return kExitOk;
    }

    if (*pack) {
      auto record = serialize_template(template_from_json(read_json_file(pack_file)));
      if (pack_out.empty()) {
        std::cout << record << "\n";
      } else {
        write_text_file(pack_out, record + "\n");
      }
      return kExitOk;
    }

    if (*install) {
      auto record = read_text_file(install_file);
      while (!record.empty() && (record.back() == '\n' || record.back() == '\r')) record.pop_back();
      auto bound = instantiate_template(record, load_graph(install_graph), load_registry());
      std::cout << dump_json(bound_assistant_to_json(bound));
      return kExitOk;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
  return kExitOk;
}
