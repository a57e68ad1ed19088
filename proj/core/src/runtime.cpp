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

#include "topoclaw/runtime.hpp"

#include <algorithm>
#include <sstream>

#include "topoclaw/error.hpp"
#include "topoclaw/path.hpp"
#include "topoclaw/rational.hpp"

namespace topoclaw {

using nlohmann::json;

std::string twin_of(std::string_view user_id) { return std::string(user_id) + ".twin"; }

namespace {

std::vector<std::string> words(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

// Slots from prefs/availability.txt, normalized and in time order.
std::vector<std::string> parse_availability(const std::string& text) {
  std::vector<std::pair<SimTime, std::string>> slots;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) {
    auto w = words(line);
    if (w.empty() || w.front().starts_with('#')) continue;
    SimTime t = parse_iso_time(w.front());
    slots.emplace_back(t, format_iso_time(t));
  }
  std::sort(slots.begin(), slots.end());
  slots.erase(std::unique(slots.begin(), slots.end()), slots.end());
  std::vector<std::string> out;
  for (auto& [t, s] : slots) out.push_back(std::move(s));
  return out;
}

json verdict_summary(const PolicyDecision& d) { return decision_to_json(d); }

IntentScript single_step(std::string intent_id, std::string verb,
                         std::map<std::string, std::string> args) {
  IntentScript script;
  script.intent_id = std::move(intent_id);
  IntentStep step;
  step.id = "step1";
  step.verb = std::move(verb);
  step.args = std::move(args);
  script.steps.push_back(std::move(step));
  return script;
}

}  // namespace

// HandlerContext bound to one node and one acting owner.
class Cluster::Context : public HandlerContext {
 public:
  Context(Cluster& cluster, NodeRuntime& rt, const Identity& owner)
      : cluster_(cluster), rt_(rt), owner_(owner) {}

  const DeviceNode& node() const override { return rt_.node; }
  const Identity& owner() const override { return owner_; }
  std::optional<std::string> read_file(std::string_view path) const override {
    return rt_.workspace.read(path);
  }
  std::vector<std::string> list_files(std::string_view dir) const override {
    return rt_.workspace.list(dir);
  }
  void write_file(std::string_view path, std::string content) override {
    rt_.workspace.write(path, std::move(content));
  }
  void remove_file(std::string_view path) override { rt_.workspace.remove(path); }
  void emit_message(const std::string& space_id, const std::string& text) override {
    cluster_.broadcast_text(owner_.user_id, space_id, text);
  }
  void remember(const std::string& directive, const std::string& content) override {
    cluster_.consolidate(rt_.node.node_id,
                         {cluster_.clock_, ObservationKind::system, content, directive});
  }
  std::vector<std::string> skill_names() const override {
    std::vector<std::string> names;
    for (const auto& s : cluster_.registry_.skills()) names.push_back(s.name);
    return names;
  }

 private:
  Cluster& cluster_;
  NodeRuntime& rt_;
  const Identity& owner_;
};

class Cluster::Sink : public IntentSink {
 public:
  explicit Sink(Cluster& cluster) : cluster_(cluster) {}

  std::vector<ActionOutcome> submit_scheduled(const ScheduledTask& task, SimTime now) override {
    const auto& hub = cluster_.hub_of(task.owner);
    auto& r = cluster_.transcript_.append(now, hub, "wakeup");
    r["task_id"] = task.task_id;
    r["owner"] = task.owner;
    r["cron"] = task.cron;
    r["fired"] = true;
    cluster_.consolidate(hub, {now, ObservationKind::system, "wakeup " + task.task_id, {}});
    SubmitOptions options;
    options.origin = Origin::scheduler;
    return cluster_.submit_intent(task.owner, task.intent, options);
  }

  bool monitor_satisfied(const ScheduledTask& task, const FileExistsMonitor& m) override {
    const auto& hub = cluster_.hub_of(task.owner);
    bool present = cluster_.nodes_.at(hub).workspace.read_relative(m.path).has_value();
    if (!present) {
      auto& r = cluster_.transcript_.append(cluster_.clock_, hub, "wakeup");
      r["task_id"] = task.task_id;
      r["owner"] = task.owner;
      r["cron"] = task.cron;
      r["fired"] = false;
      r["monitor"] = {{"file_exists", m.path}};
    }
    return present;
  }

 private:
  Cluster& cluster_;
};

Cluster::Cluster(const Scenario& scenario, DeploymentMode mode, const SkillRegistry& registry,
                 RunOptions options)
    : scenario_(scenario),
      mode_(mode),
      registry_(registry),
      options_(std::move(options)),
      verbs_(registry.verb_table()),
      keys_(std::make_shared<KeyStore>()),
      social_(std::make_shared<SocialGraph>(scenario.social)),
      transcript_(scenario.scenario_id, std::string(to_string(mode)),
                  std::string(to_string(options_.solver))) {
  check_mode(scenario_, mode_);
  for (const auto& [ref, secret] : scenario_.keys) keys_->add_key(ref, secret);
  for (const auto& u : social_->users) keys_->bind(u);
  engine_ = std::make_unique<PolicyEngine>(scenario_.policy, keys_, social_);
  factory_ = std::make_unique<EventFactory>(*keys_);

  for (const auto& [user, graph] : scenario_.devices) {
    std::string hub;
    for (const auto& id : graph.node_ids()) {
      const auto& n = graph.node(id);
      if (hub.empty() && n.profile.environment_class == EnvironmentClass::pc) hub = id;
      NodeRuntime rt{n, user, Workspace(n.workspace_root), MemoryState(scenario_.memory_capacity),
                     {}};
      if (auto it = scenario_.workspaces.find(id); it != scenario_.workspaces.end()) {
        for (const auto& [rel, content] : it->second) rt.workspace.write_relative(rel, content);
      }
      nodes_.emplace(id, std::move(rt));
    }
    if (hub.empty()) hub = graph.node_ids().front();
    hubs_[user] = hub;
    twins_[user] = {twin_of(user), hub};
  }
}

Cluster::~Cluster() = default;

const std::string& Cluster::hub_of(const std::string& user) const {
  auto it = hubs_.find(user);
  if (it == hubs_.end()) throw Error(ErrorKind::unknown_id, "user " + user + " has no devices");
  return it->second;
}

const NodeRuntime& Cluster::node(const std::string& node_id) const {
  auto it = nodes_.find(node_id);
  if (it == nodes_.end()) throw Error(ErrorKind::unknown_id, "unknown node " + node_id);
  return it->second;
}

std::vector<std::string> Cluster::node_ids() const {
  std::vector<std::string> ids;
  for (const auto& [id, rt] : nodes_) ids.push_back(id);
  return ids;
}

void Cluster::consolidate(const std::string& node_id, Observation o) {
  auto& rt = nodes_.at(node_id);
  rt.memory = topoclaw::consolidate(std::move(rt.memory), o);
  rt.workspace.write_relative(kLogFile, serialize_log(rt.memory.m_log));
  rt.workspace.write_relative(kShortFile, serialize_short(rt.memory));
  rt.workspace.write_relative(kLongFile, serialize_long(rt.memory.m_long));
  if (options_.on_consolidate) options_.on_consolidate(node_id, rt.memory);
}

void Cluster::run_stimulus(const Stimulus& s) {
  clock_ = std::max(clock_, s.at);
  rounds_ = 0;
  auto& r = transcript_.append(clock_, hubs_.contains(s.actor) ? hub_of(s.actor) : "", "stimulus");
  r["actor"] = s.actor;
  r["stimulus_kind"] = to_string(s.kind);
  switch (s.kind) {
    case StimulusKind::intent:
      r["intent"] = intent_to_json(s.intent);
      if (s.target_user) {
        r["target_user"] = *s.target_user;
        r["channel"] = *s.channel;
        request_intent(s.actor, *s.target_user, *s.channel, s.intent);
      } else {
        consolidate(hub_of(s.actor),
                    {clock_, ObservationKind::user_msg, "intent " + s.intent.intent_id, {}});
        SubmitOptions options;
        options.solver = s.solver;
        submit_intent(s.actor, s.intent, options);
      }
      break;
    case StimulusKind::message:
      r["space"] = s.space;
      r["text"] = s.text;
      consolidate(hub_of(s.actor),
                  {clock_, ObservationKind::user_msg, "to " + s.space + ": " + s.text, {}});
      post_message(s.actor, s.space, s.text);
      break;
    case StimulusKind::clock_advance:
      r["to"] = s.to;
      advance_clock(s.to);
      break;
  }
  drain();
}

std::vector<ActionOutcome> Cluster::submit_intent(const std::string& user,
                                                  const IntentScript& script,
                                                  const SubmitOptions& options) {
  const std::string prefix = "sub-" + std::to_string(++submissions_);
  const std::string& hub = hub_of(user);
  const Identity& owner = social_->user(user);
  auto fail = [&](const std::string& stage, const std::string& message) {
    auto& r = transcript_.append(clock_, hub, "error", prefix);
    r["stage"] = stage;
    r["message"] = message;
    ActionOutcome o;
    o.ref = prefix;
    o.status = OutcomeStatus::error;
    o.detail = stage + ": " + message;
    return std::vector<ActionOutcome>{o};
  };

  TaskDag dag;
  try {
    dag = compile_intent(script, verbs_);
  } catch (const Error& e) {
    return fail("compile", e.what());
  }
  {
    auto& r = transcript_.append(clock_, hub, "compile", prefix);
    r["intent_id"] = script.intent_id;
    r["owner"] = user;
    r["origin"] = to_string(options.origin);
    if (options.requester) r["requester"] = options.requester->user_id;
    if (options.channel) r["channel"] = *options.channel;
    r["dag"] = dag_to_json(dag);
  }

  const DeviceGraph& graph = scenario_.devices.at(user);
  Solver solver = options.solver.value_or(options_.solver);
  Placement placement;
  try {
    placement = place(dag, graph, solver);
  } catch (const Error& e) {
    return fail("placement", e.what());
  }
  {
    auto& r = transcript_.append(clock_, hub, "placement", prefix);
    r["solver"] = to_string(solver);
    r["assignment"] = placement.assignment;
    r["total_cost"] = rational_to_json(placement.total_cost);
  }

  // Relative file targets resolve against the executing node's workspace.
  for (auto& a : dag.actions) {
    auto kind = a.effect.kind;
    if ((kind == EffectKind::read || kind == EffectKind::write) && !a.effect.target.empty() &&
        a.effect.target.front() != '/') {
      const auto& root = graph.node(placement.assignment.at(a.action_id)).workspace_root;
      if (auto bound = resolve_against(root, a.effect.target)) a.effect.target = *bound;
    }
  }

  std::vector<ActionOutcome> outcomes;
  std::set<std::string> blocked;
  for (const auto& id : topo_order(dag)) {
    const ActionSpec& a = dag.action(id);
    const std::string& node_id = placement.assignment.at(id);
    const std::string ref = prefix + "/" + id;
    ActionOutcome outcome;
    outcome.ref = ref;
    outcome.action_id = id;
    outcome.node_id = node_id;

    std::string blocker;
    for (const auto& d : dag.deps) {
      if (d.to_action == id && blocked.contains(d.from_action)) {
        blocker = d.from_action;
        break;
      }
    }
    if (!blocker.empty()) {
      auto& r = transcript_.append(clock_, hub, "skip", ref);
      r["action_id"] = id;
      r["reason"] = "predecessor " + blocker + " did not run";
      outcome.status = OutcomeStatus::skipped;
      outcome.detail = "predecessor " + blocker + " did not run";
      blocked.insert(id);
      outcomes.push_back(std::move(outcome));
      continue;
    }

    for (const auto& d : dag.deps) {
      if (d.to_action != id || is_zero(d.payload_units)) continue;
      const auto& src = placement.assignment.at(d.from_action);
      if (src == node_id) continue;
      auto& r = transcript_.append(clock_, src, "transfer", ref);
      r["from_action"] = d.from_action;
      r["to_action"] = d.to_action;
      r["src_node"] = src;
      r["dst_node"] = node_id;
      r["payload_units"] = rational_to_json(d.payload_units);
      r["cost"] = rational_to_json(d.payload_units * *shortest_path_cost(graph, src, node_id));
    }

    AttributedEvent root = factory_->attribute(canonical_action_bytes(a), owner, twin_of(user),
                                               Role::owner, std::string(kSystemChannel));
    transcript_.append(clock_, hub, "event", ref)["event"] = event_to_json(root);
    AttributedEvent sub =
        factory_->delegate(root, twin_of(user) + "@" + node_id, system_channel(node_id));
    transcript_.append(clock_, hub, "event", ref)["event"] = event_to_json(sub);

    ActionContext ctx;
    ctx.origin = options.origin;
    ctx.owner = user;
    ctx.requester = options.requester;
    ctx.node_id = node_id;
    ctx.channel_id = options.channel;
    ctx.workspace_root = graph.node(node_id).workspace_root;
    ctx.event = sub;

    auto record_decision = [&](const std::string& pep, const std::string& at,
                               const PolicyDecision& d) {
      auto& r = transcript_.append(clock_, at, "decision", ref);
      r["pep"] = pep;
      r["action_id"] = id;
      r["decision"] = verdict_summary(d);
    };
    auto record_denial = [&](const std::string& pep, const std::string& at,
                             const PolicyDecision& d) {
      const auto* first = d.first_denial();
      auto& r = transcript_.append(clock_, at, "denial", ref);
      r["action_id"] = id;
      r["pep"] = pep;
      r["layer"] = first ? first->first : "";
      r["reason"] = first ? first->second.reason : "";
      outcome.status = OutcomeStatus::denied;
      outcome.detail = pep + "/" + (first ? first->first + ": " + first->second.reason : "");
      consolidate(hub, {clock_, ObservationKind::action_result,
                        id + " (" + a.verb + ") denied at " + outcome.detail, {}});
      blocked.insert(id);
    };

    PolicyDecision hub_decision = evaluate_safe(a, ctx, engine_->hub_layers());
    record_decision("hub", hub, hub_decision);
    outcome.hub = hub_decision;
    if (!hub_decision.overall) {
      record_denial("hub", hub, hub_decision);
      outcomes.push_back(std::move(outcome));
      continue;
    }

    Envelope env{sub, hub, node_id, system_channel(node_id), delivery_ids_.next()};
    transcript_.append(clock_, node_id, "delivery", ref)["envelope"] = envelope_to_json(env);
    auto& rt = nodes_.at(node_id);
    PolicyDecision edge_decision =
        edge_verify(rt.node, a, ctx, engine_->edge_layers(node_id), env, *keys_);
    record_decision("edge", node_id, edge_decision);
    outcome.edge = edge_decision;
    if (!edge_decision.overall) {
      record_denial("edge", node_id, edge_decision);
      outcomes.push_back(std::move(outcome));
      continue;
    }

    const auto* skill = registry_.find_by_verb(a.verb);
    const BuiltinHandler* handler = skill ? find_handler(skill->entry) : find_handler("builtin.noop");
    try {
      Context hctx(*this, rt, owner);
      HandlerResult result = handler->run(a, hctx);
      if (a.effect.kind != EffectKind::noop) {
        auto& r = transcript_.append(clock_, node_id, "effect", ref);
        r["action_id"] = id;
        r["verb"] = a.verb;
        r["effect"] = {{"kind", to_string(a.effect.kind)}, {"target", a.effect.target}};
        r["result"] = result.summary;
      }
      outcome.status = OutcomeStatus::executed;
      outcome.detail = result.summary;
      consolidate(node_id, {clock_, ObservationKind::action_result,
                            id + " (" + a.verb + ") on " + node_id + ": " + result.summary, {}});
    } catch (const std::exception& e) {
      auto& r = transcript_.append(clock_, node_id, "error", ref);
      r["stage"] = "execute";
      r["action_id"] = id;
      r["message"] = e.what();
      outcome.status = OutcomeStatus::error;
      outcome.detail = e.what();
      blocked.insert(id);
    }
    outcomes.push_back(std::move(outcome));
  }
  return outcomes;
}

void Cluster::request_intent(const std::string& requester, const std::string& target_user,
                             const std::string& channel, const IntentScript& script) {
  const auto& src = hub_of(requester);
  const auto& dst = hub_of(target_user);
  if (!social_->has_channel(channel)) {
    auto& r = transcript_.append(clock_, src, "error");
    r["stage"] = "route";
    r["message"] = "unknown channel " + channel;
    return;
  }
  AttributedEvent e = factory_->attribute(intent_to_json(script).dump(), social_->user(requester),
                                          twin_of(requester), Role::owner, channel);
  transcript_.append(clock_, src, "event")["event"] = event_to_json(e);
  deliver({e, src, dst, channel, delivery_ids_.next()}, true);
}

std::vector<ActionOutcome> Cluster::post_message(const std::string& user, const std::string& space,
                                                 const std::string& text) {
  std::string body = text;
  auto w = words(text);
  if (w.size() == 2 && w[0] == "PROPOSE") body += availability_line(user);
  return submit_intent(user, single_step("post-" + space, "send_group_msg",
                                         {{"space", space}, {"text", body}}));
}

std::string Cluster::availability_line(const std::string& user) const {
  auto text = nodes_.at(hub_of(user)).workspace.read_relative("prefs/availability.txt");
  std::string out;
  if (text) {
    for (const auto& s : parse_availability(*text)) out += " " + s;
  }
  return out;
}

void Cluster::broadcast_text(const std::string& user, const std::string& space,
                             const std::string& text) {
  const SharedSpace* s = social_->find_space(space);
  if (!s) throw Error(ErrorKind::unknown_id, "unknown space " + space);
  AttributedEvent e =
      factory_->attribute(text, social_->user(user), twin_of(user), Role::owner, space);
  transcript_.append(clock_, hub_of(user), "event")["event"] = event_to_json(e);
  for (auto& env : broadcast(*s, e, *social_, twins_, *keys_, delivery_ids_)) deliver(env, false);
}

void Cluster::deliver(const Envelope& env, bool is_request) {
  transcript_.append(clock_, env.dst_node, "delivery")["envelope"] = envelope_to_json(env);
  nodes_.at(env.dst_node).inbox.push_back({env, is_request});
}

void Cluster::drain() {
  while (true) {
    NodeRuntime* next = nullptr;
    for (auto& [id, rt] : nodes_) {
      if (!rt.inbox.empty()) {
        next = &rt;
        break;
      }
    }
    if (!next) return;
    if (rounds_ >= kMaxMessageRounds) {
      std::size_t dropped = 0;
      for (auto& [id, rt] : nodes_) {
        dropped += rt.inbox.size();
        rt.inbox.clear();
      }
      auto& r = transcript_.append(clock_, "", "error");
      r["stage"] = "deliver";
      r["message"] = "message round limit reached; dropped " + std::to_string(dropped) +
                     " deliveries";
      return;
    }
    ++rounds_;
    auto item = std::move(next->inbox.front());
    next->inbox.pop_front();
    if (auto v = verify_attribution(item.envelope.event, *keys_); !v) {
      auto& r = transcript_.append(clock_, next->node.node_id, "error");
      r["stage"] = "deliver";
      r["message"] = "rejected " + item.envelope.delivery_id + ": " +
                     std::string(to_string(v.reason));
      continue;
    }
    if (item.is_request) {
      handle_request(*next, item.envelope);
    } else {
      handle_message(*next, item.envelope);
    }
  }
}

void Cluster::handle_request(NodeRuntime& rt, const Envelope& env) {
  const auto& requester = env.event.human_id;
  IntentScript script;
  try {
    script = intent_from_json(json::parse(env.event.payload_m));
  } catch (const std::exception& e) {
    auto& r = transcript_.append(clock_, rt.node.node_id, "error");
    r["stage"] = "deliver";
    r["message"] = std::string("malformed request: ") + e.what();
    return;
  }
  consolidate(rt.node.node_id, {clock_, ObservationKind::twin_msg,
                                "request from " + requester + " over " + env.channel_id +
                                    ": intent " + script.intent_id,
                                {}});
  SubmitOptions options;
  options.origin = Origin::external;
  options.requester = social_->user(requester);
  options.channel = env.channel_id;
  submit_intent(rt.owner, script, options);
}

void Cluster::handle_message(NodeRuntime& rt, const Envelope& env) {
  const std::string& me = rt.owner;
  const std::string& sender = env.event.human_id;
  const std::string& space = env.channel_id;
  const std::string& text = env.event.payload_m;
  consolidate(rt.node.node_id,
              {clock_, ObservationKind::twin_msg, sender + " in " + space + ": " + text, {}});

  auto w = words(text);
  if (w.size() < 2) return;
  const std::string& verb = w[0];
  const std::string& topic = w[1];
  auto key = std::make_pair(space, topic);
  if (agreed_.contains(key)) return;

  std::vector<std::string> mine;
  if (auto prefs = rt.workspace.read_relative("prefs/availability.txt")) {
    try {
      mine = parse_availability(*prefs);
    } catch (const Error& e) {
      auto& r = transcript_.append(clock_, rt.node.node_id, "error");
      r["stage"] = "negotiate";
      r["message"] = std::string("prefs/availability.txt: ") + e.what();
      return;
    }
  }
  auto normalize = [](const std::string& slot) -> std::optional<std::string> {
    try {
      return format_iso_time(parse_iso_time(slot));
    } catch (const Error&) {
      return std::nullopt;
    }
  };

  SubmitOptions external;
  external.origin = Origin::external;
  external.requester = social_->user(sender);
  external.channel = space;
  auto reply = [&](const std::string& body) {
    submit_intent(me, single_step("reply-" + topic, "send_group_msg",
                                  {{"space", space}, {"text", body}}),
                  external);
  };
  auto record_meeting = [&](const std::string& slot, const std::string& with) {
    return submit_intent(me, single_step("meeting-" + topic, "manage_files",
                                         {{"path", "meetings/" + topic + ".txt"},
                                          {"content", slot + " with " + with + "\n"}}),
                         external);
  };

  if (verb == "PROPOSE" || verb == "COUNTER") {
    std::vector<std::pair<SimTime, std::string>> common;
    for (std::size_t i = 2; i < w.size(); ++i) {
      auto slot = normalize(w[i]);
      if (slot && std::find(mine.begin(), mine.end(), *slot) != mine.end()) {
        common.emplace_back(parse_iso_time(*slot), *slot);
      }
    }
    if (!common.empty()) {
      reply("ACCEPT " + topic + " " + std::min_element(common.begin(), common.end())->second);
    } else if (verb == "PROPOSE" && !mine.empty()) {
      std::string counter = "COUNTER " + topic;
      for (const auto& s : mine) counter += " " + s;
      reply(counter);
    } else {
      reply("DECLINE " + topic);
    }
  } else if (verb == "ACCEPT" && w.size() >= 3) {
    accepts_[key] = env.event;
    auto slot = normalize(w[2]);
    if (slot && std::find(mine.begin(), mine.end(), *slot) != mine.end()) {
      auto booked = record_meeting(*slot, sender);
      bool ok = std::all_of(booked.begin(), booked.end(), [](const ActionOutcome& o) {
        return o.status == OutcomeStatus::executed;
      });
      reply((ok ? "CONFIRM " : "DECLINE ") + topic + (ok ? " " + *slot : ""));
    } else {
      reply("DECLINE " + topic);
    }
  } else if (verb == "CONFIRM" && w.size() >= 3) {
    auto slot = normalize(w[2]);
    auto accepted = accepts_.find(key);
    if (!slot || accepted == accepts_.end()) return;
    record_meeting(*slot, sender);
    agreed_.insert(key);
    std::vector<std::string> parties = {sender, me};
    std::sort(parties.begin(), parties.end());
    auto& r = transcript_.append(clock_, rt.node.node_id, "agreement");
    r["space"] = space;
    r["topic"] = topic;
    r["slot"] = *slot;
    r["parties"] = parties;
    r["accepted_by"] = accepted->second.human_id;
    r["confirmed_by"] = sender;
    r["events"] = json::array({event_to_json(accepted->second), event_to_json(env.event)});
  }
}

std::vector<ScheduledTask> Cluster::load_schedules() {
  std::vector<ScheduledTask> all;
  for (const auto& [user, hub] : hubs_) {
    auto text = nodes_.at(hub).workspace.read_relative("schedule.json");
    if (!text) continue;
    try {
      for (auto& t : schedule_from_json(json::parse(*text))) {
        if (t.owner != user) {
          auto& r = transcript_.append(clock_, hub, "error");
          r["stage"] = "schedule";
          r["message"] = "task " + t.task_id + " names owner " + t.owner + " in " + user +
                         "'s workspace";
          continue;
        }
        all.push_back(std::move(t));
      }
    } catch (const std::exception& e) {
      auto& r = transcript_.append(clock_, hub, "error");
      r["stage"] = "schedule";
      r["message"] = e.what();
    }
  }
  return all;
}

std::vector<TickOutcome> Cluster::advance_clock(SimTime to) {
  std::vector<TickOutcome> out;
  Sink sink(*this);
  while (true) {
    auto tasks = load_schedules();
    auto next = next_wakeup(tasks, clock_);
    if (!next || *next > to) break;
    clock_ = *next;
    for (auto& t : tick(clock_, tasks, sink)) out.push_back(std::move(t));
    drain();
  }
  clock_ = std::max(clock_, to);
  return out;
}

Transcript Cluster::transcript() const {
  Transcript t = transcript_;
  json workspaces = json::object();
  json memory = json::object();
  for (const auto& [id, rt] : nodes_) {
    workspaces[id] = rt.workspace.to_json("memory/");
    memory[id] = memory_to_json(rt.memory);
  }
  t.set_workspaces(std::move(workspaces));
  t.set_memory(std::move(memory));
  return t;
}

Transcript run_scenario(const Scenario& s, DeploymentMode mode, const SkillRegistry& registry,
                        RunOptions options) {
  Cluster cluster(s, mode, registry, std::move(options));
  for (const auto& stimulus : s.script) cluster.run_stimulus(stimulus);
  return cluster.transcript();
}

}  // namespace topoclaw
