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

#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "topoclaw/verdict.hpp"

namespace topoclaw {

// One shell command within a command line. `args` holds every token after
// the command word; short option clusters such as "-rf" are additionally
// expanded to "-r" and "-f", and redirection targets appear as ">target".
struct CommandSegment {
  std::string command;
  std::vector<std::string> args;
  // Segments joined by "|" share a pipeline index.
  std::size_t pipeline = 0;
};

std::vector<CommandSegment> tokenize_command(std::string_view cmdline);

// A clause matches when every part it specifies matches. Globs use
// fnmatch(3) syntax; a literal '*' is written "\\*".
struct AuditClause {
  // Command-word globs; the segment part applies when this or all_of is set.
  std::vector<std::string> commands;
  // Each group needs at least one argument matching one of its globs.
  std::vector<std::vector<std::string>> all_of;
  // Substrings searched in the command line with whitespace removed.
  std::vector<std::string> line_contains;
  // ECMAScript regexes searched in the whitespace-free command line.
  std::vector<std::string> line_regex;
  // A command in pipe_from piped (directly or later) into one in pipe_to.
  std::vector<std::string> pipe_from;
  std::vector<std::string> pipe_to;
};

struct AuditRule {
  std::string id;
  std::string reason;
  std::vector<AuditClause> match_any;
};

struct AuditRuleset {
  std::string version;
  std::vector<AuditRule> rules;
};

// The shipped 8-rule ruleset (also available as assets/deny_rules.json).
const AuditRuleset& default_audit_rules();

AuditRuleset audit_rules_from_json(const nlohmann::json& j);
nlohmann::json audit_rules_to_json(const AuditRuleset& rules);

// deny(rule.reason) for the first matching rule, allow otherwise. Command
// words match case-sensitively.
Verdict audit_command(std::string_view cmdline,
                      const AuditRuleset& rules = default_audit_rules());

}  // namespace topoclaw
