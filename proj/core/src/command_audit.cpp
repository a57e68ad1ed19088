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

#include "topoclaw/command_audit.hpp"

#include <fnmatch.h>

#include <algorithm>
#include <cctype>
#include <regex>

#include "json_reader.hpp"
#include "topoclaw/error.hpp"

namespace topoclaw {

using nlohmann::json;

namespace {

constexpr const char* kDefaultRules = R"json({
  "version": "1",
  "rules": [
    {"id": "recursive_root_deletion", "reason": "recursive root deletion",
     "match_any": [
       {"commands": ["rm"],
        "all_of": [["-r", "-R", "--recursive"], ["/", "/\\*", "/.", "/.."]]}
     ]},
    {"id": "privilege_escalation", "reason": "privilege escalation",
     "match_any": [
       {"commands": ["sudo", "su", "doas", "pkexec", "runas"]}
     ]},
    {"id": "raw_device_write", "reason": "raw device write",
     "match_any": [
       {"commands": ["dd"],
        "all_of": [["of=/dev/sd*", "of=/dev/hd*", "of=/dev/vd*", "of=/dev/nvme*",
                    "of=/dev/mmcblk*", "of=/dev/disk*"]]},
       {"all_of": [[">/dev/sd*", ">/dev/hd*", ">/dev/vd*", ">/dev/nvme*",
                    ">/dev/mmcblk*", ">/dev/disk*"]]},
       {"commands": ["mkfs", "mkfs.*", "wipefs"]}
     ]},
    {"id": "fork_bomb", "reason": "fork bomb",
     "match_any": [
       {"line_regex": ["([A-Za-z_][A-Za-z0-9_]*|:)\\(\\)\\{\\1\\|\\1&\\};?\\1"]}
     ]},
    {"id": "remote_script_pipe", "reason": "remote script piped to a shell",
     "match_any": [
       {"pipe_from": ["curl", "wget", "fetch"],
        "pipe_to": ["sh", "bash", "zsh", "dash", "ksh", "python", "python3", "perl"]}
     ]},
    {"id": "system_directory_write", "reason": "system directory write",
     "match_any": [
       {"all_of": [[">/etc", ">/etc/*", ">/usr/*", ">/bin/*", ">/sbin/*", ">/boot/*",
                    ">/lib/*", ">/lib64/*", ">/sys/*", ">/proc/*"]]},
       {"commands": ["tee", "cp", "mv", "install", "ln", "touch", "truncate"],
        "all_of": [["/etc", "/etc/*", "/usr/*", "/bin/*", "/sbin/*", "/boot/*", "/lib/*",
                    "/lib64/*", "/sys/*"]]}
     ]},
    {"id": "history_truncation", "reason": "shell history truncation",
     "match_any": [
       {"commands": ["history"], "all_of": [["-c"]]},
       {"commands": ["rm", "truncate", "shred", "unlink"],
        "all_of": [["*_history", "*/.history"]]},
       {"all_of": [[">*_history", ">*/.history"]]},
       {"commands": ["unset"], "all_of": [["HISTFILE"]]},
       {"commands": ["export"], "all_of": [["HISTFILE=/dev/null", "HISTSIZE=0"]]}
     ]},
    {"id": "root_permission_broadening", "reason": "permission broadening on root",
     "match_any": [
       {"commands": ["chmod", "chown", "chgrp", "setfacl"], "all_of": [["/", "/\\*"]]}
     ]}
  ]
})json";

bool glob_match(const std::string& pattern, const std::string& text) {
  return ::fnmatch(pattern.c_str(), text.c_str(), 0) == 0;
}

bool any_glob(const std::vector<std::string>& patterns, const std::string& text) {
  return std::any_of(patterns.begin(), patterns.end(),
                     [&](const std::string& p) { return glob_match(p, text); });
}

bool is_assignment(const std::string& token) {
  auto eq = token.find('=');
  if (eq == std::string::npos || eq == 0) return false;
  if (!(std::isalpha(static_cast<unsigned char>(token[0])) || token[0] == '_')) return false;
  return std::all_of(token.begin(), token.begin() + static_cast<std::ptrdiff_t>(eq),
                     [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; });
}

bool is_short_cluster(const std::string& token) {
  if (token.size() <= 2 || token[0] != '-' || token[1] == '-') return false;
  return std::all_of(token.begin() + 1, token.end(),
                     [](char c) { return std::isalpha(static_cast<unsigned char>(c)); });
}

struct RawToken {
  std::string text;
  bool redirect_target = false;
};

class Tokenizer {
 public:
  std::vector<CommandSegment> run(std::string_view line) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      char c = line[i];
      if (quote_ == '\'') {
        if (c == '\'') quote_ = 0; else current_ += c;
        continue;
      }
      if (quote_ == '"') {
        if (c == '"') {
          quote_ = 0;
        } else if (c == '\\' && i + 1 < line.size()) {
          current_ += line[++i];
        } else {
          current_ += c;
        }
        continue;
      }
      switch (c) {
        case '\'':
        case '"':
          quote_ = c;
          has_token_ = true;
          break;
        case '\\':
          if (i + 1 < line.size()) current_ += line[++i];
          has_token_ = true;
          break;
        case ' ':
        case '\t':
        case '\n':
          end_token();
          break;
        case ';':
          end_segment(true);
          break;
        case '|':
          if (i + 1 < line.size() && line[i + 1] == '|') {
            ++i;
            end_segment(true);
          } else {
            end_segment(false);
          }
          break;
        case '&':
          if (i + 1 < line.size() && line[i + 1] == '&') {
            ++i;
            end_segment(true);
          } else if (i + 1 < line.size() && line[i + 1] == '>') {
            // "&>" redirects both streams; the next '>' is handled below.
            end_token();
          } else {
            end_segment(true);
          }
          break;
        case '>':
        case '<': {
          if (has_token_ && std::all_of(current_.begin(), current_.end(),
                                        [](char d) { return std::isdigit(static_cast<unsigned char>(d)); })) {
            current_.clear();
            has_token_ = false;
          }
          end_token();
          if (i + 1 < line.size() && line[i + 1] == c) ++i;
          if (i + 1 < line.size() && line[i + 1] == '&') {
            // fd duplication such as "2>&1"
            ++i;
            while (i + 1 < line.size() && std::isdigit(static_cast<unsigned char>(line[i + 1]))) ++i;
            break;
          }
          pending_redirect_ = c == '>' ? 1 : 2;
          break;
        }
        default:
          current_ += c;
          has_token_ = true;
      }
    }
    end_segment(true);
    return std::move(segments_);
  }

 private:
  void end_token() {
    if (!has_token_) return;
    tokens_.push_back({current_, pending_redirect_ != 0});
    redirect_kind_.push_back(pending_redirect_);
    pending_redirect_ = 0;
    current_.clear();
    has_token_ = false;
  }

  void end_segment(bool new_pipeline) {
    end_token();
    if (!tokens_.empty()) {
      CommandSegment seg;
      seg.pipeline = pipeline_;
      bool have_command = false;
      for (std::size_t k = 0; k < tokens_.size(); ++k) {
        const auto& tok = tokens_[k];
        if (tok.redirect_target) {
          if (redirect_kind_[k] == 1) seg.args.push_back(">" + tok.text);
          continue;
        }
        if (!have_command) {
          if (is_assignment(tok.text)) continue;
          seg.command = tok.text;
          have_command = true;
          continue;
        }
        seg.args.push_back(tok.text);
        if (is_short_cluster(tok.text)) {
          for (std::size_t m = 1; m < tok.text.size(); ++m) {
            seg.args.push_back(std::string("-") + tok.text[m]);
          }
        }
      }
      segments_.push_back(std::move(seg));
    }
    tokens_.clear();
    redirect_kind_.clear();
    if (new_pipeline) ++pipeline_;
  }

  std::vector<CommandSegment> segments_;
  std::vector<RawToken> tokens_;
  std::vector<int> redirect_kind_;
  std::string current_;
  bool has_token_ = false;
  char quote_ = 0;
  int pending_redirect_ = 0;
  std::size_t pipeline_ = 0;
};

bool segment_part_matches(const AuditClause& clause, const CommandSegment& seg) {
  if (!clause.commands.empty() && !any_glob(clause.commands, seg.command)) return false;
  for (const auto& group : clause.all_of) {
    bool hit = std::any_of(seg.args.begin(), seg.args.end(),
                           [&](const std::string& arg) { return any_glob(group, arg); });
    if (!hit) return false;
  }
  return true;
}

bool clause_matches(const AuditClause& clause, const std::vector<CommandSegment>& segs,
                    const std::string& squeezed) {
  if (!clause.commands.empty() || !clause.all_of.empty()) {
    bool hit = std::any_of(segs.begin(), segs.end(), [&](const CommandSegment& s) {
      return segment_part_matches(clause, s);
    });
    if (!hit) return false;
  }
  if (!clause.line_contains.empty()) {
    bool hit = std::any_of(clause.line_contains.begin(), clause.line_contains.end(),
                           [&](const std::string& s) { return squeezed.find(s) != std::string::npos; });
    if (!hit) return false;
  }
  if (!clause.line_regex.empty()) {
    bool hit = std::any_of(clause.line_regex.begin(), clause.line_regex.end(),
                           [&](const std::string& r) {
                             return std::regex_search(squeezed, std::regex(r));
                           });
    if (!hit) return false;
  }
  if (!clause.pipe_from.empty() || !clause.pipe_to.empty()) {
    bool hit = false;
    for (std::size_t i = 0; i < segs.size() && !hit; ++i) {
      if (!any_glob(clause.pipe_from, segs[i].command)) continue;
      for (std::size_t j = i + 1; j < segs.size(); ++j) {
        if (segs[j].pipeline != segs[i].pipeline) break;
        if (any_glob(clause.pipe_to, segs[j].command)) {
          hit = true;
          break;
        }
      }
    }
    if (!hit) return false;
  }
  return true;
}

AuditClause clause_from_json(const json& j) {
  detail::ObjectReader r(j, "audit clause");
  AuditClause c;
  c.commands = r.string_list_or_empty("commands");
  if (const auto* groups = r.optional("all_of")) {
    if (!groups->is_array()) throw Error(ErrorKind::schema, "\"all_of\" must be an array");
    for (const auto& g : *groups) {
      if (!g.is_array() || g.empty()) {
        throw Error(ErrorKind::schema, "\"all_of\" groups must be non-empty arrays");
      }
      c.all_of.push_back(g.get<std::vector<std::string>>());
    }
  }
  c.line_contains = r.string_list_or_empty("line_contains");
  c.line_regex = r.string_list_or_empty("line_regex");
  for (const auto& re : c.line_regex) {
    try {
      std::regex compiled(re);
    } catch (const std::regex_error&) {
      throw Error(ErrorKind::schema, "invalid line_regex \"" + re + "\"");
    }
  }
  c.pipe_from = r.string_list_or_empty("pipe_from");
  c.pipe_to = r.string_list_or_empty("pipe_to");
  if (c.pipe_from.empty() != c.pipe_to.empty()) {
    throw Error(ErrorKind::schema, "pipe_from and pipe_to must be given together");
  }
  r.finish();
  if (c.commands.empty() && c.all_of.empty() && c.line_contains.empty() &&
      c.line_regex.empty() && c.pipe_from.empty()) {
    throw Error(ErrorKind::schema, "empty audit clause");
  }
  return c;
}

json clause_to_json(const AuditClause& c) {
  json j = json::object();
  if (!c.commands.empty()) j["commands"] = c.commands;
  if (!c.all_of.empty()) j["all_of"] = c.all_of;
  if (!c.line_contains.empty()) j["line_contains"] = c.line_contains;
  if (!c.line_regex.empty()) j["line_regex"] = c.line_regex;
  if (!c.pipe_from.empty()) j["pipe_from"] = c.pipe_from;
  if (!c.pipe_to.empty()) j["pipe_to"] = c.pipe_to;
  return j;
}

}  // namespace

std::vector<CommandSegment> tokenize_command(std::string_view cmdline) {
  return Tokenizer{}.run(cmdline);
}

const AuditRuleset& default_audit_rules() {
  static const AuditRuleset rules = audit_rules_from_json(json::parse(kDefaultRules));
  return rules;
}

AuditRuleset audit_rules_from_json(const json& j) {
  detail::ObjectReader r(j, "deny rules");
  AuditRuleset rules;
  rules.version = r.string("version");
  const auto& list = r.required("rules");
  if (!list.is_array()) throw Error(ErrorKind::schema, "\"rules\" must be an array");
  for (const auto& item : list) {
    detail::ObjectReader rr(item, "deny rule");
    AuditRule rule;
    rule.id = rr.string("id");
    rule.reason = rr.string("reason");
    const auto& clauses = rr.required("match_any");
    if (!clauses.is_array() || clauses.empty()) {
      throw Error(ErrorKind::schema, "rule " + rule.id + " needs a non-empty match_any");
    }
    for (const auto& c : clauses) rule.match_any.push_back(clause_from_json(c));
    rr.finish();
    rules.rules.push_back(std::move(rule));
  }
  r.finish();
  return rules;
}

json audit_rules_to_json(const AuditRuleset& rules) {
  json list = json::array();
  for (const auto& rule : rules.rules) {
    json clauses = json::array();
    for (const auto& c : rule.match_any) clauses.push_back(clause_to_json(c));
    list.push_back({{"id", rule.id}, {"reason", rule.reason}, {"match_any", clauses}});
  }
  return {{"version", rules.version}, {"rules", list}};
}

Verdict audit_command(std::string_view cmdline, const AuditRuleset& rules) {
  const auto segments = tokenize_command(cmdline);
  std::string squeezed;
  for (char c : cmdline) {
    if (!std::isspace(static_cast<unsigned char>(c))) squeezed += c;
  }
  for (const auto& rule : rules.rules) {
    for (const auto& clause : rule.match_any) {
      if (clause_matches(clause, segments, squeezed)) {
        return Verdict::denied(rule.reason).with("rule", rule.id);
      }
    }
  }
  return Verdict::allowed();
}

}  // namespace topoclaw
