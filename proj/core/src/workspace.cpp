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

#include "topoclaw/workspace.hpp"

#include "topoclaw/error.hpp"
#include "topoclaw/path.hpp"

namespace topoclaw {

Workspace::Workspace(std::string root) : root_(std::move(root)) {
  if (!is_normalized_absolute(root_)) {
    throw Error(ErrorKind::invalid_argument, "workspace root \"" + root_ + "\" is not normalized");
  }
}

std::optional<std::string> Workspace::key_for(std::string_view path) const {
  auto normal = normalize_path(path);
  if (!normal || !is_within(*normal, root_) || *normal == root_) return std::nullopt;
  return relative_to(*normal, root_);
}

std::optional<std::string> Workspace::read(std::string_view path) const {
  auto key = key_for(path);
  if (!key) return std::nullopt;
  return read_relative(*key);
}

std::vector<std::string> Workspace::list(std::string_view dir) const {
  std::vector<std::string> out;
  auto normal = normalize_path(dir);
  if (!normal || !is_within(*normal, root_)) return out;
  std::string prefix = *normal == root_ ? std::string() : relative_to(*normal, root_) + "/";
  for (auto it = files_.lower_bound(prefix); it != files_.end(); ++it) {
    if (!it->first.starts_with(prefix)) break;
    out.push_back(root_ == "/" ? "/" + it->first : root_ + "/" + it->first);
  }
  return out;
}

void Workspace::write(std::string_view path, std::string content) {
  auto key = key_for(path);
  if (!key) {
    throw Error(ErrorKind::sandbox_denied,
                "write to " + std::string(path) + " escapes workspace " + root_);
  }
  files_[*key] = std::move(content);
}

void Workspace::remove(std::string_view path) {
  if (auto key = key_for(path)) files_.erase(*key);
}

std::optional<std::string> Workspace::read_relative(std::string_view rel) const {
  auto it = files_.find(rel);
  if (it == files_.end()) return std::nullopt;
  return it->second;
}

void Workspace::write_relative(std::string_view rel, std::string content) {
  auto full = rel.empty() || rel.front() == '/' ? std::nullopt : resolve_against(root_, rel);
  auto key = full ? key_for(*full) : std::nullopt;
  if (!key) {
    throw Error(ErrorKind::invalid_argument,
                "\"" + std::string(rel) + "\" is not a path inside " + root_);
  }
  files_[*key] = std::move(content);
}

nlohmann::json Workspace::to_json(std::string_view skip_prefix) const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [path, content] : files_) {
    if (!skip_prefix.empty() && path.starts_with(skip_prefix)) continue;
    j[path] = content;
  }
  return j;
}

}  // namespace topoclaw
