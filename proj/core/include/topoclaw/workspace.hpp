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

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace topoclaw {

// In-memory file tree rooted at a node's workspace_root. Keys are
// normalized paths relative to the root.
class Workspace {
 public:
  explicit Workspace(std::string root);

  const std::string& root() const { return root_; }

  // nullopt when the path lies outside the root or no such file exists.
  std::optional<std::string> read(std::string_view path) const;
  // Absolute paths of files at or below `dir`, ascending.
  std::vector<std::string> list(std::string_view dir) const;
  // Throws Error(sandbox_denied) for paths outside the root.
  void write(std::string_view path, std::string content);
  void remove(std::string_view path);

  std::optional<std::string> read_relative(std::string_view rel) const;
  // Throws Error(invalid_argument) unless `rel` stays inside the root.
  void write_relative(std::string_view rel, std::string content);

  const std::map<std::string, std::string, std::less<>>& files() const { return files_; }

  // Relative path -> content, leaving out everything below `skip_prefix`.
  nlohmann::json to_json(std::string_view skip_prefix = {}) const;

 private:
  std::optional<std::string> key_for(std::string_view path) const;

  std::string root_;
  std::map<std::string, std::string, std::less<>> files_;
};

}  // namespace topoclaw
