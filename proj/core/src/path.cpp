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

#include "topoclaw/path.hpp"

#include <vector>

namespace topoclaw {

std::optional<std::string> normalize_path(std::string_view path) {
  if (path.empty() || path.front() != '/') return std::nullopt;
  if (path.find('\0') != std::string_view::npos) return std::nullopt;

  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (pos <= path.size()) {
    std::size_t next = path.find('/', pos);
    if (next == std::string_view::npos) next = path.size();
    std::string_view part = path.substr(pos, next - pos);
    if (part.empty() || part == ".") {
      // skip
    } else if (part == "..") {
      if (!parts.empty()) parts.pop_back();
    } else {
      parts.push_back(part);
    }
    pos = next + 1;
  }

  if (parts.empty()) return std::string("/");
  std::string out;
  for (auto part : parts) {
    out += '/';
    out += part;
  }
  return out;
}

bool is_normalized_absolute(std::string_view path) {
  auto normalized = normalize_path(path);
  return normalized && *normalized == path;
}

bool is_within(std::string_view path, std::string_view root) {
  if (root == "/") return !path.empty() && path.front() == '/';
  if (path.size() < root.size()) return false;
  if (path.substr(0, root.size()) != root) return false;
  return path.size() == root.size() || path[root.size()] == '/';
}

std::optional<std::string> resolve_against(std::string_view root,
                                           std::string_view path) {
  if (path.empty()) return std::nullopt;
  if (path.front() == '/') return normalize_path(path);
  std::string joined(root);
  joined += '/';
  joined += path;
  return normalize_path(joined);
}

std::string relative_to(std::string_view path, std::string_view root) {
  if (path == root) return ".";
  if (root == "/") return std::string(path.substr(1));
  return std::string(path.substr(root.size() + 1));
}

}  // namespace topoclaw
