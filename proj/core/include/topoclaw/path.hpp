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

#include <optional>
#include <string>
#include <string_view>

namespace topoclaw {

// Lexical normalization of an absolute POSIX path: collapses repeated
// separators, resolves "." and "..", strips any trailing separator. ".."
// at the root stays at the root. Returns nullopt for empty, relative or
// NUL-containing input. The filesystem is never consulted.
std::optional<std::string> normalize_path(std::string_view path);

bool is_normalized_absolute(std::string_view path);

// True when `path` equals `root` or lies beneath it. Both must already be
// normalized.
bool is_within(std::string_view path, std::string_view root);

// Joins a relative path onto an absolute root and normalizes the result.
// Absolute `path` values are normalized on their own.
std::optional<std::string> resolve_against(std::string_view root,
                                           std::string_view path);

// `path` relative to `root`; requires is_within(path, root).
std::string relative_to(std::string_view path, std::string_view root);

}  // namespace topoclaw
