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

std::string base64_encode(std::string_view bytes);

// Strict RFC 4648 decoding: padding required, no whitespace, and unused
// trailing bits must be zero so every byte string has exactly one encoding.
std::optional<std::string> base64_decode(std::string_view text);

}  // namespace topoclaw
