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

#include <cstdint>
#include <string>
#include <string_view>

#include <boost/rational.hpp>
#include <nlohmann/json.hpp>

namespace topoclaw {

// Exact arithmetic for payload sizes and transfer costs so that optimality
// comparisons never depend on floating-point rounding.
using Rational = boost::rational<std::int64_t>;

// Boost's mixed rational/int comparisons recurse forever under C++20's
// rewritten operators, so sign tests go through the numerator.
inline bool is_zero(const Rational& r) { return r.numerator() == 0; }
inline bool is_negative(const Rational& r) { return r.numerator() < 0; }

// Accepts "3", "-2", "3/4", "0.125" and "1e-3" style decimal literals.
Rational parse_rational(std::string_view text);

// "3" for integral values, "3/4" otherwise.
std::string format_rational(const Rational& value);

// JSON integers and numbers map to exact rationals through their shortest
// decimal rendering; strings go through parse_rational.
Rational rational_from_json(const nlohmann::json& j);

// Integral values become JSON integers, everything else a "p/q" string.
nlohmann::json rational_to_json(const Rational& value);

}  // namespace topoclaw
