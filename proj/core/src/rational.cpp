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

#include "topoclaw/rational.hpp"

#include <charconv>
#include <limits>

#include "topoclaw/error.hpp"

namespace topoclaw {
namespace {

[[noreturn]] void bad(std::string_view text) {
  throw Error(ErrorKind::parse,
              "malformed rational \"" + std::string(text) + "\"");
}

std::int64_t parse_int(std::string_view text, std::string_view whole) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) bad(whole);
  return value;
}

std::int64_t pow10(int exp, std::string_view whole) {
  std::int64_t out = 1;
  for (int i = 0; i < exp; ++i) {
    if (out > std::numeric_limits<std::int64_t>::max() / 10) bad(whole);
    out *= 10;
  }
  return out;
}

Rational parse_decimal(std::string_view text) {
  std::string_view mantissa = text;
  int exponent = 0;
  if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
    mantissa = text.substr(0, e);
    exponent = static_cast<int>(parse_int(
        text.substr(e + 1).starts_with('+') ? text.substr(e + 2) : text.substr(e + 1),
        text));
  }
  bool negative = false;
  if (!mantissa.empty() && (mantissa.front() == '-' || mantissa.front() == '+')) {
    negative = mantissa.front() == '-';
    mantissa.remove_prefix(1);
  }
  std::string digits;
  int frac_digits = 0;
  bool seen_dot = false;
  for (char c : mantissa) {
    if (c == '.') {
      if (seen_dot) bad(text);
      seen_dot = true;
    } else if (c >= '0' && c <= '9') {
      digits += c;
      if (seen_dot) ++frac_digits;
    } else {
      bad(text);
    }
  }
  if (digits.empty()) bad(text);
  std::int64_t num = parse_int(digits, text);
  int scale = exponent - frac_digits;
  Rational out = scale >= 0 ? Rational(num) * Rational(pow10(scale, text))
                            : Rational(num, pow10(-scale, text));
  return negative ? -out : out;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  if (text.empty()) bad(text);
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    std::int64_t num = parse_int(text.substr(0, slash), text);
    std::int64_t den = parse_int(text.substr(slash + 1), text);
    if (den == 0) bad(text);
    return Rational(num, den);
  }
  return parse_decimal(text);
}

std::string format_rational(const Rational& value) {
  if (value.denominator() == 1) return std::to_string(value.numerator());
  return std::to_string(value.numerator()) + "/" +
         std::to_string(value.denominator());
}

Rational rational_from_json(const nlohmann::json& j) {
  if (j.is_number_integer()) return Rational(j.get<std::int64_t>());
  if (j.is_number()) return parse_rational(j.dump());
  if (j.is_string()) return parse_rational(j.get<std::string>());
  throw Error(ErrorKind::schema, "expected a number or rational string, got " + j.dump());
}

nlohmann::json rational_to_json(const Rational& value) {
  if (value.denominator() == 1) return value.numerator();
  return format_rational(value);
}

}  // namespace topoclaw
