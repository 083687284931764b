// Copyright 2026 The agreelab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "agreelab/scalar.hpp"

#include <cctype>
#include <limits>

#include "agreelab/errors.hpp"

namespace agree {

namespace {

std::int64_t ParseInteger(const std::string& s, const std::string& whole) {
  if (s.empty()) {
    throw Error(ErrorCode::kParseError, "bad rational \"" + whole + "\"");
  }
  std::size_t pos = 0;
  bool negative = false;
  if (s[0] == '-' || s[0] == '+') {
    negative = s[0] == '-';
    pos = 1;
  }
  if (pos == s.size()) {
    throw Error(ErrorCode::kParseError, "bad rational \"" + whole + "\"");
  }
  std::int64_t v = 0;
  for (; pos < s.size(); ++pos) {
    if (!std::isdigit(static_cast<unsigned char>(s[pos]))) {
      throw Error(ErrorCode::kParseError, "bad rational \"" + whole + "\"");
    }
    if (v > (std::numeric_limits<std::int64_t>::max() - 9) / 10) {
      throw Error(ErrorCode::kParseError, "rational too large: " + whole);
    }
    v = v * 10 + (s[pos] - '0');
  }
  return negative ? -v : v;
}

}  // namespace

Rational ParseRational(const std::string& text) {
  const auto slash = text.find('/');
  if (slash != std::string::npos) {
    const std::int64_t num = ParseInteger(text.substr(0, slash), text);
    const std::int64_t den = ParseInteger(text.substr(slash + 1), text);
    if (den == 0) {
      throw Error(ErrorCode::kParseError, "zero denominator in " + text);
    }
    return Rational(num, den);
  }
  const auto dot = text.find('.');
  if (dot == std::string::npos) return Rational(ParseInteger(text, text));
  const std::string frac = text.substr(dot + 1);
  if (frac.size() > 15) {
    throw Error(ErrorCode::kParseError, "too many decimals in " + text);
  }
  std::int64_t den = 1;
  for (std::size_t n = 0; n < frac.size(); ++n) den *= 10;
  std::string digits = text.substr(0, dot) + frac;
  if (digits == "-" || digits == "+" || digits.empty()) {
    throw Error(ErrorCode::kParseError, "bad rational \"" + text + "\"");
  }
  return Rational(ParseInteger(digits, text), den);
}

std::string ToString(const Rational& x) {
  if (x.denominator() == 1) return std::to_string(x.numerator());
  return std::to_string(x.numerator()) + "/" +
         std::to_string(x.denominator());
}

}  // namespace agree
