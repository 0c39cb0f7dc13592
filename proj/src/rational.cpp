// Copyright 2026 The cloudsched Authors
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

#include "cloudsched/rational.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "cloudsched/types.hpp"

namespace cloudsched {

namespace {

mpz_class pow10(long exponent) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), 10, static_cast<unsigned long>(exponent));
  return r;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
  }
  return true;
}

}  // namespace

Rational parse_rational(std::string_view text) {
  const std::string original(text);
  auto fail = [&]() -> Rational {
    throw ConfigError("not a number: '" + original + "'");
  };
  if (text.empty()) return fail();
  bool negative = false;
  if (text.front() == '-' || text.front() == '+') {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  Rational result;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    auto num = text.substr(0, slash);
    auto den = text.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) return fail();
    mpz_class d(std::string(den), 10);
    if (d == 0) return fail();
    result = Rational(mpz_class(std::string(num), 10), d);
  } else {
    long exponent = 0;
    if (auto e = text.find_first_of("eE"); e != std::string_view::npos) {
      auto exp_text = text.substr(e + 1);
      bool exp_negative = false;
      if (!exp_text.empty() && (exp_text[0] == '-' || exp_text[0] == '+')) {
        exp_negative = exp_text[0] == '-';
        exp_text.remove_prefix(1);
      }
      if (!all_digits(exp_text) || exp_text.size() > 6) return fail();
      exponent = std::stol(std::string(exp_text));
      if (exp_negative) exponent = -exponent;
      text = text.substr(0, e);
    }
    std::string digits;
    if (auto dot = text.find('.'); dot != std::string_view::npos) {
      auto whole = text.substr(0, dot);
      auto frac = text.substr(dot + 1);
      if ((!whole.empty() && !all_digits(whole)) ||
          (!frac.empty() && !all_digits(frac)) ||
          (whole.empty() && frac.empty())) {
        return fail();
      }
      digits = std::string(whole) + std::string(frac);
      exponent -= static_cast<long>(frac.size());
    } else {
      if (!all_digits(text)) return fail();
      digits = std::string(text);
    }
    mpz_class mantissa(digits, 10);
    if (exponent >= 0) {
      result = Rational(mantissa * pow10(exponent));
    } else {
      result = Rational(mantissa, pow10(-exponent));
    }
  }
  result.canonicalize();
  return negative ? Rational(-result) : result;
}

Rational rational_from_double(double value) {
  if (!std::isfinite(value)) throw ConfigError("non-finite number");
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc()) throw ConfigError("cannot format number");
  return parse_rational(std::string_view(buf, end - buf));
}

double to_double(const Rational& value) {
  const auto exact = [](const mpz_class& z) {
    return mpz_sizeinbase(z.get_mpz_t(), 2) <= 53;
  };
  if (exact(value.get_num()) && exact(value.get_den())) {
    return value.get_num().get_d() / value.get_den().get_d();
  }
  return value.get_d();
}

std::string to_decimal_string(const Rational& value, int digits) {
  const bool negative = sgn(value) < 0;
  Rational mag = negative ? Rational(-value) : value;
  const mpz_class scale = pow10(digits);
  // Round half away from zero.
  mpz_class scaled = (mag.get_num() * scale * 2 + mag.get_den()) /
                     (mag.get_den() * 2);
  mpz_class whole = scaled / scale;
  mpz_class frac = scaled % scale;
  std::string out = (negative && scaled != 0) ? "-" : "";
  out += whole.get_str();
  if (digits > 0 && frac != 0) {
    std::string f = frac.get_str();
    f.insert(0, static_cast<std::size_t>(digits) - f.size(), '0');
    while (!f.empty() && f.back() == '0') f.pop_back();
    out += "." + f;
  }
  return out;
}

}  // namespace cloudsched
