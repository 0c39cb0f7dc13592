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

#ifndef CLOUDSCHED_RATIONAL_HPP_
#define CLOUDSCHED_RATIONAL_HPP_

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace cloudsched {

using Rational = mpq_class;

// Parses "3", "-2/7", "17.1", "1.5e-3" exactly. Throws ConfigError.
Rational parse_rational(std::string_view text);

// The exact rational whose decimal expansion is the shortest string that
// round-trips to `value`; 0.8 becomes 4/5 rather than the binary neighbour.
Rational rational_from_double(double value);

// Fixed-point rendering with `digits` fractional digits (rounded half away
// from zero), trailing zeros trimmed.
std::string to_decimal_string(const Rational& value, int digits = 12);

// Nearest double when numerator and denominator are exact in a double;
// otherwise GMP's truncating conversion.
double to_double(const Rational& value);

}  // namespace cloudsched

#endif  // CLOUDSCHED_RATIONAL_HPP_
