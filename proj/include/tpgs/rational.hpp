/*
Copyright 2026 The tpgsolve authors

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <string>
#include <string_view>

namespace tpgs {

/// Exact rational arithmetic for measure values and graph edge weights.
using Rational = boost::rational<std::int64_t>;

/// Parses "3", "-7/2" or a plain decimal such as "30.5" into an exact value.
/// Throws std::invalid_argument on anything else.
Rational parse_rational(std::string_view text);

/// Renders as "n" or "n/d" (lowest terms, '/' only when the denominator is not 1).
std::string format_rational(const Rational& value);

inline double to_double(const Rational& value) {
    return boost::rational_cast<double>(value);
}

}  // namespace tpgs
