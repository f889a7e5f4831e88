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

#include "tpgs/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace tpgs {

namespace {

std::int64_t parse_int(std::string_view text, std::string_view whole) {
    if (text.empty()) {
        throw std::invalid_argument("bad rational literal: " + std::string(whole));
    }
    std::int64_t value = 0;
    bool negative = false;
    std::size_t i = 0;
    if (text[0] == '-' || text[0] == '+') {
        negative = text[0] == '-';
        i = 1;
    }
    if (i == text.size()) {
        throw std::invalid_argument("bad rational literal: " + std::string(whole));
    }
    for (; i < text.size(); ++i) {
        if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
            throw std::invalid_argument("bad rational literal: " + std::string(whole));
        }
        value = value * 10 + (text[i] - '0');
    }
    return negative ? -value : value;
}

}  // namespace

Rational parse_rational(std::string_view text) {
    // Trim surrounding whitespace.
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
    while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
    if (text.empty()) {
        throw std::invalid_argument("empty rational literal");
    }

    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        const std::int64_t num = parse_int(text.substr(0, slash), text);
        const std::int64_t den = parse_int(text.substr(slash + 1), text);
        if (den == 0) {
            throw std::invalid_argument("zero denominator: " + std::string(text));
        }
        return Rational(num, den);
    }

    if (auto dot = text.find('.'); dot != std::string_view::npos) {
        std::string_view frac = text.substr(dot + 1);
        if (frac.find_first_of("+-.") != std::string_view::npos) {
            throw std::invalid_argument("bad rational literal: " + std::string(text));
        }
        std::string_view head = text.substr(0, dot);
        const bool negative = !head.empty() && head[0] == '-';
        std::int64_t whole = head.empty() || head == "-" || head == "+" ? 0 : parse_int(head, text);
        std::int64_t scale = 1;
        std::int64_t digits = 0;
        for (char c : frac) {
            if (!std::isdigit(static_cast<unsigned char>(c))) {
                throw std::invalid_argument("bad rational literal: " + std::string(text));
            }
            digits = digits * 10 + (c - '0');
            scale *= 10;
        }
        if (whole < 0) whole = -whole;
        Rational magnitude = Rational(whole) + Rational(digits, scale);
        return negative ? -magnitude : magnitude;
    }

    return Rational(parse_int(text, text));
}

std::string format_rational(const Rational& value) {
    std::string out = std::to_string(value.numerator());
    if (value.denominator() != 1) {
        out += '/';
        out += std::to_string(value.denominator());
    }
    return out;
}

}  // namespace tpgs
