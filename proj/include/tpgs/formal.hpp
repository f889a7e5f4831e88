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

#include "tpgs/rational.hpp"

#include <nlohmann/json_fwd.hpp>

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace tpgs {

/// A ground (or, in theorem patterns, partially variable) atom such as
/// Parallel(AB,CD). Argument tokens starting with '?' are pattern variables;
/// facts stored in a state are always ground.
struct Predicate {
    std::string name;
    std::vector<std::string> args;

    auto operator<=>(const Predicate&) const = default;

    /// Canonical rendering: Name(arg1,arg2,...). parse_predicate round-trips it.
    std::string render() const;
};

struct ParseError : std::runtime_error {
    ParseError(const std::string& message, std::size_t offset)
        : std::runtime_error(message), offset(offset) {}
    std::size_t offset;
};

/// Parses `Name(arg1,arg2,...)`. Identifier tokens are nonempty runs of
/// [A-Za-z0-9_?-]. Throws ParseError with the byte offset of the problem.
Predicate parse_predicate(std::string_view text);

inline bool is_variable(std::string_view token) {
    return !token.empty() && token.front() == '?';
}

/// A numeric fact: one exact value per (kind, subject) pair per state.
struct MeasureBinding {
    std::string kind;
    std::string subject;
    Rational value;
};

struct MeasureKey {
    std::string kind;
    std::string subject;
    auto operator<=>(const MeasureKey&) const = default;
};

/// Deriving a different value for an existing (kind, subject) pair is a hard
/// error rather than an overwrite; it points at a broken theorem library.
struct MeasureConflictError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Monotone set of ground facts plus measure bindings. Facts are never
/// removed; each fact remembers the step at which it was derived (0 for
/// initial facts).
class SymbolicState {
public:
    bool contains(const Predicate& fact) const;

    /// Step index at which the fact was derived. Throws if absent.
    int birth(const Predicate& fact) const;

    /// Adds a fact with the given birth step; returns false if already present
    /// (the original birth wins).
    bool add_fact(const Predicate& fact, int step);

    const Rational* measure(std::string_view kind, std::string_view subject) const;

    enum class MeasureAdd { Added, Duplicate };

    /// Adds a measure binding; Duplicate if an equal value is already bound,
    /// MeasureConflictError if a different one is.
    MeasureAdd add_measure(const MeasureBinding& binding);

    const std::map<Predicate, int>& facts() const { return facts_; }
    const std::map<MeasureKey, Rational>& measures() const { return measures_; }

    std::size_t fact_count() const { return facts_.size(); }
    std::size_t measure_count() const { return measures_.size(); }

    /// Ordered range of facts sharing a predicate name.
    std::pair<std::map<Predicate, int>::const_iterator,
              std::map<Predicate, int>::const_iterator>
    facts_named(std::string_view name) const;

    bool has_fact_named(std::string_view name) const;
    bool has_measure_kind(std::string_view kind) const;

private:
    std::map<Predicate, int> facts_;  // fact -> birth step
    std::map<MeasureKey, Rational> measures_;
};

/// Target of a solve: either a fact that must appear in the state, or a
/// measure that must match a value within an absolute tolerance.
struct MeasureGoal {
    std::string kind;
    std::string subject;
    Rational target;
    Rational tolerance;  // >= 0; nonzero only for externally supplied decimals
};

struct Goal {
    std::variant<Predicate, MeasureGoal> value;

    bool is_predicate() const { return std::holds_alternative<Predicate>(value); }
    const Predicate& predicate() const { return std::get<Predicate>(value); }
    const MeasureGoal& measure() const { return std::get<MeasureGoal>(value); }

    std::string render() const;
};

bool goal_satisfied(const SymbolicState& state, const Goal& goal);

struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Problem {
    std::string id;
    std::string text;
    std::vector<Predicate> premise_facts;
    std::vector<MeasureBinding> premise_measures;
    Goal goal;
    std::optional<std::vector<std::string>> trace;  // ground-truth theorem calls
    std::optional<int> level;                       // solution depth l

    /// Number of theorems the reference solution invokes, when known.
    std::optional<int> depth() const;

    /// State with every premise installed at birth step 0.
    SymbolicState initial_state() const;
};

/// Builds a Problem from one corpus record; validates ids, goal shape,
/// duplicate measures and the trace/level consistency rule.
Problem problem_from_json(const nlohmann::json& record);
nlohmann::json problem_to_json(const Problem& problem);

/// Corpus files carry a format tag, an optional manifest and one record per
/// problem. Ids must be unique within a file.
std::vector<Problem> corpus_from_json(const nlohmann::json& doc, nlohmann::json* manifest_out = nullptr);
std::vector<Problem> load_corpus(const std::string& path, nlohmann::json* manifest_out = nullptr);
void save_corpus(const std::string& path, const std::vector<Problem>& problems,
                 const nlohmann::json* manifest = nullptr);

}  // namespace tpgs
