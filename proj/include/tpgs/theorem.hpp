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

#ifndef TPGS_THEOREM_HPP
#define TPGS_THEOREM_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "tpgs/formal.hpp"
#include "tpgs/rational.hpp"

namespace tpgs {

// Affine expression over measure-value variables: constant + sum(coeff * ?var).
struct AffineExpr {
    Rational constant{0};
    std::vector<std::pair<std::string, Rational>> coeffs;  // sorted by variable, coalesced

    Rational evaluate(const std::map<std::string, Rational>& values) const;
};

// Parses e.g. "90 - ?v", "0.5*?u + ?w + 15". Throws ParseError.
AffineExpr parse_affine(std::string_view text);

// Premise written as the pseudo-predicate measure(kind, subject, ?valuevar).
struct MeasurePremise {
    std::string kind;       // constant token
    std::string subject;    // entity token or ?var
    std::string value_var;  // ?var receiving the bound value
};

// Conclusion that derives a new measure from premise measure values.
struct MeasureRule {
    std::string kind;
    std::string subject;  // entity token or ?var
    std::string expr_text;
    AffineExpr expr;
};

struct TheoremSchema {
    std::string name;
    std::vector<std::string> variables;        // entity variables, first-appearance order
    std::vector<std::string> value_variables;  // measure-value variables, first-appearance order
    std::vector<Predicate> premises;
    std::vector<MeasurePremise> measure_premises;
    std::vector<Predicate> conclusions;
    std::optional<MeasureRule> measure_rule;
};

class TheoremLibrary {
  public:
    // Validates and appends. Throws SchemaError on duplicate names, inconsistent
    // predicate arity, or conclusion variables not covered by premises.
    void add(TheoremSchema schema);

    const TheoremSchema* find(std::string_view name) const;
    const TheoremSchema& at(std::string_view name) const;  // throws std::out_of_range
    const std::vector<TheoremSchema>& schemas() const { return schemas_; }
    std::size_t size() const { return schemas_.size(); }

  private:
    std::vector<TheoremSchema> schemas_;
    std::map<std::string, std::size_t, std::less<>> by_name_;
    std::map<std::string, std::size_t, std::less<>> arity_;  // predicate name -> arity
};

struct Binding {
    std::map<std::string, std::string> entities;  // entity var -> token
    std::map<std::string, Rational> values;       // value var -> measure value

    bool operator==(const Binding&) const = default;
};

// Substitutes a single token (variables must be bound; throws std::out_of_range).
std::string substitute_token(const Binding& binding, const std::string& token);
Predicate substitute(const Binding& binding, const Predicate& pattern);

// All bindings satisfying every premise against the state, in lexicographic
// order of the bound entity tokens (then bound values).
std::vector<Binding> enumerate_bindings(const TheoremSchema& schema, const SymbolicState& state);

// Weak applicability: every premise predicate name occurs in the state and every
// measure-premise kind has at least one binding. Never false when a full binding
// exists.
bool type_consistent(const TheoremSchema& schema, const SymbolicState& state);

enum class OutcomeKind { Applied, NoNewFacts, PremiseUnsatisfied };

std::string_view outcome_name(OutcomeKind kind);

struct ApplicationOutcome {
    OutcomeKind kind = OutcomeKind::PremiseUnsatisfied;
    std::vector<Predicate> new_facts;            // sorted
    std::vector<MeasureBinding> new_measures;    // sorted by (kind, subject)
    std::vector<Predicate> consumed_facts;       // sorted union over fired bindings
};

// Fires ALL valid bindings against the pre-call state at once; conclusions do
// not feed further bindings within the same call. New facts get birth = step.
// Throws MeasureConflictError if a fired measure rule contradicts the state.
ApplicationOutcome apply_theorem(SymbolicState& state, const TheoremSchema& schema, int step);

TheoremSchema schema_from_json(const nlohmann::json& record);
nlohmann::json schema_to_json(const TheoremSchema& schema);
TheoremLibrary library_from_json(const nlohmann::json& doc);
nlohmann::json library_to_json(const TheoremLibrary& library);
TheoremLibrary load_library(const std::string& path);
void save_library(const std::string& path, const TheoremLibrary& library);

}  // namespace tpgs

#endif  // TPGS_THEOREM_HPP
