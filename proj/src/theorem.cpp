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

#include "tpgs/theorem.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>

namespace tpgs {

namespace {

constexpr const char* kLibraryFormat = "tpgs-library";
constexpr int kLibraryVersion = 1;
constexpr std::string_view kMeasureName = "measure";

void skip_spaces(std::string_view text, std::size_t& pos) {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
}

}  // namespace

Rational AffineExpr::evaluate(const std::map<std::string, Rational>& values) const {
    Rational total = constant;
    for (const auto& [var, coeff] : coeffs) {
        auto it = values.find(var);
        if (it == values.end()) {
            throw std::out_of_range("unbound measure variable in affine expression: " + var);
        }
        total += coeff * it->second;
    }
    return total;
}

AffineExpr parse_affine(std::string_view text) {
    std::size_t pos = 0;
    Rational constant{0};
    std::map<std::string, Rational> coeffs;

    auto parse_factor = [&](Rational& number, std::string& var, bool& is_var) {
        skip_spaces(text, pos);
        if (pos >= text.size()) throw ParseError("expected factor at offset " + std::to_string(pos), pos);
        if (text[pos] == '?') {
            std::size_t start = pos;
            ++pos;
            while (pos < text.size() &&
                   (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) {
                ++pos;
            }
            if (pos == start + 1) {
                throw ParseError("expected variable name at offset " + std::to_string(start), start);
            }
            var = std::string(text.substr(start, pos - start));
            is_var = true;
            return;
        }
        std::size_t start = pos;
        while (pos < text.size() && (std::isdigit(static_cast<unsigned char>(text[pos])) ||
                                     text[pos] == '.' || text[pos] == '/')) {
            ++pos;
        }
        if (pos == start) {
            throw ParseError("expected number or variable at offset " + std::to_string(start), start);
        }
        try {
            number = parse_rational(text.substr(start, pos - start));
        } catch (const std::invalid_argument&) {
            throw ParseError("bad numeric literal at offset " + std::to_string(start), start);
        }
        is_var = false;
    };

    bool first = true;
    while (true) {
        skip_spaces(text, pos);
        if (pos >= text.size()) {
            if (first) throw ParseError("empty affine expression", 0);
            break;
        }
        Rational sign{1};
        if (text[pos] == '+' || text[pos] == '-') {
            if (text[pos] == '-') sign = Rational(-1);
            ++pos;
        } else if (!first) {
            throw ParseError("expected '+' or '-' at offset " + std::to_string(pos), pos);
        }
        first = false;

        // term := factor ('*' factor)*, with at most one variable factor
        Rational scale = sign;
        std::string term_var;
        while (true) {
            Rational number{0};
            std::string var;
            bool is_var = false;
            parse_factor(number, var, is_var);
            if (is_var) {
                if (!term_var.empty()) {
                    throw ParseError("nonlinear term (two variables) at offset " + std::to_string(pos),
                                     pos);
                }
                term_var = var;
            } else {
                scale *= number;
            }
            skip_spaces(text, pos);
            if (pos < text.size() && text[pos] == '*') {
                ++pos;
                continue;
            }
            break;
        }
        if (term_var.empty()) {
            constant += scale;
        } else {
            coeffs[term_var] += scale;
        }
    }

    AffineExpr out;
    out.constant = constant;
    for (auto& [var, coeff] : coeffs) {
        if (coeff != Rational(0)) out.coeffs.emplace_back(var, coeff);
    }
    return out;
}

void TheoremLibrary::add(TheoremSchema schema) {
    if (schema.name.empty()) throw SchemaError("theorem name must be nonempty");
    if (by_name_.count(schema.name) != 0) {
        throw SchemaError("duplicate theorem name: " + schema.name);
    }

    auto check_arity = [&](const Predicate& pattern) {
        if (pattern.name.empty() || pattern.name[0] == '?') {
            throw SchemaError("theorem " + schema.name + ": predicate name must be concrete");
        }
        if (pattern.name == kMeasureName) {
            throw SchemaError("theorem " + schema.name + ": 'measure' is reserved");
        }
        auto [it, inserted] = arity_.emplace(pattern.name, pattern.args.size());
        if (!inserted && it->second != pattern.args.size()) {
            throw SchemaError("theorem " + schema.name + ": predicate " + pattern.name +
                              " used with arity " + std::to_string(pattern.args.size()) +
                              " but library has arity " + std::to_string(it->second));
        }
    };

    schema.variables.clear();
    schema.value_variables.clear();
    std::set<std::string> entity_vars;
    std::set<std::string> value_vars;
    auto note_entity_var = [&](const std::string& token) {
        if (is_variable(token) && entity_vars.insert(token).second) {
            schema.variables.push_back(token);
        }
    };

    for (const Predicate& pattern : schema.premises) {
        check_arity(pattern);
        for (const std::string& arg : pattern.args) note_entity_var(arg);
    }
    for (const MeasurePremise& premise : schema.measure_premises) {
        if (premise.kind.empty() || is_variable(premise.kind)) {
            throw SchemaError("theorem " + schema.name + ": measure kind must be a concrete token");
        }
        if (!is_variable(premise.value_var)) {
            throw SchemaError("theorem " + schema.name + ": measure value must be a variable");
        }
        note_entity_var(premise.subject);
        if (entity_vars.count(premise.value_var) != 0) {
            throw SchemaError("theorem " + schema.name + ": variable " + premise.value_var +
                              " used both for entities and values");
        }
        if (value_vars.insert(premise.value_var).second) {
            schema.value_variables.push_back(premise.value_var);
        }
    }

    for (const Predicate& pattern : schema.conclusions) {
        check_arity(pattern);
        for (const std::string& arg : pattern.args) {
            if (!is_variable(arg)) continue;
            if (value_vars.count(arg) != 0) {
                throw SchemaError("theorem " + schema.name + ": value variable " + arg +
                                  " cannot appear in a predicate conclusion");
            }
            if (entity_vars.count(arg) == 0) {
                throw SchemaError("theorem " + schema.name + ": conclusion variable " + arg +
                                  " does not appear in any premise");
            }
        }
    }
    if (schema.measure_rule) {
        const MeasureRule& rule = *schema.measure_rule;
        if (rule.kind.empty() || is_variable(rule.kind)) {
            throw SchemaError("theorem " + schema.name + ": measure rule kind must be concrete");
        }
        if (is_variable(rule.subject) && entity_vars.count(rule.subject) == 0) {
            throw SchemaError("theorem " + schema.name + ": measure rule subject " + rule.subject +
                              " does not appear in any premise");
        }
        for (const auto& [var, coeff] : rule.expr.coeffs) {
            if (value_vars.count(var) == 0) {
                throw SchemaError("theorem " + schema.name + ": measure rule variable " + var +
                                  " is not bound by a measure premise");
            }
        }
    }
    if (schema.conclusions.empty() && !schema.measure_rule) {
        throw SchemaError("theorem " + schema.name + " has no conclusions");
    }

    by_name_.emplace(schema.name, schemas_.size());
    schemas_.push_back(std::move(schema));
}

const TheoremSchema* TheoremLibrary::find(std::string_view name) const {
    auto it = by_name_.find(name);
    return it == by_name_.end() ? nullptr : &schemas_[it->second];
}

const TheoremSchema& TheoremLibrary::at(std::string_view name) const {
    const TheoremSchema* schema = find(name);
    if (schema == nullptr) throw std::out_of_range("unknown theorem: " + std::string(name));
    return *schema;
}

std::string substitute_token(const Binding& binding, const std::string& token) {
    if (!is_variable(token)) return token;
    auto it = binding.entities.find(token);
    if (it == binding.entities.end()) throw std::out_of_range("unbound variable: " + token);
    return it->second;
}

Predicate substitute(const Binding& binding, const Predicate& pattern) {
    Predicate out;
    out.name = pattern.name;
    out.args.reserve(pattern.args.size());
    for (const std::string& arg : pattern.args) {
        out.args.push_back(substitute_token(binding, arg));
    }
    return out;
}

namespace {

bool unify_token(Binding& binding, const std::string& pattern_token, const std::string& ground) {
    if (!is_variable(pattern_token)) return pattern_token == ground;
    auto [it, inserted] = binding.entities.emplace(pattern_token, ground);
    return inserted || it->second == ground;
}

void match_measures(const TheoremSchema& schema, const SymbolicState& state, std::size_t index,
                    Binding& partial, std::vector<Binding>& out) {
    if (index == schema.measure_premises.size()) {
        out.push_back(partial);
        return;
    }
    const MeasurePremise& premise = schema.measure_premises[index];

    auto try_value = [&](const Rational& value, Binding& candidate) {
        auto [it, inserted] = candidate.values.emplace(premise.value_var, value);
        if (!inserted && it->second != value) return false;
        match_measures(schema, state, index + 1, candidate, out);
        return true;
    };

    const bool subject_is_var = is_variable(premise.subject);
    std::string bound_subject;
    if (!subject_is_var) {
        bound_subject = premise.subject;
    } else if (auto it = partial.entities.find(premise.subject); it != partial.entities.end()) {
        bound_subject = it->second;
    }

    if (!bound_subject.empty()) {
        const Rational* value = state.measure(premise.kind, bound_subject);
        if (value == nullptr) return;
        Binding candidate = partial;
        try_value(*value, candidate);
        return;
    }
    for (const auto& [key, value] : state.measures()) {
        if (key.kind != premise.kind) continue;
        Binding candidate = partial;
        candidate.entities.emplace(premise.subject, key.subject);
        try_value(value, candidate);
    }
}

void match_premises(const TheoremSchema& schema, const SymbolicState& state, std::size_t index,
                    Binding& partial, std::vector<Binding>& out) {
    if (index == schema.premises.size()) {
        match_measures(schema, state, 0, partial, out);
        return;
    }
    const Predicate& pattern = schema.premises[index];
    auto [first, last] = state.facts_named(pattern.name);
    for (auto it = first; it != last; ++it) {
        const Predicate& fact = it->first;
        if (fact.args.size() != pattern.args.size()) continue;
        Binding candidate = partial;
        bool ok = true;
        for (std::size_t i = 0; i < pattern.args.size(); ++i) {
            if (!unify_token(candidate, pattern.args[i], fact.args[i])) {
                ok = false;
                break;
            }
        }
        if (ok) match_premises(schema, state, index + 1, candidate, out);
    }
}

// Lexicographic key: entity tokens in schema-variable order, then values.
bool binding_less(const TheoremSchema& schema, const Binding& a, const Binding& b) {
    for (const std::string& var : schema.variables) {
        const std::string& ta = a.entities.at(var);
        const std::string& tb = b.entities.at(var);
        if (ta != tb) return ta < tb;
    }
    for (const std::string& var : schema.value_variables) {
        const Rational& va = a.values.at(var);
        const Rational& vb = b.values.at(var);
        if (va != vb) return va < vb;
    }
    return false;
}

}  // namespace

std::vector<Binding> enumerate_bindings(const TheoremSchema& schema, const SymbolicState& state) {
    std::vector<Binding> out;
    Binding partial;
    match_premises(schema, state, 0, partial, out);
    std::sort(out.begin(), out.end(),
              [&](const Binding& a, const Binding& b) { return binding_less(schema, a, b); });
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

bool type_consistent(const TheoremSchema& schema, const SymbolicState& state) {
    for (const Predicate& pattern : schema.premises) {
        if (!state.has_fact_named(pattern.name)) return false;
    }
    for (const MeasurePremise& premise : schema.measure_premises) {
        if (!state.has_measure_kind(premise.kind)) return false;
    }
    return true;
}

std::string_view outcome_name(OutcomeKind kind) {
    switch (kind) {
        case OutcomeKind::Applied: return "applied";
        case OutcomeKind::NoNewFacts: return "no-new-facts";
        case OutcomeKind::PremiseUnsatisfied: return "premise-unsatisfied";
    }
    return "unknown";
}

ApplicationOutcome apply_theorem(SymbolicState& state, const TheoremSchema& schema, int step) {
    std::vector<Binding> bindings = enumerate_bindings(schema, state);
    ApplicationOutcome outcome;
    if (bindings.empty()) {
        outcome.kind = OutcomeKind::PremiseUnsatisfied;
        return outcome;
    }

    std::set<Predicate> consumed;
    for (const Binding& binding : bindings) {
        for (const Predicate& pattern : schema.premises) {
            consumed.insert(substitute(binding, pattern));
        }
        for (const Predicate& pattern : schema.conclusions) {
            Predicate fact = substitute(binding, pattern);
            if (state.add_fact(fact, step)) outcome.new_facts.push_back(std::move(fact));
        }
        if (schema.measure_rule) {
            const MeasureRule& rule = *schema.measure_rule;
            MeasureBinding derived{rule.kind, substitute_token(binding, rule.subject),
                                   rule.expr.evaluate(binding.values)};
            if (state.add_measure(derived) == SymbolicState::MeasureAdd::Added) {
                outcome.new_measures.push_back(std::move(derived));
            }
        }
    }
    outcome.consumed_facts.assign(consumed.begin(), consumed.end());
    std::sort(outcome.new_facts.begin(), outcome.new_facts.end());
    std::sort(outcome.new_measures.begin(), outcome.new_measures.end(),
              [](const MeasureBinding& a, const MeasureBinding& b) {
                  return std::tie(a.kind, a.subject) < std::tie(b.kind, b.subject);
              });
    outcome.kind = (outcome.new_facts.empty() && outcome.new_measures.empty())
                       ? OutcomeKind::NoNewFacts
                       : OutcomeKind::Applied;
    return outcome;
}

TheoremSchema schema_from_json(const nlohmann::json& record) {
    if (!record.is_object()) throw SchemaError("theorem record must be an object");
    TheoremSchema schema;
    schema.name = record.value("name", std::string{});
    if (schema.name.empty()) throw SchemaError("theorem record missing name");

    for (const auto& entry : record.value("premises", nlohmann::json::array())) {
        Predicate pattern = parse_predicate(entry.get<std::string>());
        if (pattern.name == kMeasureName) {
            if (pattern.args.size() != 3) {
                throw SchemaError("theorem " + schema.name +
                                  ": measure premise needs (kind, subject, ?value)");
            }
            schema.measure_premises.push_back(
                MeasurePremise{pattern.args[0], pattern.args[1], pattern.args[2]});
        } else {
            schema.premises.push_back(std::move(pattern));
        }
    }
    for (const auto& entry : record.value("conclusions", nlohmann::json::array())) {
        schema.conclusions.push_back(parse_predicate(entry.get<std::string>()));
    }
    if (record.contains("measure_rule")) {
        const auto& rule = record.at("measure_rule");
        MeasureRule parsed;
        parsed.kind = rule.at("kind").get<std::string>();
        parsed.subject = rule.at("subject").get<std::string>();
        parsed.expr_text = rule.at("expr").get<std::string>();
        parsed.expr = parse_affine(parsed.expr_text);
        schema.measure_rule = std::move(parsed);
    }
    return schema;
}

nlohmann::json schema_to_json(const TheoremSchema& schema) {
    nlohmann::json record;
    record["name"] = schema.name;
    nlohmann::json premises = nlohmann::json::array();
    for (const Predicate& pattern : schema.premises) premises.push_back(pattern.render());
    for (const MeasurePremise& premise : schema.measure_premises) {
        premises.push_back(
            Predicate{std::string(kMeasureName), {premise.kind, premise.subject, premise.value_var}}
                .render());
    }
    record["premises"] = std::move(premises);
    nlohmann::json conclusions = nlohmann::json::array();
    for (const Predicate& pattern : schema.conclusions) conclusions.push_back(pattern.render());
    record["conclusions"] = std::move(conclusions);
    if (schema.measure_rule) {
        record["measure_rule"] = {{"kind", schema.measure_rule->kind},
                                  {"subject", schema.measure_rule->subject},
                                  {"expr", schema.measure_rule->expr_text}};
    }
    return record;
}

TheoremLibrary library_from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || doc.value("format", std::string{}) != kLibraryFormat) {
        throw SchemaError("not a theorem library file (missing format tag)");
    }
    if (doc.value("version", 0) != kLibraryVersion) {
        throw SchemaError("unsupported theorem library version");
    }
    TheoremLibrary library;
    for (const auto& record : doc.at("theorems")) {
        library.add(schema_from_json(record));
    }
    return library;
}

nlohmann::json library_to_json(const TheoremLibrary& library) {
    nlohmann::json doc;
    doc["format"] = kLibraryFormat;
    doc["version"] = kLibraryVersion;
    nlohmann::json records = nlohmann::json::array();
    for (const TheoremSchema& schema : library.schemas()) {
        records.push_back(schema_to_json(schema));
    }
    doc["theorems"] = std::move(records);
    return doc;
}

TheoremLibrary load_library(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open theorem library: " + path);
    nlohmann::json doc;
    in >> doc;
    return library_from_json(doc);
}

void save_library(const std::string& path, const TheoremLibrary& library) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write theorem library: " + path);
    out << library_to_json(library).dump(2) << '\n';
}

}  // namespace tpgs
