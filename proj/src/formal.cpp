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

#include "tpgs/formal.hpp"

#include <nlohmann/json.hpp>

#include <cctype>
#include <fstream>
#include <set>
#include <sstream>

namespace tpgs {

namespace {

bool is_identifier_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '?' || c == '-' ||
           c == '.';
}

constexpr const char* kCorpusFormat = "tpgs-corpus";
constexpr int kCorpusVersion = 1;

}  // namespace

std::string Predicate::render() const {
    std::string out = name;
    out += '(';
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (i > 0) out += ',';
        out += args[i];
    }
    out += ')';
    return out;
}

Predicate parse_predicate(std::string_view text) {
    std::size_t pos = 0;
    auto take_identifier = [&](const char* what) {
        std::size_t start = pos;
        while (pos < text.size() && is_identifier_char(text[pos])) ++pos;
        if (pos == start) {
            throw ParseError(std::string("expected ") + what + " at offset " + std::to_string(start),
                             start);
        }
        return std::string(text.substr(start, pos - start));
    };

    Predicate out;
    out.name = take_identifier("predicate name");
    if (pos >= text.size() || text[pos] != '(') {
        throw ParseError("expected '(' at offset " + std::to_string(pos), pos);
    }
    ++pos;
    if (pos < text.size() && text[pos] == ')') {
        ++pos;
    } else {
        while (true) {
            out.args.push_back(take_identifier("argument"));
            if (pos < text.size() && text[pos] == ',') {
                ++pos;
                continue;
            }
            if (pos < text.size() && text[pos] == ')') {
                ++pos;
                break;
            }
            throw ParseError("expected ',' or ')' at offset " + std::to_string(pos), pos);
        }
    }
    if (pos != text.size()) {
        throw ParseError("trailing input at offset " + std::to_string(pos), pos);
    }
    return out;
}

bool SymbolicState::contains(const Predicate& fact) const {
    return facts_.count(fact) != 0;
}

int SymbolicState::birth(const Predicate& fact) const {
    auto it = facts_.find(fact);
    if (it == facts_.end()) {
        throw std::out_of_range("no such fact: " + fact.render());
    }
    return it->second;
}

bool SymbolicState::add_fact(const Predicate& fact, int step) {
    return facts_.emplace(fact, step).second;
}

const Rational* SymbolicState::measure(std::string_view kind, std::string_view subject) const {
    auto it = measures_.find(MeasureKey{std::string(kind), std::string(subject)});
    return it == measures_.end() ? nullptr : &it->second;
}

SymbolicState::MeasureAdd SymbolicState::add_measure(const MeasureBinding& binding) {
    auto [it, inserted] = measures_.emplace(MeasureKey{binding.kind, binding.subject}, binding.value);
    if (inserted) return MeasureAdd::Added;
    if (it->second == binding.value) return MeasureAdd::Duplicate;
    throw MeasureConflictError("conflicting value for " + binding.kind + "(" + binding.subject +
                               "): " + format_rational(it->second) + " vs " +
                               format_rational(binding.value));
}

std::pair<std::map<Predicate, int>::const_iterator, std::map<Predicate, int>::const_iterator>
SymbolicState::facts_named(std::string_view name) const {
    Predicate lo{std::string(name), {}};
    auto first = facts_.lower_bound(lo);
    auto last = first;
    while (last != facts_.end() && last->first.name == name) ++last;
    return {first, last};
}

bool SymbolicState::has_fact_named(std::string_view name) const {
    auto [first, last] = facts_named(name);
    return first != last;
}

bool SymbolicState::has_measure_kind(std::string_view kind) const {
    auto it = measures_.lower_bound(MeasureKey{std::string(kind), ""});
    return it != measures_.end() && it->first.kind == kind;
}

std::string Goal::render() const {
    if (is_predicate()) return predicate().render();
    const MeasureGoal& m = measure();
    std::string out = m.kind + "(" + m.subject + ") = " + format_rational(m.target);
    if (m.tolerance != Rational(0)) {
        out += " +/- " + format_rational(m.tolerance);
    }
    return out;
}

bool goal_satisfied(const SymbolicState& state, const Goal& goal) {
    if (goal.is_predicate()) {
        return state.contains(goal.predicate());
    }
    const MeasureGoal& target = goal.measure();
    const Rational* bound = state.measure(target.kind, target.subject);
    if (bound == nullptr) return false;
    Rational diff = *bound - target.target;
    if (diff < Rational(0)) diff = -diff;
    return diff <= target.tolerance;
}

std::optional<int> Problem::depth() const {
    if (trace) return static_cast<int>(trace->size());
    return level;
}

SymbolicState Problem::initial_state() const {
    SymbolicState state;
    for (const Predicate& fact : premise_facts) {
        state.add_fact(fact, 0);
    }
    for (const MeasureBinding& binding : premise_measures) {
        state.add_measure(binding);
    }
    return state;
}

namespace {

Goal goal_from_json(const nlohmann::json& record) {
    if (!record.is_object() || !record.contains("type")) {
        throw SchemaError("goal must be an object with a 'type' field");
    }
    const std::string type = record.at("type").get<std::string>();
    if (type == "predicate") {
        return Goal{parse_predicate(record.at("value").get<std::string>())};
    }
    if (type == "measure") {
        MeasureGoal goal;
        goal.kind = record.at("kind").get<std::string>();
        goal.subject = record.at("subject").get<std::string>();
        goal.target = parse_rational(record.at("target").get<std::string>());
        goal.tolerance = record.contains("tolerance")
                             ? parse_rational(record.at("tolerance").get<std::string>())
                             : Rational(0);
        if (goal.tolerance < Rational(0)) {
            throw SchemaError("measure goal tolerance must be >= 0");
        }
        return Goal{goal};
    }
    throw SchemaError("unknown goal variant: " + type);
}

nlohmann::json goal_to_json(const Goal& goal) {
    nlohmann::json out;
    if (goal.is_predicate()) {
        out["type"] = "predicate";
        out["value"] = goal.predicate().render();
    } else {
        const MeasureGoal& m = goal.measure();
        out["type"] = "measure";
        out["kind"] = m.kind;
        out["subject"] = m.subject;
        out["target"] = format_rational(m.target);
        out["tolerance"] = format_rational(m.tolerance);
    }
    return out;
}

}  // namespace

Problem problem_from_json(const nlohmann::json& record) {
    if (!record.is_object()) throw SchemaError("problem record must be an object");
    if (!record.contains("id") || !record.at("id").is_string() ||
        record.at("id").get<std::string>().empty()) {
        throw SchemaError("problem record missing id");
    }
    Problem problem;
    problem.id = record.at("id").get<std::string>();
    problem.text = record.value("text", std::string{});
    if (!record.contains("goal")) throw SchemaError("problem " + problem.id + " missing goal");
    problem.goal = goal_from_json(record.at("goal"));

    std::set<MeasureKey> seen_measures;
    for (const auto& premise : record.value("premises", nlohmann::json::array())) {
        if (premise.is_string()) {
            Predicate fact = parse_predicate(premise.get<std::string>());
            for (const std::string& arg : fact.args) {
                if (is_variable(arg)) {
                    throw SchemaError("premise of " + problem.id + " is not ground: " + fact.render());
                }
            }
            problem.premise_facts.push_back(std::move(fact));
        } else if (premise.is_array() && premise.size() == 3) {
            MeasureBinding binding{premise.at(0).get<std::string>(),
                                   premise.at(1).get<std::string>(),
                                   parse_rational(premise.at(2).get<std::string>())};
            if (!seen_measures.insert(MeasureKey{binding.kind, binding.subject}).second) {
                throw SchemaError("duplicate measure binding in " + problem.id + ": " + binding.kind +
                                  "(" + binding.subject + ")");
            }
            problem.premise_measures.push_back(std::move(binding));
        } else {
            throw SchemaError("premise of " + problem.id +
                              " must be a predicate string or a [kind,subject,value] triple");
        }
    }

    if (record.contains("trace")) {
        problem.trace = record.at("trace").get<std::vector<std::string>>();
    }
    if (record.contains("level")) {
        problem.level = record.at("level").get<int>();
        if (problem.trace && static_cast<int>(problem.trace->size()) != *problem.level) {
            throw SchemaError("problem " + problem.id + ": level does not match trace length");
        }
    } else if (problem.trace) {
        problem.level = static_cast<int>(problem.trace->size());
    }
    return problem;
}

nlohmann::json problem_to_json(const Problem& problem) {
    nlohmann::json record;
    record["id"] = problem.id;
    record["text"] = problem.text;
    nlohmann::json premises = nlohmann::json::array();
    for (const Predicate& fact : problem.premise_facts) {
        premises.push_back(fact.render());
    }
    for (const MeasureBinding& binding : problem.premise_measures) {
        premises.push_back({binding.kind, binding.subject, format_rational(binding.value)});
    }
    record["premises"] = std::move(premises);
    record["goal"] = goal_to_json(problem.goal);
    if (problem.trace) record["trace"] = *problem.trace;
    if (problem.level) record["level"] = *problem.level;
    return record;
}

std::vector<Problem> corpus_from_json(const nlohmann::json& doc, nlohmann::json* manifest_out) {
    if (!doc.is_object() || doc.value("format", std::string{}) != kCorpusFormat) {
        throw SchemaError("not a corpus file (missing format tag)");
    }
    if (doc.value("version", 0) != kCorpusVersion) {
        throw SchemaError("unsupported corpus version");
    }
    if (manifest_out != nullptr) {
        *manifest_out = doc.contains("manifest") ? doc.at("manifest") : nlohmann::json{};
    }
    std::vector<Problem> problems;
    std::set<std::string> ids;
    for (const auto& record : doc.at("problems")) {
        Problem problem = problem_from_json(record);
        if (!ids.insert(problem.id).second) {
            throw SchemaError("duplicate problem id: " + problem.id);
        }
        problems.push_back(std::move(problem));
    }
    return problems;
}

std::vector<Problem> load_corpus(const std::string& path, nlohmann::json* manifest_out) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open corpus file: " + path);
    nlohmann::json doc;
    in >> doc;
    return corpus_from_json(doc, manifest_out);
}

void save_corpus(const std::string& path, const std::vector<Problem>& problems,
                 const nlohmann::json* manifest) {
    nlohmann::json doc;
    doc["format"] = kCorpusFormat;
    doc["version"] = kCorpusVersion;
    if (manifest != nullptr && !manifest->is_null()) doc["manifest"] = *manifest;
    nlohmann::json records = nlohmann::json::array();
    for (const Problem& problem : problems) {
        records.push_back(problem_to_json(problem));
    }
    doc["problems"] = std::move(records);
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write corpus file: " + path);
    out << doc.dump(2) << '\n';
}

}  // namespace tpgs
