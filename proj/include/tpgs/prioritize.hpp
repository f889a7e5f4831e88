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

#ifndef TPGS_PRIORITIZE_HPP
#define TPGS_PRIORITIZE_HPP

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "tpgs/formal.hpp"
#include "tpgs/rational.hpp"
#include "tpgs/retrieval.hpp"
#include "tpgs/theorem.hpp"
#include "tpgs/tpg.hpp"

namespace tpgs {

enum class GoalCategory { Angular, Metric, Areal, Other };

std::string_view category_name(GoalCategory category);

// Closed keyword table mapping theorem-name fragments to goal categories.
struct KeywordTable {
    std::vector<std::string> angular{"angle", "parallel", "perpendicular"};
    std::vector<std::string> metric{"length", "pythagorean", "similar"};
    std::vector<std::string> areal{"area", "ratio"};

    const std::vector<std::string>& keywords(GoalCategory category) const;
};

KeywordTable keyword_table_from_json(const nlohmann::json& doc);
nlohmann::json keyword_table_to_json(const KeywordTable& table);

// Category of a goal: first category (angular, metric, areal) whose keyword
// occurs in the lowercased goal predicate name / measure kind; Other if none.
GoalCategory classify_goal(const Goal& goal, const KeywordTable& table);

struct ScoreWeights {
    Rational alpha{5};             // goal-keyword bonus
    Rational beta{10};             // first-order successor base
    Rational second_order{4};      // two-hop successor base
    Rational gamma{5};             // per prior application
    Rational recovery_penalty{20};  // extra for recently failed candidates
};

ScoreWeights score_weights_from_json(const nlohmann::json& doc);
nlohmann::json score_weights_to_json(const ScoreWeights& weights);

struct StepContext {
    int step = 1;
    std::string a_prev{kStartNode};  // START exactly when step == 1
    std::map<std::string, int> applications;  // prior executions per theorem
    bool recovery = false;
    std::set<std::string> failed;  // names rejected at the current step
    GoalCategory goal_category = GoalCategory::Other;
};

enum class Readiness { Ready, Blocked };

struct ScoredCandidate {
    std::string name;
    Readiness readiness = Readiness::Ready;
    Rational s_goal{0};
    Rational s_graph{0};
    Rational s_hist{0};
    Rational psi{0};
    std::int64_t pool_frequency = 0;  // diagnostic only; not part of psi
};

// Splits the pool by the weak type check, preserving pool order. Throws
// std::out_of_range for names missing from the library.
std::pair<std::vector<std::string>, std::vector<std::string>> prune_candidates(
    const CandidatePool& pool, const SymbolicState& state, const TheoremLibrary& library);

// Induced subgraph on descendants(anchor) + anchor, where anchor is a_prev
// when present in the graph and START otherwise. Weights preserved.
PrecedenceGraph localize_graph(const PrecedenceGraph& graph, const std::string& a_prev);

// Composite score:
//   s_goal  = +alpha iff the candidate name contains a keyword of the goal category
//   s_graph = beta*(1/2 + w) for a first-order successor of a_prev (weight w),
//             else second_order*(1/2 + w1*w2) over the best two-hop path;
//             a candidate that is both takes the larger term
//   s_hist  = -gamma * prior applications, and additionally -recovery_penalty
//             when recovering and the candidate already failed this step
// Anchor falls back to START when a_prev is not a node of the graph.
ScoredCandidate score(const std::string& candidate, const StepContext& ctx,
                      const PrecedenceGraph& graph, std::int64_t pool_frequency,
                      const ScoreWeights& weights = {}, const KeywordTable& table = {});

// Stable order: psi descending, ready before blocked, name ascending; truncated
// to window (must be >= 1).
std::vector<ScoredCandidate> rank(std::vector<ScoredCandidate> candidates, std::int64_t window);

}  // namespace tpgs

#endif  // TPGS_PRIORITIZE_HPP
