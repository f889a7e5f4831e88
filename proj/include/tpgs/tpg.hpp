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

#ifndef TPGS_TPG_HPP
#define TPGS_TPG_HPP

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "tpgs/formal.hpp"
#include "tpgs/rational.hpp"
#include "tpgs/theorem.hpp"

namespace tpgs {

inline constexpr std::string_view kStartNode = "START";

struct EdgeKey {
    std::string from;
    std::string to;
    auto operator<=>(const EdgeKey&) const = default;
};

// Directed precedence graph over theorem names plus the virtual START node.
// Edge weights are exact rationals support/denominator; single-trace graphs
// have denominator 1 so every edge weighs 1.
class PrecedenceGraph {
  public:
    void add_node(std::string name);
    // Adds support to (from, to). Rejects self-loops and in-edges into START.
    void add_edge(const std::string& from, const std::string& to, std::int64_t support = 1);
    void set_denominator(std::int64_t denominator);

    bool has_node(std::string_view name) const;
    bool has_edge(const std::string& from, const std::string& to) const;
    std::int64_t support(const std::string& from, const std::string& to) const;  // 0 if absent
    Rational weight(const std::string& from, const std::string& to) const;       // 0 if absent
    std::int64_t denominator() const { return denominator_; }

    const std::set<std::string>& nodes() const { return nodes_; }
    const std::map<EdgeKey, std::int64_t>& edges() const { return support_; }
    std::size_t edge_count() const { return support_.size(); }

    // Out-neighbors with weights, ordered by target name.
    std::vector<std::pair<std::string, Rational>> successors(const std::string& from) const;

  private:
    std::set<std::string> nodes_;
    std::map<EdgeKey, std::int64_t> support_;
    std::int64_t denominator_ = 1;
};

struct ReplayError : std::runtime_error {
    ReplayError(const std::string& message, int failing_step)
        : std::runtime_error(message), step(failing_step) {}
    int step;  // 1-based index of the failing trace element
};

// Replays the trace with the saturating executor and emits a provenance edge
// producer(step s) -> theorem(step t) for every fact consumed at step t with
// birth s; birth-0 facts contribute START -> theorem(t). Self-loops drop.
// Throws ReplayError if any step is PremiseUnsatisfied or names an unknown
// theorem.
PrecedenceGraph extract_tpg(const Problem& problem, const std::vector<std::string>& trace,
                            const TheoremLibrary& library);

// Union of nodes; edge weight = |{i : edge in graph i}| / K exactly.
// Requires K == graphs.size() >= 1.
PrecedenceGraph fuse_graphs(const std::vector<const PrecedenceGraph*>& graphs, std::int64_t K);
PrecedenceGraph fuse_graphs(const std::vector<PrecedenceGraph>& graphs, std::int64_t K);

// Nodes reachable from `node` via >= 1 edge (excludes `node` unless cyclic).
// Throws std::out_of_range for unknown nodes.
std::set<std::string> descendants(const PrecedenceGraph& graph, const std::string& node);

// Deterministic DOT rendering; weights printed with 3 decimal places.
std::string export_dot(const PrecedenceGraph& graph);

nlohmann::json graph_to_json(const PrecedenceGraph& graph);
PrecedenceGraph graph_from_json(const nlohmann::json& doc);

}  // namespace tpgs

#endif  // TPGS_TPG_HPP
