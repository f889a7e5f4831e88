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

#include "tpgs/tpg.hpp"

#include <nlohmann/json.hpp>

#include <cstdio>
#include <deque>
#include <sstream>

namespace tpgs {

void PrecedenceGraph::add_node(std::string name) {
    nodes_.insert(std::move(name));
}

void PrecedenceGraph::add_edge(const std::string& from, const std::string& to,
                               std::int64_t support) {
    if (from == to) throw std::invalid_argument("precedence graph rejects self-loop on " + from);
    if (to == kStartNode) throw std::invalid_argument("START cannot have in-edges");
    if (support <= 0) throw std::invalid_argument("edge support must be positive");
    nodes_.insert(from);
    nodes_.insert(to);
    support_[EdgeKey{from, to}] += support;
}

void PrecedenceGraph::set_denominator(std::int64_t denominator) {
    if (denominator <= 0) throw std::invalid_argument("denominator must be positive");
    denominator_ = denominator;
}

bool PrecedenceGraph::has_node(std::string_view name) const {
    return nodes_.find(std::string(name)) != nodes_.end();
}

bool PrecedenceGraph::has_edge(const std::string& from, const std::string& to) const {
    return support_.count(EdgeKey{from, to}) != 0;
}

std::int64_t PrecedenceGraph::support(const std::string& from, const std::string& to) const {
    auto it = support_.find(EdgeKey{from, to});
    return it == support_.end() ? 0 : it->second;
}

Rational PrecedenceGraph::weight(const std::string& from, const std::string& to) const {
    return Rational(support(from, to), denominator_);
}

std::vector<std::pair<std::string, Rational>> PrecedenceGraph::successors(
    const std::string& from) const {
    std::vector<std::pair<std::string, Rational>> out;
    for (auto it = support_.lower_bound(EdgeKey{from, ""}); it != support_.end(); ++it) {
        if (it->first.from != from) break;
        out.emplace_back(it->first.to, Rational(it->second, denominator_));
    }
    return out;
}

PrecedenceGraph extract_tpg(const Problem& problem, const std::vector<std::string>& trace,
                            const TheoremLibrary& library) {
    PrecedenceGraph graph;
    graph.add_node(std::string(kStartNode));

    SymbolicState state = problem.initial_state();
    for (std::size_t t = 1; t <= trace.size(); ++t) {
        const std::string& name = trace[t - 1];
        const TheoremSchema* schema = library.find(name);
        if (schema == nullptr) {
            throw ReplayError("trace step " + std::to_string(t) + " names unknown theorem " + name,
                              static_cast<int>(t));
        }
        ApplicationOutcome outcome = apply_theorem(state, *schema, static_cast<int>(t));
        if (outcome.kind == OutcomeKind::PremiseUnsatisfied) {
            throw ReplayError("trace step " + std::to_string(t) + " (" + name +
                                  ") has unsatisfied premises",
                              static_cast<int>(t));
        }
        graph.add_node(name);
        for (const Predicate& fact : outcome.consumed_facts) {
            const int birth = state.birth(fact);
            const std::string& producer =
                birth == 0 ? std::string(kStartNode) : trace[static_cast<std::size_t>(birth) - 1];
            if (producer == name) continue;  // self-dependency collapses
            if (!graph.has_edge(producer, name)) graph.add_edge(producer, name);
        }
    }
    return graph;
}

PrecedenceGraph fuse_graphs(const std::vector<const PrecedenceGraph*>& graphs, std::int64_t K) {
    if (K == 0) throw std::invalid_argument("cannot fuse zero graphs");
    if (K != static_cast<std::int64_t>(graphs.size())) {
        throw std::invalid_argument("fusion count K must equal the number of graphs");
    }
    PrecedenceGraph fused;
    fused.set_denominator(K);
    for (const PrecedenceGraph* graph : graphs) {
        for (const std::string& node : graph->nodes()) fused.add_node(node);
        for (const auto& [edge, support] : graph->edges()) {
            (void)support;  // presence per input graph, not input support
            fused.add_edge(edge.from, edge.to, 1);
        }
    }
    return fused;
}

PrecedenceGraph fuse_graphs(const std::vector<PrecedenceGraph>& graphs, std::int64_t K) {
    std::vector<const PrecedenceGraph*> pointers;
    pointers.reserve(graphs.size());
    for (const PrecedenceGraph& graph : graphs) pointers.push_back(&graph);
    return fuse_graphs(pointers, K);
}

std::set<std::string> descendants(const PrecedenceGraph& graph, const std::string& node) {
    if (!graph.has_node(node)) throw std::out_of_range("unknown graph node: " + node);
    std::set<std::string> reached;
    std::deque<std::string> frontier{node};
    while (!frontier.empty()) {
        std::string current = std::move(frontier.front());
        frontier.pop_front();
        for (const auto& [next, weight] : graph.successors(current)) {
            (void)weight;
            if (reached.insert(next).second) frontier.push_back(next);
        }
    }
    return reached;
}

std::string export_dot(const PrecedenceGraph& graph) {
    std::ostringstream out;
    out << "digraph tpg {\n";
    for (const std::string& node : graph.nodes()) {
        out << "  \"" << node << "\";\n";
    }
    for (const auto& [edge, support] : graph.edges()) {
        char label[32];
        std::snprintf(label, sizeof(label), "%.3f",
                      to_double(Rational(support, graph.denominator())));
        out << "  \"" << edge.from << "\" -> \"" << edge.to << "\" [label=\"" << label << "\"];\n";
    }
    out << "}\n";
    return out.str();
}

nlohmann::json graph_to_json(const PrecedenceGraph& graph) {
    nlohmann::json doc;
    doc["nodes"] = graph.nodes();
    doc["denominator"] = graph.denominator();
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& [edge, support] : graph.edges()) {
        edges.push_back({{"from", edge.from}, {"to", edge.to}, {"support", support}});
    }
    doc["edges"] = std::move(edges);
    return doc;
}

PrecedenceGraph graph_from_json(const nlohmann::json& doc) {
    PrecedenceGraph graph;
    graph.set_denominator(doc.value("denominator", std::int64_t{1}));
    for (const auto& node : doc.value("nodes", nlohmann::json::array())) {
        graph.add_node(node.get<std::string>());
    }
    for (const auto& edge : doc.value("edges", nlohmann::json::array())) {
        graph.add_edge(edge.at("from").get<std::string>(), edge.at("to").get<std::string>(),
                       edge.at("support").get<std::int64_t>());
    }
    return graph;
}

}  // namespace tpgs
