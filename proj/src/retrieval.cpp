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

#include "tpgs/retrieval.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>

#include "tpgs/kernels.hpp"

namespace tpgs {

namespace {

constexpr const char* kSidecarFormat = "tpgs-embeddings";
constexpr const char* kIndexFormat = "tpgs-index";
constexpr int kFileVersion = 1;

std::uint64_t fnv1a(std::string_view text) {
    std::uint64_t hash = 14695981039346656037ULL;
    for (char c : text) {
        hash ^= static_cast<unsigned char>(c);
        hash *= 1099511628211ULL;
    }
    return hash;
}

void hash_feature(std::vector<double>& accum, std::string_view feature) {
    const std::uint64_t h = fnv1a(feature);
    const std::size_t bucket = h % accum.size();
    const double sign = ((h >> 32) & 1U) != 0 ? 1.0 : -1.0;
    accum[bucket] += sign;
}

void check_finite(const std::string& id, const std::vector<double>& vec) {
    for (double v : vec) {
        if (!std::isfinite(v)) {
            throw SchemaError("embedding for " + id + " has non-finite entries");
        }
    }
}

}  // namespace

EmbeddingSidecar sidecar_from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || doc.value("format", std::string{}) != kSidecarFormat) {
        throw SchemaError("not an embedding sidecar file (missing format tag)");
    }
    if (doc.value("version", 0) != kFileVersion) {
        throw SchemaError("unsupported embedding sidecar version");
    }
    EmbeddingSidecar sidecar;
    sidecar.dim = doc.at("dim").get<int>();
    if (sidecar.dim <= 0) throw SchemaError("embedding dim must be positive");
    for (const auto& [id, values] : doc.at("vectors").items()) {
        std::vector<double> vec = values.get<std::vector<double>>();
        if (static_cast<int>(vec.size()) != sidecar.dim) {
            throw SchemaError("embedding for " + id + " has wrong dimension");
        }
        check_finite(id, vec);
        sidecar.vectors.emplace(id, std::move(vec));
    }
    return sidecar;
}

nlohmann::json sidecar_to_json(const EmbeddingSidecar& sidecar) {
    nlohmann::json doc;
    doc["format"] = kSidecarFormat;
    doc["version"] = kFileVersion;
    doc["dim"] = sidecar.dim;
    nlohmann::json vectors = nlohmann::json::object();
    for (const auto& [id, vec] : sidecar.vectors) vectors[id] = vec;
    doc["vectors"] = std::move(vectors);
    return doc;
}

EmbeddingSidecar load_sidecar(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open embedding sidecar: " + path);
    nlohmann::json doc;
    in >> doc;
    return sidecar_from_json(doc);
}

void save_sidecar(const std::string& path, const EmbeddingSidecar& sidecar) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write embedding sidecar: " + path);
    out << sidecar_to_json(sidecar).dump(2) << '\n';
}

std::vector<double> embed_hashed(const Problem& problem, int dim) {
    if (dim <= 0) throw std::invalid_argument("embedding dim must be positive");
    std::vector<double> accum(static_cast<std::size_t>(dim), 0.0);

    // Lowercased alphanumeric runs from the free text.
    std::string token;
    auto flush = [&] {
        if (!token.empty()) {
            hash_feature(accum, "text:" + token);
            token.clear();
        }
    };
    for (char c : problem.text) {
        if (std::isalnum(static_cast<unsigned char>(c))) {
            token += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        } else {
            flush();
        }
    }
    flush();

    for (const Predicate& fact : problem.premise_facts) {
        hash_feature(accum, "pred:" + fact.name);
    }
    for (const MeasureBinding& binding : problem.premise_measures) {
        hash_feature(accum, "meas:" + binding.kind);
    }
    if (problem.goal.is_predicate()) {
        hash_feature(accum, "goal:" + problem.goal.predicate().name);
    } else {
        hash_feature(accum, "goal:" + problem.goal.measure().kind);
    }

    const double norm = std::sqrt(kernels::dot_scalar(accum.data(), accum.data(), accum.size()));
    if (norm > 0.0) {
        for (double& v : accum) v /= norm;
    }
    return accum;
}

std::vector<double> embed(const Problem& problem, EmbedMode mode, const EmbeddingSidecar* sidecar,
                          int dim) {
    if (mode == EmbedMode::Hashed) return embed_hashed(problem, dim);
    if (sidecar == nullptr) {
        throw std::invalid_argument("precomputed embedding mode requires a sidecar");
    }
    auto it = sidecar->vectors.find(problem.id);
    if (it == sidecar->vectors.end()) {
        throw std::out_of_range("no precomputed embedding for problem " + problem.id);
    }
    if (sidecar->dim != dim) {
        throw std::invalid_argument("sidecar dim " + std::to_string(sidecar->dim) +
                                    " does not match requested dim " + std::to_string(dim));
    }
    return it->second;
}

void ProblemIndex::add(IndexEntry entry) {
    if (entry.id.empty()) throw SchemaError("index entry needs an id");
    if (by_id_.count(entry.id) != 0) throw SchemaError("duplicate index entry: " + entry.id);
    if (entry.embedding.empty()) throw SchemaError("index entry " + entry.id + " has no embedding");
    check_finite(entry.id, entry.embedding);
    if (dim_ == 0) {
        dim_ = static_cast<int>(entry.embedding.size());
    } else if (dim_ != static_cast<int>(entry.embedding.size())) {
        throw SchemaError("index entry " + entry.id + " has dimension " +
                          std::to_string(entry.embedding.size()) + ", index has " +
                          std::to_string(dim_));
    }
    for (const std::string& node : entry.graph.nodes()) {
        if (node != kStartNode && entry.theorems.count(node) == 0) {
            throw SchemaError("index entry " + entry.id + " has graph node " + node +
                              " outside its theorem set");
        }
    }
    by_id_.emplace(entry.id, entries_.size());
    entries_.push_back(std::move(entry));
}

const IndexEntry* ProblemIndex::find(std::string_view id) const {
    auto it = by_id_.find(id);
    return it == by_id_.end() ? nullptr : &entries_[it->second];
}

const IndexEntry& ProblemIndex::at(std::string_view id) const {
    const IndexEntry* entry = find(id);
    if (entry == nullptr) throw std::out_of_range("unknown index entry: " + std::string(id));
    return *entry;
}

ProblemIndex build_index(const std::vector<Problem>& corpus, const TheoremLibrary& library,
                         EmbedMode mode, const EmbeddingSidecar* sidecar, int dim) {
    ProblemIndex index;
    for (const Problem& problem : corpus) {
        if (!problem.trace) {
            throw SchemaError("cannot index problem " + problem.id + " without a trace");
        }
        IndexEntry entry;
        entry.id = problem.id;
        entry.embedding = embed(problem, mode, sidecar, dim);
        entry.theorems.insert(problem.trace->begin(), problem.trace->end());
        entry.graph = extract_tpg(problem, *problem.trace, library);
        index.add(std::move(entry));
    }
    return index;
}

nlohmann::json index_to_json(const ProblemIndex& index) {
    nlohmann::json doc;
    doc["format"] = kIndexFormat;
    doc["version"] = kFileVersion;
    doc["dim"] = index.dim();
    nlohmann::json entries = nlohmann::json::array();
    for (const IndexEntry& entry : index.entries()) {
        entries.push_back({{"id", entry.id},
                           {"embedding", entry.embedding},
                           {"theorems", entry.theorems},
                           {"tpg", graph_to_json(entry.graph)}});
    }
    doc["entries"] = std::move(entries);
    return doc;
}

ProblemIndex index_from_json(const nlohmann::json& doc) {
    if (!doc.is_object() || doc.value("format", std::string{}) != kIndexFormat) {
        throw SchemaError("not an index file (missing format tag)");
    }
    if (doc.value("version", 0) != kFileVersion) {
        throw SchemaError("unsupported index version");
    }
    ProblemIndex index;
    for (const auto& record : doc.at("entries")) {
        IndexEntry entry;
        entry.id = record.at("id").get<std::string>();
        entry.embedding = record.at("embedding").get<std::vector<double>>();
        for (const auto& name : record.at("theorems")) {
            entry.theorems.insert(name.get<std::string>());
        }
        entry.graph = graph_from_json(record.at("tpg"));
        index.add(std::move(entry));
    }
    if (index.dim() != doc.at("dim").get<int>()) {
        throw SchemaError("index dim field does not match entries");
    }
    return index;
}

ProblemIndex load_index(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open index file: " + path);
    nlohmann::json doc;
    in >> doc;
    return index_from_json(doc);
}

void save_index(const std::string& path, const ProblemIndex& index) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write index file: " + path);
    out << index_to_json(index).dump() << '\n';
}

std::vector<std::string> knn(const ProblemIndex& index, const std::vector<double>& query,
                             std::int64_t K) {
    if (index.size() == 0) throw std::invalid_argument("knn over an empty index");
    if (K < 1 || K > static_cast<std::int64_t>(index.size())) {
        throw std::invalid_argument("knn K=" + std::to_string(K) + " out of range for index size " +
                                    std::to_string(index.size()));
    }
    if (static_cast<int>(query.size()) != index.dim()) {
        throw std::invalid_argument("query dimension does not match index");
    }

    std::vector<std::pair<double, const std::string*>> scored;
    scored.reserve(index.size());
    for (const IndexEntry& entry : index.entries()) {
        const double sim =
            kernels::cosine(query.data(), entry.embedding.data(), query.size());
        scored.emplace_back(sim, &entry.id);
    }
    std::sort(scored.begin(), scored.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return *a.second < *b.second;
    });
    std::vector<std::string> out;
    out.reserve(static_cast<std::size_t>(K));
    for (std::int64_t i = 0; i < K; ++i) out.push_back(*scored[static_cast<std::size_t>(i)].second);
    return out;
}

bool CandidatePool::contains(std::string_view name) const {
    return std::any_of(entries.begin(), entries.end(),
                       [&](const PoolEntry& entry) { return entry.name == name; });
}

std::vector<std::string> CandidatePool::names() const {
    std::vector<std::string> out;
    out.reserve(entries.size());
    for (const PoolEntry& entry : entries) out.push_back(entry.name);
    return out;
}

QueryPrior build_query_prior(const ProblemIndex& index, const std::vector<std::string>& neighbors,
                             std::int64_t K, std::int64_t n_pool) {
    std::map<std::string, std::int64_t> frequency;
    std::vector<const PrecedenceGraph*> graphs;
    graphs.reserve(neighbors.size());
    for (const std::string& id : neighbors) {
        const IndexEntry& entry = index.at(id);
        for (const std::string& name : entry.theorems) ++frequency[name];
        graphs.push_back(&entry.graph);
    }

    QueryPrior prior;
    prior.neighbor_ids = neighbors;
    prior.k_used = K;
    prior.graph = fuse_graphs(graphs, K);

    prior.pool.entries.reserve(frequency.size());
    for (const auto& [name, count] : frequency) {
        prior.pool.entries.push_back(PoolEntry{name, count});
    }
    std::stable_sort(prior.pool.entries.begin(), prior.pool.entries.end(),
                     [](const PoolEntry& a, const PoolEntry& b) {
                         if (a.frequency != b.frequency) return a.frequency > b.frequency;
                         return a.name < b.name;
                     });
    if (n_pool > 0 && static_cast<std::int64_t>(prior.pool.entries.size()) > n_pool) {
        prior.pool.entries.resize(static_cast<std::size_t>(n_pool));
    }
    return prior;
}

CoverageResult coverage(const ProblemIndex& index, const std::vector<Problem>& testset,
                        std::int64_t K, std::int64_t n_pool) {
    if (testset.empty()) throw std::invalid_argument("coverage over an empty test set");
    std::int64_t covered = 0;
    std::int64_t pooled_theorems = 0;
    std::int64_t total_theorems = 0;
    for (const Problem& problem : testset) {
        if (!problem.trace) {
            throw SchemaError("coverage requires a trace for problem " + problem.id);
        }
        const std::vector<double> query = embed_hashed(problem, index.dim());
        const QueryPrior prior = build_query_prior(index, knn(index, query, K), K, n_pool);

        std::set<std::string> required(problem.trace->begin(), problem.trace->end());
        std::int64_t hit = 0;
        for (const std::string& name : required) {
            if (prior.pool.contains(name)) ++hit;
        }
        if (hit == static_cast<std::int64_t>(required.size())) ++covered;
        pooled_theorems += hit;
        total_theorems += static_cast<std::int64_t>(required.size());
    }
    CoverageResult result;
    result.c_prob = Rational(covered, static_cast<std::int64_t>(testset.size()));
    result.c_th = total_theorems == 0 ? Rational(0) : Rational(pooled_theorems, total_theorems);
    return result;
}

}  // namespace tpgs
