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

#ifndef TPGS_RETRIEVAL_HPP
#define TPGS_RETRIEVAL_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "tpgs/formal.hpp"
#include "tpgs/rational.hpp"
#include "tpgs/theorem.hpp"
#include "tpgs/tpg.hpp"

namespace tpgs {

inline constexpr int kDefaultEmbedDim = 256;
inline constexpr std::int64_t kDefaultRetrievalK = 200;
inline constexpr std::int64_t kDefaultPoolSize = 30;  // 0 everywhere below = unbounded

enum class EmbedMode { Hashed, Precomputed };

struct EmbeddingSidecar {
    int dim = 0;
    std::map<std::string, std::vector<double>> vectors;
};

EmbeddingSidecar sidecar_from_json(const nlohmann::json& doc);
nlohmann::json sidecar_to_json(const EmbeddingSidecar& sidecar);
EmbeddingSidecar load_sidecar(const std::string& path);
void save_sidecar(const std::string& path, const EmbeddingSidecar& sidecar);

// Deterministic feature hash of text tokens, premise predicate names, measure
// kinds, and the goal kind; signed buckets, L2-normalized.
std::vector<double> embed_hashed(const Problem& problem, int dim = kDefaultEmbedDim);

// Dispatching variant; Precomputed requires the id in the sidecar with
// matching dimension.
std::vector<double> embed(const Problem& problem, EmbedMode mode,
                          const EmbeddingSidecar* sidecar = nullptr, int dim = kDefaultEmbedDim);

struct IndexEntry {
    std::string id;
    std::vector<double> embedding;
    std::set<std::string> theorems;  // distinct theorems used by the stored solution
    PrecedenceGraph graph;
};

class ProblemIndex {
  public:
    // Validates: unique id, consistent dim, graph nodes within theorems + START.
    void add(IndexEntry entry);

    std::size_t size() const { return entries_.size(); }
    int dim() const { return dim_; }
    const std::vector<IndexEntry>& entries() const { return entries_; }
    const IndexEntry* find(std::string_view id) const;
    const IndexEntry& at(std::string_view id) const;  // throws std::out_of_range

  private:
    int dim_ = 0;
    std::vector<IndexEntry> entries_;
    std::map<std::string, std::size_t, std::less<>> by_id_;
};

// Indexes every problem (all must carry traces): embedding + theorem set +
// extracted precedence graph.
ProblemIndex build_index(const std::vector<Problem>& corpus, const TheoremLibrary& library,
                         EmbedMode mode = EmbedMode::Hashed,
                         const EmbeddingSidecar* sidecar = nullptr, int dim = kDefaultEmbedDim);

nlohmann::json index_to_json(const ProblemIndex& index);
ProblemIndex index_from_json(const nlohmann::json& doc);
ProblemIndex load_index(const std::string& path);
void save_index(const std::string& path, const ProblemIndex& index);

// Exact brute-force top-K by cosine similarity, descending; ties broken by
// ascending id. Requires 1 <= K <= index size.
std::vector<std::string> knn(const ProblemIndex& index, const std::vector<double>& query,
                             std::int64_t K);

struct PoolEntry {
    std::string name;
    std::int64_t frequency;  // number of neighbors whose theorem set contains name
    bool operator==(const PoolEntry&) const = default;
};

struct CandidatePool {
    std::vector<PoolEntry> entries;  // frequency descending, ties by ascending name

    bool contains(std::string_view name) const;
    std::vector<std::string> names() const;
};

struct QueryPrior {
    CandidatePool pool;
    PrecedenceGraph graph;
    std::vector<std::string> neighbor_ids;
    std::int64_t k_used = 0;
};

// pool: union of neighbor theorem sets ranked by neighbor frequency, truncated
// to n_pool (0 = unbounded). graph: fusion of the neighbors' precedence graphs
// with denominator K (must equal the neighbor count).
QueryPrior build_query_prior(const ProblemIndex& index, const std::vector<std::string>& neighbors,
                             std::int64_t K, std::int64_t n_pool);

struct CoverageResult {
    Rational c_prob{0};  // fraction of problems whose full theorem set is pooled
    Rational c_th{0};    // pooled fraction of distinct ground-truth theorems
};

// Embeds each test problem (hashed), retrieves K neighbors, builds the pool,
// and accumulates both coverage metrics. Every test problem needs a trace.
CoverageResult coverage(const ProblemIndex& index, const std::vector<Problem>& testset,
                        std::int64_t K, std::int64_t n_pool);

}  // namespace tpgs

#endif  // TPGS_RETRIEVAL_HPP
