#pragma once
// Time-aware re-ranking: semantic candidates rescored by their temporal
// distance from the query window.

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "chronos/date.hpp"
#include "chronos/embedding.hpp"
#include "chronos/knowledge_store.hpp"

namespace chronos {

struct RetrievalParams {
    double alpha = 0.75;            // weight of semantic similarity
    double tau_days = 180.0;        // decay constant
    std::size_t candidate_pool = 50;  // N, semantic pool per entity
    std::size_t top_n = 4;          // n, kept per entity
    std::size_t pooled_cap = 0;     // cap on the multi-entity union; 0 = none

    void validate() const {
        if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("retrieval.alpha must lie in [0, 1]");
        if (!(tau_days > 0.0)) throw std::invalid_argument("retrieval.tau_days must be positive");
        if (candidate_pool < 1) throw std::invalid_argument("retrieval.candidate_pool must be >= 1");
        if (top_n < 1) throw std::invalid_argument("retrieval.top_n must be >= 1");
        if (top_n > candidate_pool) throw std::invalid_argument("retrieval.top_n must not exceed retrieval.candidate_pool");
    }
};

struct ScoredCandidate {
    KnowledgeQuadruple quad;
    double sim = 0.0;
    double delta_days = 0.0;
    double time_score = 1.0;
    double score = 0.0;
    std::size_t position = 0;
};

/// Days from t to the nearest window boundary; zero inside the window.
inline double temporal_distance(Date t, const TimeWindow& window) {
    if (t < window.start) return static_cast<double>(window.start - t);
    if (t > window.end) return static_cast<double>(t - window.end);
    return 0.0;
}

inline double time_score(double delta_days, double tau_days) {
    if (delta_days < 0.0) throw std::invalid_argument("delta_days must be non-negative");
    if (!(tau_days > 0.0)) throw std::invalid_argument("tau_days must be positive");
    return std::exp(-delta_days / tau_days);
}

inline double combined_score(double sim, double tscore, double alpha) {
    return alpha * sim + (1.0 - alpha) * tscore;
}

/// Ranking order shared by retrieve and retrieve_multi.
inline bool candidate_before(const ScoredCandidate& a, const ScoredCandidate& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.delta_days != b.delta_days) return a.delta_days < b.delta_days;
    return a.position < b.position;
}

inline ScoredCandidate score_neighbor(const Neighbor& nb, const TimeWindow& window,
                                      const RetrievalParams& params) {
    ScoredCandidate c;
    c.quad = nb.quad;
    c.sim = nb.sim;
    c.position = nb.position;
    c.delta_days = temporal_distance(nb.quad.timestamp, window);
    c.time_score = time_score(c.delta_days, params.tau_days);
    c.score = combined_score(c.sim, c.time_score, params.alpha);
    return c;
}

/// Top-N by similarity, rescored, top-n by unified score.
inline std::vector<ScoredCandidate> retrieve(const VectorIndex& index, std::string_view entity_query,
                                             const TimeWindow& window, const RetrievalParams& params) {
    params.validate();
    std::vector<ScoredCandidate> out;
    for (const auto& nb : nearest(index, entity_query, params.candidate_pool)) {
        out.push_back(score_neighbor(nb, window, params));
    }
    std::sort(out.begin(), out.end(), candidate_before);
    if (out.size() > params.top_n) out.resize(params.top_n);
    return out;
}

/// Pure-semantic ranking in the same shape, used when time-aware scoring is
/// switched off. Scores equal sims; temporal fields are still reported.
inline std::vector<ScoredCandidate> retrieve_semantic(const VectorIndex& index,
                                                      std::string_view query, const TimeWindow& window,
                                                      const RetrievalParams& params) {
    params.validate();
    std::vector<ScoredCandidate> out;
    for (const auto& nb : nearest(index, query, params.top_n)) {
        auto c = score_neighbor(nb, window, params);
        c.score = c.sim;
        out.push_back(std::move(c));
    }
    return out;
}

/// Per-entity retrieval unioned by store item, keeping the best score.
/// Blank entities are skipped and reported through `warnings`.
template <typename Retriever>
std::vector<ScoredCandidate> pool_entities(const std::vector<std::string>& entities,
                                           const RetrievalParams& params, Retriever&& per_entity,
                                           std::vector<std::string>* warnings) {
    std::map<std::size_t, ScoredCandidate> best;
    std::vector<std::string> seen;
    for (const auto& e : entities) {
        const auto norm = normalize_entity(e);
        if (norm.empty()) {
            if (warnings) warnings->push_back("skipped blank entity in retrieval");
            continue;
        }
        if (std::find(seen.begin(), seen.end(), norm) != seen.end()) continue;
        seen.push_back(norm);
        for (auto& c : per_entity(e)) {
            auto it = best.find(c.position);
            if (it == best.end()) {
                best.emplace(c.position, std::move(c));
            } else if (candidate_before(c, it->second)) {
                it->second = std::move(c);
            }
        }
    }
    std::vector<ScoredCandidate> out;
    out.reserve(best.size());
    for (auto& [_, c] : best) out.push_back(std::move(c));
    std::sort(out.begin(), out.end(), candidate_before);
    if (params.pooled_cap > 0 && out.size() > params.pooled_cap) out.resize(params.pooled_cap);
    return out;
}

inline std::vector<ScoredCandidate> retrieve_multi(const VectorIndex& index,
                                                   const std::vector<std::string>& entities,
                                                   const TimeWindow& window, const RetrievalParams& params,
                                                   std::vector<std::string>* warnings = nullptr) {
    params.validate();
    return pool_entities(entities, params,
                         [&](const std::string& e) { return retrieve(index, e, window, params); },
                         warnings);
}

}  // namespace chronos
