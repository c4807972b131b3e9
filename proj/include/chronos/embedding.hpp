#pragma once
// Dense text embeddings: provider contract, a deterministic hashing embedder,
// and a brute-force cosine index over a quadruple store.

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "chronos/knowledge_store.hpp"

namespace chronos {

class EmbeddingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct EmbeddingVector {
    std::vector<double> values;

    std::size_t dim() const { return values.size(); }
    double norm() const {
        double s = 0.0;
        for (double v : values) s += v * v;
        return std::sqrt(s);
    }
    friend bool operator==(const EmbeddingVector&, const EmbeddingVector&) = default;
};

class EmbeddingProvider {
public:
    virtual ~EmbeddingProvider() = default;
    virtual std::string name() const = 0;
    virtual std::size_t dim() const = 0;
    virtual EmbeddingVector embed(std::string_view text) const = 0;

    virtual std::vector<EmbeddingVector> embed_batch(std::span<const std::string> texts) const {
        std::vector<EmbeddingVector> out;
        out.reserve(texts.size());
        for (const auto& t : texts) out.push_back(embed(t));
        return out;
    }
};

/// 64-bit FNV-1a. The offset basis is the fixed seed of the local embedder.
constexpr std::uint64_t fnv1a64(std::string_view data,
                                std::uint64_t seed = 0xcbf29ce484222325ULL) {
    std::uint64_t h = seed;
    for (char c : data) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

/// Lowercased maximal runs of ASCII letters and digits.
inline std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (char c : text) {
        auto u = static_cast<unsigned char>(c);
        if (u < 0x80 && std::isalnum(u)) {
            cur.push_back(static_cast<char>(std::tolower(u)));
        } else if (!cur.empty()) {
            tokens.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

/// Signed feature hashing: bucket = h mod dim, sign = bit 63 of h.
inline EmbeddingVector embed_local(std::string_view text, std::size_t dim) {
    if (dim < 16) throw EmbeddingError("local embedder needs dim >= 16, got " + std::to_string(dim));
    EmbeddingVector v{std::vector<double>(dim, 0.0)};
    for (const auto& tok : tokenize(text)) {
        const std::uint64_t h = fnv1a64(tok);
        v.values[h % dim] += (h >> 63) ? -1.0 : 1.0;
    }
    const double n = v.norm();
    if (n > 0.0) {
        for (double& x : v.values) x /= n;
    }
    return v;
}

class LocalEmbedder final : public EmbeddingProvider {
public:
    explicit LocalEmbedder(std::size_t dim = 256) : dim_(dim) {
        if (dim < 16) throw EmbeddingError("local embedder needs dim >= 16");
    }
    std::string name() const override { return "local-fnv1a64"; }
    std::size_t dim() const override { return dim_; }
    EmbeddingVector embed(std::string_view text) const override { return embed_local(text, dim_); }

private:
    std::size_t dim_;
};

/// dot(a,b)/(|a||b|), or 0 when either norm is zero.
inline double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.dim() != b.dim()) {
        throw EmbeddingError("dimension mismatch: " + std::to_string(a.dim()) + " vs " +
                             std::to_string(b.dim()));
    }
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        dot += a.values[i] * b.values[i];
        na += a.values[i] * a.values[i];
        nb += b.values[i] * b.values[i];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return std::clamp(dot / (std::sqrt(na) * std::sqrt(nb)), -1.0, 1.0);
}

/// Negative cosine carries no relevance.
inline double clamp_similarity(double c) { return std::clamp(c, 0.0, 1.0); }

struct Neighbor {
    KnowledgeQuadruple quad;
    double sim = 0.0;
    std::size_t position = 0;  // store position
};

/// One vector per store item, in store order. Immutable after build; safe to
/// query from many threads.
class VectorIndex {
public:
    VectorIndex() = default;
    VectorIndex(std::shared_ptr<const EmbeddingProvider> provider,
                std::vector<KnowledgeQuadruple> items, std::vector<EmbeddingVector> vectors)
        : provider_(std::move(provider)), items_(std::move(items)), vectors_(std::move(vectors)) {}

    std::size_t size() const { return vectors_.size(); }
    bool empty() const { return vectors_.empty(); }
    const std::vector<EmbeddingVector>& vectors() const { return vectors_; }
    const std::vector<KnowledgeQuadruple>& items() const { return items_; }
    const EmbeddingProvider& provider() const { return *provider_; }
    std::shared_ptr<const EmbeddingProvider> provider_ptr() const { return provider_; }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["provider"] = provider_ ? provider_->name() : "";
        j["dim"] = provider_ ? provider_->dim() : 0;
        auto& arr = j["vectors"] = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < vectors_.size(); ++i) {
            arr.push_back({{"position", i}, {"text", items_[i].text()}, {"values", vectors_[i].values}});
        }
        return j;
    }

private:
    std::shared_ptr<const EmbeddingProvider> provider_;
    std::vector<KnowledgeQuadruple> items_;
    std::vector<EmbeddingVector> vectors_;
};

/// Embeds every item as "subject relation object". Provider failures are
/// rethrown naming the first item that fails on its own.
inline VectorIndex build_index(const QuadrupleStore& store,
                               std::shared_ptr<const EmbeddingProvider> provider,
                               std::size_t batch_size = 64) {
    if (!provider) throw EmbeddingError("no embedding provider configured");
    std::vector<EmbeddingVector> vectors;
    vectors.reserve(store.size());
    const auto& items = store.items();
    for (std::size_t begin = 0; begin < items.size(); begin += batch_size) {
        const std::size_t end = std::min(items.size(), begin + batch_size);
        std::vector<std::string> texts;
        for (std::size_t i = begin; i < end; ++i) texts.push_back(items[i].text());
        std::vector<EmbeddingVector> batch;
        try {
            batch = provider->embed_batch(texts);
            if (batch.size() != texts.size()) throw EmbeddingError("provider returned wrong batch size");
        } catch (const std::exception& batch_error) {
            batch.clear();
            for (std::size_t i = begin; i < end; ++i) {
                try {
                    batch.push_back(provider->embed(items[i].text()));
                } catch (const std::exception& e) {
                    throw EmbeddingError("embedding failed for store item " + std::to_string(i) +
                                         " \"" + items[i].text() + "\": " + e.what());
                }
            }
        }
        for (auto& v : batch) {
            if (v.dim() != provider->dim()) {
                throw EmbeddingError("provider " + provider->name() + " returned dim " +
                                     std::to_string(v.dim()) + ", expected " +
                                     std::to_string(provider->dim()));
            }
            vectors.push_back(std::move(v));
        }
    }
    return VectorIndex(std::move(provider), items, std::move(vectors));
}

/// Brute-force scan. Sims are clamped cosines; ordered by sim descending, then
/// store position ascending.
inline std::vector<Neighbor> nearest(const VectorIndex& index, std::string_view query_text,
                                     std::size_t n) {
    if (n == 0) throw EmbeddingError("nearest needs N >= 1");
    if (index.empty()) return {};
    const EmbeddingVector q = index.provider().embed(query_text);
    std::vector<Neighbor> all;
    all.reserve(index.size());
    for (std::size_t i = 0; i < index.size(); ++i) {
        all.push_back({index.items()[i], clamp_similarity(cosine_similarity(q, index.vectors()[i])), i});
    }
    const std::size_t k = std::min(n, all.size());
    std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(k), all.end(),
                      [](const Neighbor& a, const Neighbor& b) {
                          if (a.sim != b.sim) return a.sim > b.sim;
                          return a.position < b.position;
                      });
    all.resize(k);
    return all;
}

}  // namespace chronos
