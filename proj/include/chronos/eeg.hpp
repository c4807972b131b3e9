#pragma once
// Event Evolution Graph: event nodes on a global timeline (temporal edges)
// plus one chronological chain per entity (entity edges).
//
// Construction runs in three stages:
//   I  build_initial    retrieved events, ordered
//   F  merge_history    + reconstructed historical events
//      augment          + augmented events (stage stays F)
//   A  link_entities    entity chains
//
// Nodes keep insertion order and node_id == index. Chronological order is
// (timestamp, node_id), so on equal timestamps retrieved nodes precede
// historical ones, which precede augmented ones.

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "chronos/date.hpp"
#include "chronos/knowledge_store.hpp"

namespace chronos {

class GraphError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Provenance { retrieved, historical, augmented };

inline const char* to_string(Provenance p) {
    switch (p) {
        case Provenance::retrieved: return "retrieved";
        case Provenance::historical: return "historical";
        case Provenance::augmented: return "augmented";
    }
    return "?";
}

inline std::optional<Provenance> provenance_from_string(std::string_view s) {
    if (s == "retrieved") return Provenance::retrieved;
    if (s == "historical") return Provenance::historical;
    if (s == "augmented") return Provenance::augmented;
    return std::nullopt;
}

enum class GraphStage { I, F, A };

inline const char* to_string(GraphStage s) {
    switch (s) {
        case GraphStage::I: return "I";
        case GraphStage::F: return "F";
        case GraphStage::A: return "A";
    }
    return "?";
}

using NodeId = std::size_t;
using Edge = std::pair<NodeId, NodeId>;

struct EventNode {
    KnowledgeQuadruple quad;
    Provenance provenance = Provenance::retrieved;
    NodeId node_id = 0;

    friend bool operator==(const EventNode&, const EventNode&) = default;
};

class EventGraph {
public:
    const std::vector<EventNode>& nodes() const { return nodes_; }
    const std::vector<Edge>& temporal_edges() const { return temporal_edges_; }
    /// Normalized entity -> node ids in chronological order.
    const std::map<std::string, std::vector<NodeId>>& entity_chains() const { return entity_chains_; }
    GraphStage stage() const { return stage_; }
    std::size_t size() const { return nodes_.size(); }

    /// Consecutive pairs of one entity's chain.
    std::vector<Edge> entity_edges(const std::string& entity) const {
        std::vector<Edge> out;
        auto it = entity_chains_.find(normalize_entity(entity));
        if (it == entity_chains_.end()) return out;
        for (std::size_t i = 1; i < it->second.size(); ++i) out.emplace_back(it->second[i - 1], it->second[i]);
        return out;
    }

    /// Node ids ordered by (timestamp, node_id).
    std::vector<NodeId> chronological() const {
        std::vector<NodeId> ids(nodes_.size());
        std::iota(ids.begin(), ids.end(), NodeId{0});
        std::sort(ids.begin(), ids.end(), [&](NodeId a, NodeId b) { return earlier(a, b); });
        return ids;
    }

    /// First spelling seen for a normalized entity, in chronological order.
    std::string display_name(const std::string& normalized) const {
        for (NodeId id : chronological()) {
            const auto& q = nodes_[id].quad;
            if (normalize_entity(q.subject) == normalized) return q.subject;
            if (normalize_entity(q.object) == normalized) return q.object;
        }
        return normalized;
    }

    friend bool operator==(const EventGraph&, const EventGraph&) = default;

private:
    friend EventGraph build_initial(const std::vector<KnowledgeQuadruple>&);
    friend EventGraph merge_history(EventGraph, const std::vector<KnowledgeQuadruple>&);
    friend EventGraph augment(EventGraph, const std::vector<KnowledgeQuadruple>&);
    friend EventGraph link_entities(EventGraph);
    friend EventGraph parse_graph(const std::string&);

    bool earlier(NodeId a, NodeId b) const {
        const auto ta = nodes_[a].quad.timestamp, tb = nodes_[b].quad.timestamp;
        return ta != tb ? ta < tb : a < b;
    }

    /// Appends events whose key is new. Returns the number added.
    std::size_t add_nodes(const std::vector<KnowledgeQuadruple>& events, Provenance prov) {
        std::set<decltype(KnowledgeQuadruple{}.key())> keys;
        for (const auto& n : nodes_) keys.insert(n.quad.key());
        std::size_t added = 0;
        for (const auto& q : events) {
            if (!keys.insert(q.key()).second) continue;
            nodes_.push_back({q, prov, nodes_.size()});
            ++added;
        }
        return added;
    }

    void rebuild_temporal_edges() {
        temporal_edges_.clear();
        const auto order = chronological();
        for (std::size_t i = 1; i < order.size(); ++i) temporal_edges_.emplace_back(order[i - 1], order[i]);
    }

    std::vector<EventNode> nodes_;
    std::vector<Edge> temporal_edges_;
    std::map<std::string, std::vector<NodeId>> entity_chains_;
    GraphStage stage_ = GraphStage::I;
};

/// EEG-I: deduplicated events, ids assigned in chronological order (ties by
/// input order), consecutive nodes linked.
inline EventGraph build_initial(const std::vector<KnowledgeQuadruple>& events) {
    std::vector<std::size_t> order(events.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return events[a].timestamp < events[b].timestamp; });
    std::vector<KnowledgeQuadruple> sorted;
    sorted.reserve(events.size());
    for (auto i : order) sorted.push_back(events[i]);

    EventGraph g;
    g.add_nodes(sorted, Provenance::retrieved);
    g.rebuild_temporal_edges();
    g.stage_ = GraphStage::I;
    return g;
}

/// EEG-F: historical events placed on the timeline by timestamp.
inline EventGraph merge_history(EventGraph graph, const std::vector<KnowledgeQuadruple>& history) {
    if (graph.stage_ != GraphStage::I) {
        throw GraphError(std::string("merge_history expects stage I, graph is at stage ") + to_string(graph.stage_));
    }
    graph.add_nodes(history, Provenance::historical);
    graph.rebuild_temporal_edges();
    graph.stage_ = GraphStage::F;
    return graph;
}

inline EventGraph augment(EventGraph graph, const std::vector<KnowledgeQuadruple>& extra) {
    if (graph.stage_ != GraphStage::F) {
        throw GraphError(std::string("augment expects stage F, graph is at stage ") + to_string(graph.stage_));
    }
    graph.add_nodes(extra, Provenance::augmented);
    graph.rebuild_temporal_edges();
    return graph;
}

/// EEG-A: for each entity seen as subject or object, a chronological chain.
/// An event that names the entity twice appears once in its chain.
inline EventGraph link_entities(EventGraph graph) {
    graph.entity_chains_.clear();
    for (NodeId id : graph.chronological()) {
        const auto& q = graph.nodes_[id].quad;
        const auto subj = normalize_entity(q.subject);
        const auto obj = normalize_entity(q.object);
        graph.entity_chains_[subj].push_back(id);
        if (obj != subj) graph.entity_chains_[obj].push_back(id);
    }
    graph.stage_ = GraphStage::A;
    return graph;
}

// ---------------------------------------------------------------------------
// Views

struct ViewBundle {
    std::string temporal_view;                         // empty when dropped
    std::map<std::string, std::string> entity_views;  // normalized entity -> text
    bool has_temporal = true;
    bool has_entity = true;
};

inline std::string format_event_line(const EventNode& n) {
    return "[" + n.quad.timestamp.to_string() + "] " + n.quad.subject + " — " + n.quad.relation +
           " — " + n.quad.object + " (" + to_string(n.provenance) + ")";
}

namespace detail {
inline void require_stage_a(const EventGraph& g, const char* what) {
    if (g.stage() != GraphStage::A) {
        throw GraphError(std::string(what) + " needs a stage A graph, got stage " + to_string(g.stage()));
    }
}
}  // namespace detail

/// Header line followed by one line per in-window node, chronological.
inline std::string temporal_view(const EventGraph& graph, const TimeWindow& window) {
    detail::require_stage_a(graph, "temporal_view");
    std::string out = "Timeline " + window.to_string() + ":\n";
    for (NodeId id : graph.chronological()) {
        const auto& n = graph.nodes()[id];
        if (window.contains(n.quad.timestamp)) out += format_event_line(n) + "\n";
    }
    return out;
}

inline std::map<std::string, std::string> entity_views(const EventGraph& graph) {
    detail::require_stage_a(graph, "entity_views");
    std::map<std::string, std::string> out;
    for (const auto& [entity, chain] : graph.entity_chains()) {
        if (chain.empty()) continue;
        std::string text = "Entity: " + graph.display_name(entity) + "\n";
        for (NodeId id : chain) text += format_event_line(graph.nodes()[id]) + "\n";
        out.emplace(entity, std::move(text));
    }
    return out;
}

/// Every node in chronological order; the text the augmentation prompt sees.
inline std::string graph_summary(const EventGraph& graph) {
    std::string out;
    for (NodeId id : graph.chronological()) out += format_event_line(graph.nodes()[id]) + "\n";
    return out;
}

// ---------------------------------------------------------------------------
// JSON

inline std::string serialize_graph(const EventGraph& graph, int indent = 2) {
    // Members are built separately: references into an ordered_json object
    // do not survive later insertions.
    auto nodes = nlohmann::ordered_json::array();
    for (const auto& n : graph.nodes()) {
        nlohmann::ordered_json q = n.quad;
        nodes.push_back({{"node_id", n.node_id}, {"provenance", to_string(n.provenance)}, {"quad", q}});
    }
    auto te = nlohmann::ordered_json::array();
    for (const auto& [a, b] : graph.temporal_edges()) te.push_back({a, b});
    auto chains = nlohmann::ordered_json::object();
    auto ee = nlohmann::ordered_json::object();
    for (const auto& [entity, chain] : graph.entity_chains()) {
        chains[entity] = chain;
        auto edges = nlohmann::ordered_json::array();
        for (const auto& [a, b] : graph.entity_edges(entity)) edges.push_back({a, b});
        ee[entity] = std::move(edges);
    }
    nlohmann::ordered_json j;
    j["stage"] = to_string(graph.stage());
    j["nodes"] = std::move(nodes);
    j["temporal_edges"] = std::move(te);
    j["entity_chains"] = std::move(chains);
    j["entity_edges"] = std::move(ee);
    return j.dump(indent);
}

inline EventGraph parse_graph(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw GraphError(std::string("graph document is not valid JSON: ") + e.what());
    }
    auto at = [](const nlohmann::json& parent, const std::string& key, const std::string& path) -> const nlohmann::json& {
        if (!parent.is_object() || !parent.contains(key)) throw GraphError("missing " + path + "/" + key);
        return parent.at(key);
    };
    auto edge_pair = [](const nlohmann::json& e, const std::string& path, std::size_t n) {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_unsigned() || !e[1].is_number_unsigned()) {
            throw GraphError("malformed edge at " + path);
        }
        Edge edge{e[0].get<NodeId>(), e[1].get<NodeId>()};
        if (edge.first >= n || edge.second >= n) throw GraphError("edge at " + path + " references an unknown node");
        return edge;
    };

    EventGraph g;
    const auto& stage = at(j, "stage", "");
    if (stage == "I") g.stage_ = GraphStage::I;
    else if (stage == "F") g.stage_ = GraphStage::F;
    else if (stage == "A") g.stage_ = GraphStage::A;
    else throw GraphError("invalid value at /stage");

    const auto& nodes = at(j, "nodes", "");
    if (!nodes.is_array()) throw GraphError("/nodes is not an array");
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        const std::string path = "/nodes/" + std::to_string(i);
        const auto& nj = nodes[i];
        const auto& id = at(nj, "node_id", path);
        if (!id.is_number_unsigned() || id.get<NodeId>() != i) throw GraphError("invalid value at " + path + "/node_id");
        const auto& prov = at(nj, "provenance", path);
        auto p = prov.is_string() ? provenance_from_string(prov.get<std::string>()) : std::nullopt;
        if (!p) throw GraphError("invalid value at " + path + "/provenance");
        KnowledgeQuadruple q;
        try {
            q = quadruple_from_json(at(nj, "quad", path));
        } catch (const StoreError& e) {
            throw GraphError("invalid value at " + path + "/quad: " + e.what());
        }
        g.nodes_.push_back({std::move(q), *p, i});
    }

    const auto& te = at(j, "temporal_edges", "");
    if (!te.is_array()) throw GraphError("/temporal_edges is not an array");
    for (std::size_t i = 0; i < te.size(); ++i) {
        g.temporal_edges_.push_back(edge_pair(te[i], "/temporal_edges/" + std::to_string(i), g.nodes_.size()));
    }

    const auto& chains = at(j, "entity_chains", "");
    if (!chains.is_object()) throw GraphError("/entity_chains is not an object");
    for (const auto& [entity, chain] : chains.items()) {
        const std::string path = "/entity_chains/" + entity;
        if (!chain.is_array()) throw GraphError(path + " is not an array");
        std::vector<NodeId> ids;
        for (const auto& v : chain) {
            if (!v.is_number_unsigned() || v.get<NodeId>() >= g.nodes_.size()) throw GraphError("invalid node id in " + path);
            ids.push_back(v.get<NodeId>());
        }
        g.entity_chains_.emplace(entity, std::move(ids));
    }

    const auto& ee = at(j, "entity_edges", "");
    if (!ee.is_object()) throw GraphError("/entity_edges is not an object");
    for (const auto& [entity, edges] : ee.items()) {
        const std::string path = "/entity_edges/" + entity;
        if (!edges.is_array()) throw GraphError(path + " is not an array");
        std::vector<Edge> parsed;
        for (std::size_t i = 0; i < edges.size(); ++i) {
            parsed.push_back(edge_pair(edges[i], path + "/" + std::to_string(i), g.nodes_.size()));
        }
        if (parsed != g.entity_edges(entity)) throw GraphError(path + " disagrees with /entity_chains");
    }
    return g;
}

}  // namespace chronos
