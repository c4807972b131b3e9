#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "chronos/eeg.hpp"
#include "test_support.hpp"

using namespace chronos;
using namespace chronos::testing;

namespace {

EventGraph full_graph() {
    return link_entities(merge_history(build_initial(table1_store().items()), {}));
}

std::size_t count_lines(const std::string& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), '\n')); }

}  // namespace

TEST(BuildInitial, RichestPath) {
    const auto g = build_initial(richest_events());
    EXPECT_EQ(g.size(), 7u);
    EXPECT_EQ(g.temporal_edges().size(), 6u);
    EXPECT_EQ(g.nodes()[g.chronological().front()].quad.timestamp, d("2024-01-01"));
    EXPECT_EQ(g.stage(), GraphStage::I);
}

TEST(BuildInitial, EmptyAndSingle) {
    const auto empty = build_initial({});
    EXPECT_EQ(empty.size(), 0u);
    EXPECT_TRUE(empty.temporal_edges().empty());
    const auto one = build_initial({quad("A", "r", "B", "2024-01-01")});
    EXPECT_EQ(one.size(), 1u);
    EXPECT_TRUE(one.temporal_edges().empty());
}

TEST(BuildInitial, SortsUnorderedInput) {
    auto events = richest_events();
    std::reverse(events.begin(), events.end());
    events.push_back(events.front());  // duplicate
    const auto g = build_initial(events);
    ASSERT_EQ(g.size(), 7u);
    EXPECT_EQ(g.temporal_edges().size(), 6u);
    for (const auto& [a, b] : g.temporal_edges()) EXPECT_LE(g.nodes()[a].quad.timestamp, g.nodes()[b].quad.timestamp);
}

TEST(MergeHistory, AddsEarliestNode) {
    const auto bill = quad(kRichest.c_str(), "held by", "Bill Gates", "2014-03-01");
    const auto g = merge_history(build_initial(table1_store().items()), {bill});
    EXPECT_EQ(g.size(), 9u);
    EXPECT_EQ(g.temporal_edges().size(), g.size() - 1);
    EXPECT_EQ(g.nodes()[g.chronological().front()].quad, bill);
    EXPECT_EQ(g.nodes()[g.chronological().front()].provenance, Provenance::historical);
    EXPECT_EQ(g.stage(), GraphStage::F);
}

TEST(MergeHistory, EmptyAndDuplicate) {
    const auto base = build_initial(table1_store().items());
    const auto same = merge_history(base, {});
    EXPECT_EQ(same.nodes(), base.nodes());
    EXPECT_EQ(same.stage(), GraphStage::F);
    EXPECT_EQ(merge_history(base, {table1_store().at(3)}).size(), base.size());
    EXPECT_THROW(merge_history(same, {}), GraphError);
}

TEST(Augment, AddsNovelEventsOnly) {
    const auto g = merge_history(build_initial(richest_events()), {});
    const auto oracle = table1_store().at(7);
    EXPECT_EQ(augment(g, {oracle}).size(), g.size() + 1);
    EXPECT_EQ(augment(g, {}).nodes(), g.nodes());
    EXPECT_EQ(augment(g, richest_events()).nodes(), g.nodes());
    EXPECT_THROW(augment(build_initial({}), {}), GraphError);
}

TEST(LinkEntities, MuskChain) {
    const auto g = full_graph();
    // three "held by Elon Musk" rows in the fixture
    ASSERT_TRUE(g.entity_chains().contains("elon musk"));
    EXPECT_EQ(g.entity_chains().at("elon musk").size(), 3u);
    EXPECT_EQ(g.entity_edges("Elon Musk").size(), 2u);
    EXPECT_EQ(g.entity_chains().at("larry ellison").size(), 1u);
    EXPECT_TRUE(g.entity_edges("Larry Ellison").empty());
}

TEST(LinkEntities, SelfReferenceCountedOnce) {
    const auto g = link_entities(merge_history(build_initial({quad("Acme", "merged with", "ACME", "2024-01-01")}), {}));
    EXPECT_EQ(g.entity_chains().at("acme").size(), 1u);
}

TEST(TemporalView, WindowLines) {
    const auto g = full_graph();
    const auto view = temporal_view(g, {d("2025-09-10"), d("2025-09-11")});
    EXPECT_EQ(view.rfind("Timeline [2025-09-10, 2025-09-11]:\n", 0), 0u);
    EXPECT_EQ(count_lines(view), 4u);
    EXPECT_NE(view.find("Larry Ellison"), std::string::npos);
    EXPECT_NE(view.find("Oracle stock price"), std::string::npos);
    EXPECT_NE(view.find("[2025-09-11] World\xE2\x80\x99s Richest Person \xE2\x80\x94 held by \xE2\x80\x94 Elon Musk (retrieved)"),
              std::string::npos);

    EXPECT_EQ(count_lines(temporal_view(g, {d("2030-01-01"), d("2030-12-31")})), 1u);
    EXPECT_EQ(count_lines(temporal_view(g, {d("2000-01-01"), d("2030-12-31")})), g.size() + 1);
    EXPECT_THROW(temporal_view(build_initial({}), {d("2000-01-01"), d("2000-01-01")}), GraphError);
}

TEST(EntityViews, RichestTransitions) {
    const auto g = full_graph();
    const auto views = entity_views(g);
    const auto& v = views.at(normalize_entity(kRichest));
    EXPECT_EQ(v.rfind("Entity: " + kRichest + "\n", 0), 0u);
    EXPECT_EQ(count_lines(v), 8u);
    EXPECT_LT(v.find("2024-01-01"), v.find("2024-01-28"));
    EXPECT_LT(v.find("2025-09-10"), v.find("2025-09-11"));
    EXPECT_EQ(count_lines(views.at("oracle stock price")), 2u);
    EXPECT_TRUE(entity_views(link_entities(merge_history(build_initial({}), {}))).empty());
}

TEST(Serialize, RoundTripAndEmpty) {
    const auto g = full_graph();
    EXPECT_EQ(parse_graph(serialize_graph(g)), g);

    const auto empty = link_entities(merge_history(build_initial({}), {}));
    const auto doc = nlohmann::json::parse(serialize_graph(empty));
    EXPECT_TRUE(doc["nodes"].empty());
    EXPECT_TRUE(doc["temporal_edges"].empty());
    EXPECT_EQ(parse_graph(serialize_graph(empty)), empty);
}

TEST(Serialize, StructuredErrors) {
    const auto text = serialize_graph(full_graph());
    EXPECT_THROW(parse_graph(text.substr(0, text.size() / 2)), GraphError);

    auto doc = nlohmann::json::parse(text);
    doc["nodes"][2]["provenance"] = "invented";
    try {
        parse_graph(doc.dump());
        FAIL();
    } catch (const GraphError& e) {
        EXPECT_NE(std::string(e.what()).find("/nodes/2/provenance"), std::string::npos) << e.what();
    }
    doc = nlohmann::json::parse(text);
    doc.erase("temporal_edges");
    EXPECT_THROW(parse_graph(doc.dump()), GraphError);
}

// Random event sets: the temporal path is the filter-sort-pair of all nodes,
// every entity chain is the chronological list of nodes naming that entity,
// and no node sits strictly between the ends of an entity edge.
TEST(GraphProperty, MatchesFilterSortPairOracle) {
    std::mt19937 rng(99);
    const std::vector<std::string> names{"Ann", "Bob", "Cy", "Dee", "Eve"};
    for (int trial = 0; trial < 100; ++trial) {
        std::uniform_int_distribution<int> pick(0, 4), day(0, 20), n(0, 12);
        auto make_batch = [&] {
            std::vector<KnowledgeQuadruple> v;
            for (int i = n(rng); i > 0; --i) v.push_back(KnowledgeQuadruple{names[pick(rng)], "met", names[pick(rng)], d("2024-01-01") + day(rng)});
            return v;
        };
        const auto g = link_entities(augment(merge_history(build_initial(make_batch()), make_batch()), make_batch()));

        std::vector<std::size_t> ids(g.size());
        std::iota(ids.begin(), ids.end(), 0u);
        std::stable_sort(ids.begin(), ids.end(), [&](auto a, auto b) { return g.nodes()[a].quad.timestamp < g.nodes()[b].quad.timestamp; });
        std::vector<Edge> expected;
        for (std::size_t i = 1; i < ids.size(); ++i) expected.emplace_back(ids[i - 1], ids[i]);
        ASSERT_EQ(g.temporal_edges(), expected);

        for (std::size_t i = 0; i < g.size(); ++i) ASSERT_EQ(g.nodes()[i].node_id, i);

        for (const auto& name : names) {
            const auto norm = normalize_entity(name);
            std::vector<NodeId> chain;
            for (auto id : ids) {
                if (g.nodes()[id].quad.involves(norm)) chain.push_back(id);
            }
            if (chain.empty()) {
                ASSERT_FALSE(g.entity_chains().contains(norm));
                continue;
            }
            ASSERT_EQ(g.entity_chains().at(norm), chain);
            for (const auto& [a, b] : g.entity_edges(name)) {
                const auto ta = g.nodes()[a].quad.timestamp, tb = g.nodes()[b].quad.timestamp;
                for (std::size_t k = 0; k < g.size(); ++k) {
                    if (k == a || k == b || !g.nodes()[k].quad.involves(norm)) continue;
                    const auto tk = g.nodes()[k].quad.timestamp;
                    ASSERT_FALSE(ta < tk && tk < tb);
                }
            }
        }
        ASSERT_EQ(parse_graph(serialize_graph(g)), g);
    }
}
