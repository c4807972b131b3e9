#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "chronos/prompts.hpp"

using namespace chronos;

namespace {
PromptBindings all_bound() {
    PromptBindings b;
    for (const auto& name : allowed_placeholders()) b[name] = "<" + name + ">";
    return b;
}
}  // namespace

TEST(Prompts, DefaultsRenderWithoutPlaceholders) {
    const PromptSet set;
    for (auto id : all_prompt_ids) {
        const auto text = set.get(id).render(all_bound());
        EXPECT_EQ(text.find("{{"), std::string::npos) << to_string(id);
        EXPECT_EQ(prompt_template_tag(text), std::string(to_string(id)));
        EXPECT_TRUE(prompt_sections(text).contains("QUESTION")) << to_string(id);
    }
}

TEST(Prompts, UnboundAndUnknownPlaceholders) {
    const PromptTemplate t(PromptId::P2, "TEMPLATE: P2\n{{question}} {{window}}\n");
    EXPECT_THROW(t.render({{"question", "q"}}), PromptError);
    EXPECT_EQ(t.render({{"question", "q"}, {"window", "w"}}), "TEMPLATE: P2\nq w\n");
    EXPECT_THROW(PromptTemplate(PromptId::P1, "{{bogus}}"), PromptError);
    EXPECT_THROW(PromptTemplate(PromptId::P1, "{{question"), PromptError);
}

TEST(Prompts, SinglePassDoesNotExpandValues) {
    const PromptTemplate t(PromptId::P1, "A {{question}} B");
    EXPECT_EQ(t.render({{"question", "{{window}}"}}), "A {{window}} B");
}

TEST(Prompts, SectionsRoundTrip) {
    const auto text = PromptSet{}.get(PromptId::P4).render(
        {{"question", "Who?"}, {"window", "w"}, {"temporal_view", "line1\nline2\n"}, {"entity_views", "e\n"}});
    const auto s = prompt_sections(text);
    EXPECT_EQ(s.at("QUESTION"), "Who?");
    EXPECT_EQ(s.at("TEMPORAL VIEW"), "line1\nline2");
    EXPECT_EQ(s.at("ENTITY VIEWS"), "e");
    EXPECT_EQ(s.at("WINDOW"), "w");
}

TEST(Prompts, DirectoryOverridesAndReload) {
    const auto dir = std::filesystem::temp_directory_path() / "chronos_prompts_test";
    std::filesystem::create_directories(dir);
    std::ofstream(dir / "P2.txt") << "TEMPLATE: P2\ncustom {{question}}\n";
    auto set = PromptSet::from_directory(dir);
    EXPECT_EQ(set.get(PromptId::P2).render({{"question", "x"}}), "TEMPLATE: P2\ncustom x\n");
    EXPECT_EQ(set.get(PromptId::P1).body(), default_template_body(PromptId::P1));

    std::ofstream(dir / "P2.txt") << "TEMPLATE: P2\nchanged {{question}}\n";
    set.reload(dir);
    EXPECT_EQ(set.get(PromptId::P2).render({{"question", "x"}}), "TEMPLATE: P2\nchanged x\n");
    std::filesystem::remove_all(dir);
    EXPECT_THROW(PromptSet::from_directory(dir), PromptError);
}

// The shipped template files must stay identical to the built-in bodies.
TEST(Prompts, ShippedFilesMatchBuiltins) {
    const auto set = PromptSet::from_directory(CHRONOS_PROMPTS_DIR);
    for (auto id : all_prompt_ids) {
        EXPECT_EQ(set.get(id).body(), default_template_body(id)) << to_string(id);
        EXPECT_TRUE(std::filesystem::exists(std::filesystem::path(CHRONOS_PROMPTS_DIR) / (std::string(to_string(id)) + ".txt")));
    }
}
