#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "chronos/factory.hpp"
#include "test_support.hpp"

using namespace chronos;

namespace {
std::filesystem::path write_temp(const std::string& name, const std::string& text) {
    const auto dir = std::filesystem::temp_directory_path() / "chronos_config_test";
    std::filesystem::create_directories(dir);
    std::ofstream(dir / name) << text;
    return dir / name;
}
}  // namespace

TEST(Config, Defaults) {
    const Config cfg;
    EXPECT_EQ(cfg.get_double("retrieval.alpha"), 0.75);
    EXPECT_EQ(cfg.get_double("retrieval.tau_days"), 180.0);
    EXPECT_EQ(cfg.get_size("retrieval.candidate_pool"), 50u);
    EXPECT_EQ(cfg.get_size("retrieval.top_n"), 4u);
    EXPECT_EQ(cfg.get("embedding.provider"), "local");
    EXPECT_EQ(cfg.get("llm.backend"), "scripted");
}

TEST(Config, LayeringFileEnvFlags) {
    const auto path = write_temp("layer.conf", "# c\n[retrieval]\nalpha = 0.5\ntop_n = 3\n[scripted]\nlexicon = lex.txt\n");
    Config cfg;
    cfg.load_file(path);
    EXPECT_EQ(cfg.get_double("retrieval.alpha"), 0.5);
    EXPECT_EQ(cfg.get("scripted.lexicon"), (path.parent_path() / "lex.txt").string());

    ::setenv("CHRONOS_RETRIEVAL_ALPHA", "0.6", 1);
    ::setenv("CHRONOS_RETRIEVAL_TOP_N", "2", 1);
    cfg.apply_environment();
    ::unsetenv("CHRONOS_RETRIEVAL_ALPHA");
    ::unsetenv("CHRONOS_RETRIEVAL_TOP_N");
    EXPECT_EQ(cfg.get_double("retrieval.alpha"), 0.6);

    cfg.apply_overrides({"retrieval.alpha=0.9"});
    EXPECT_EQ(cfg.get_double("retrieval.alpha"), 0.9);
    EXPECT_EQ(cfg.get_size("retrieval.top_n"), 2u);
    EXPECT_EQ(Config::env_name("retrieval.tau_days"), "CHRONOS_RETRIEVAL_TAU_DAYS");
}

TEST(Config, Errors) {
    Config cfg;
    EXPECT_THROW(cfg.apply_overrides({"retrieval.alpah=0.9"}), ConfigError);
    EXPECT_THROW(cfg.apply_overrides({"novalue"}), ConfigError);
    EXPECT_THROW(cfg.load_file("/nonexistent/chronos.conf"), ConfigError);
    EXPECT_THROW(Config().load_file(write_temp("bad.conf", "alpha 0.5\n")), ConfigError);
    cfg.set("retrieval.alpha", "abc");
    EXPECT_THROW(cfg.get_double("retrieval.alpha"), ConfigError);
    cfg.set("eval.deterministic", "maybe");
    EXPECT_THROW(cfg.get_bool("eval.deterministic"), ConfigError);
    cfg.set("knowledge.start", "2024-13-01");
    EXPECT_THROW(cfg.get_date("knowledge.start"), ConfigError);
}

TEST(Factory, BuildsFromConfig) {
    Config cfg;
    cfg.load_file(chronos::testing::data_path("table1/chronos.conf"));
    const auto rc = run_config(cfg);
    EXPECT_EQ(rc.retrieval.top_n, 4u);
    EXPECT_EQ(rc.view_scope, ViewScope::as_of);
    EXPECT_EQ(make_embedder(cfg)->name(), "local-fnv1a64");
    EXPECT_EQ(make_backend(cfg)->name(), "scripted");

    cfg.set("retrieval.top_n", "0");
    EXPECT_THROW(run_config(cfg), std::invalid_argument);
    cfg.set("retrieval.top_n", "4");
    cfg.set("eeg.view_scope", "sideways");
    EXPECT_THROW(run_config(cfg), ConfigError);
    cfg.set("llm.backend", "http");
    EXPECT_THROW(make_backend(cfg), ConfigError);
    cfg.set("embedding.provider", "magic");
    EXPECT_THROW(make_embedder(cfg), ConfigError);
}
