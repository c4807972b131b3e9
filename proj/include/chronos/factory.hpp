#pragma once
// Builds providers, backends and run settings from a Config.

#include <memory>
#include <stdexcept>
#include <string>

#include "chronos/config.hpp"
#include "chronos/embedding.hpp"
#include "chronos/harness.hpp"
#include "chronos/http.hpp"
#include "chronos/llm_gateway.hpp"
#include "chronos/prompts.hpp"
#include "chronos/scripted_backend.hpp"

namespace chronos {

inline RetrievalParams retrieval_params(const Config& cfg) {
    RetrievalParams p;
    p.alpha = cfg.get_double("retrieval.alpha");
    p.tau_days = cfg.get_double("retrieval.tau_days");
    p.candidate_pool = cfg.get_size("retrieval.candidate_pool");
    p.top_n = cfg.get_size("retrieval.top_n");
    p.pooled_cap = cfg.get_size("retrieval.pooled_cap");
    p.validate();
    return p;
}

inline RunConfig run_config(const Config& cfg) {
    RunConfig rc;
    rc.retrieval = retrieval_params(cfg);
    rc.knowledge_window = TimeWindow::make(cfg.get_date("knowledge.start"), cfg.get_date("knowledge.end"));
    rc.augment_rounds = cfg.get_size("eeg.augment_rounds");
    const auto scope = cfg.get("eeg.view_scope");
    if (scope == "as_of") rc.view_scope = ViewScope::as_of;
    else if (scope == "window") rc.view_scope = ViewScope::window;
    else throw ConfigError("eeg.view_scope must be as_of or window");
    rc.workers = cfg.get_size("eval.workers");
    rc.deterministic = cfg.get_bool("eval.deterministic");
    return rc;
}

inline std::shared_ptr<const EmbeddingProvider> make_embedder(const Config& cfg) {
    const auto kind = cfg.get("embedding.provider");
    const auto dim = cfg.get_size("embedding.dim");
    if (kind == "local") return std::make_shared<LocalEmbedder>(dim);
    if (kind == "remote") {
        HttpOptions o;
        o.endpoint = cfg.get("embedding.endpoint");
        o.model = cfg.get("embedding.model");
        o.api_key_env = cfg.get("embedding.api_key_env");
        o.timeout_s = static_cast<int>(cfg.get_int("embedding.timeout_s"));
        o.max_in_flight = static_cast<int>(cfg.get_int("embedding.max_in_flight"));
        if (o.endpoint.empty()) throw ConfigError("embedding.endpoint is required for the remote provider");
        return std::make_shared<RemoteEmbedder>(o, dim);
    }
    throw ConfigError("embedding.provider must be local or remote, got '" + kind + "'");
}

inline std::unique_ptr<LlmBackend> make_backend(const Config& cfg) {
    const auto kind = cfg.get("llm.backend");
    if (kind == "scripted") {
        EntityLexicon lexicon;
        if (!cfg.get("scripted.lexicon").empty()) lexicon = EntityLexicon::load(cfg.get("scripted.lexicon"));
        std::vector<KnowledgeQuadruple> memory;
        if (!cfg.get("scripted.history").empty()) memory = load_store(cfg.get("scripted.history")).items();
        ScriptedOptions so;
        so.cutoff = cfg.get_date("scripted.cutoff");
        so.reference_date = cfg.get_date("scripted.reference_date");
        return std::make_unique<ScriptedBackend>(std::move(lexicon), std::move(memory), so);
    }
    if (kind == "http") {
        HttpOptions o;
        o.endpoint = cfg.get("llm.endpoint");
        o.model = cfg.get("llm.model");
        o.api_key_env = cfg.get("llm.api_key_env");
        o.timeout_s = static_cast<int>(cfg.get_int("llm.timeout_s"));
        o.attempts = static_cast<int>(cfg.get_int("llm.retries"));
        o.backoff_ms = static_cast<int>(cfg.get_int("llm.backoff_ms"));
        o.max_in_flight = static_cast<int>(cfg.get_int("llm.max_in_flight"));
        if (o.endpoint.empty()) throw ConfigError("llm.endpoint is required for the http backend");
        return std::make_unique<HttpChatBackend>(o);
    }
    throw ConfigError("llm.backend must be scripted or http, got '" + kind + "'");
}

inline PromptSet make_prompts(const Config& cfg) {
    const auto dir = cfg.get("prompts.dir");
    return dir.empty() ? PromptSet{} : PromptSet::from_directory(dir);
}

}  // namespace chronos
