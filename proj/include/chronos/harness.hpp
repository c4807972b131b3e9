#pragma once
// Benchmark harness: QA datasets, exact-match scoring, the three evaluated
// methods (direct, vanilla RAG, full pipeline with ablations), reports.

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "chronos/date.hpp"
#include "chronos/eeg.hpp"
#include "chronos/embedding.hpp"
#include "chronos/knowledge_store.hpp"
#include "chronos/llm_gateway.hpp"
#include "chronos/prompts.hpp"
#include "chronos/retrieval.hpp"

namespace chronos {

class DatasetError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Category { historical, c1, c2, c3, commonsense };

inline constexpr std::array<Category, 5> all_categories{Category::historical, Category::c1, Category::c2,
                                                        Category::c3, Category::commonsense};

inline const char* to_string(Category c) {
    switch (c) {
        case Category::historical: return "historical";
        case Category::c1: return "c1";
        case Category::c2: return "c2";
        case Category::c3: return "c3";
        case Category::commonsense: return "commonsense";
    }
    return "?";
}

inline const char* column_title(Category c) {
    switch (c) {
        case Category::historical: return "Historical";
        case Category::c1: return "C1";
        case Category::c2: return "C2";
        case Category::c3: return "C3";
        case Category::commonsense: return "Commonsense";
    }
    return "?";
}

inline std::optional<Category> category_from_string(std::string_view s) {
    const auto lower = detail::ascii_lower(std::string(s));
    for (auto c : all_categories) {
        if (lower == to_string(c)) return c;
    }
    return std::nullopt;
}

struct AnswerOption {
    std::string label;
    std::string text;
};

struct QAItem {
    std::string id;
    Category category = Category::c1;
    std::string question;
    std::vector<std::string> gold;
    std::vector<AnswerOption> options;

    /// Question text as shown to a model, options appended.
    std::string prompt_text() const {
        if (options.empty()) return question;
        std::string out = question + "\nOptions:\n";
        for (const auto& o : options) out += o.label + ". " + o.text + "\n";
        return out;
    }
};

inline QAItem qa_item_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw DatasetError("expected a JSON object");
    auto str = [&](const char* key) {
        if (!j.contains(key) || !j[key].is_string()) throw DatasetError(std::string("missing string field '") + key + "'");
        return j[key].get<std::string>();
    };
    QAItem item;
    item.id = str("id");
    if (item.id.empty()) throw DatasetError("empty id");
    auto cat = category_from_string(str("category"));
    if (!cat) throw DatasetError("unknown category '" + str("category") + "'");
    item.category = *cat;
    item.question = str("question");
    if (detail::trim(item.question).empty()) throw DatasetError("empty question");
    if (!j.contains("gold") || !j["gold"].is_array()) throw DatasetError("missing array field 'gold'");
    for (const auto& g : j["gold"]) {
        if (!g.is_string()) throw DatasetError("gold entries must be strings");
        if (!detail::trim(g.get<std::string>()).empty()) item.gold.push_back(g.get<std::string>());
    }
    if (item.gold.empty()) throw DatasetError("gold is empty");
    if (j.contains("options") && !j["options"].is_null()) {
        if (!j["options"].is_array()) throw DatasetError("'options' must be an array");
        for (const auto& o : j["options"]) {
            if (!o.is_object() || !o.contains("label") || !o.contains("text") || !o["label"].is_string() ||
                !o["text"].is_string()) {
                throw DatasetError("options need string 'label' and 'text'");
            }
            item.options.push_back({o["label"].get<std::string>(), o["text"].get<std::string>()});
        }
    }
    if (item.category == Category::commonsense) {
        if (item.options.empty()) throw DatasetError("commonsense item without options");
        if (item.gold.size() != 1) throw DatasetError("commonsense item needs exactly one gold label");
        const auto n = std::count_if(item.options.begin(), item.options.end(),
                                     [&](const AnswerOption& o) { return o.label == item.gold[0]; });
        if (n != 1) throw DatasetError("gold label '" + item.gold[0] + "' does not name exactly one option");
    } else if (!item.options.empty()) {
        throw DatasetError("options are only allowed on commonsense items");
    }
    return item;
}

inline nlohmann::ordered_json to_json(const QAItem& item) {
    nlohmann::ordered_json j{{"id", item.id}, {"category", to_string(item.category)}, {"question", item.question}, {"gold", item.gold}};
    if (!item.options.empty()) {
        auto& arr = j["options"] = nlohmann::ordered_json::array();
        for (const auto& o : item.options) arr.push_back({{"label", o.label}, {"text", o.text}});
    }
    return j;
}

/// Validated items in file order. `log` receives per-category counts and a
/// warning for an empty dataset.
inline std::vector<QAItem> read_dataset(std::istream& in, const std::string& source,
                                        std::vector<std::string>* log = nullptr) {
    std::vector<QAItem> items;
    std::set<std::string> ids;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::trim(line).empty()) continue;
        try {
            auto item = qa_item_from_json(nlohmann::json::parse(line));
            if (!ids.insert(item.id).second) throw DatasetError("duplicate id '" + item.id + "'");
            items.push_back(std::move(item));
        } catch (const std::exception& e) {
            throw DatasetError(source + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    if (log) {
        if (items.empty()) log->push_back("warning: dataset " + source + " is empty");
        std::map<Category, int> counts;
        for (const auto& it : items) ++counts[it.category];
        std::string summary = "dataset " + source + ":";
        for (auto c : all_categories) summary += " " + std::string(to_string(c)) + "=" + std::to_string(counts[c]);
        log->push_back(summary);
    }
    return items;
}

inline std::vector<QAItem> load_dataset(const std::string& path, std::vector<std::string>* log = nullptr) {
    std::ifstream in(path);
    if (!in) throw DatasetError("cannot open dataset '" + path + "'");
    return read_dataset(in, path, log);
}

// ---------------------------------------------------------------------------
// Exact match

/// Case-fold, collapse whitespace, strip punctuation at both ends.
inline std::string normalize_answer(std::string_view text) {
    std::string s = detail::ascii_lower(detail::collapse_whitespace(text));
    auto edge = [](char c) {
        auto u = static_cast<unsigned char>(c);
        return u < 0x80 && (std::ispunct(u) || std::isspace(u));
    };
    std::size_t b = 0, e = s.size();
    while (b < e && edge(s[b])) ++b;
    while (e > b && edge(s[e - 1])) --e;
    return s.substr(b, e - b);
}

namespace detail {
inline std::set<std::string> answer_set(const std::vector<std::string>& parts) {
    std::set<std::string> out;
    for (const auto& p : parts) {
        for (const auto& piece : split(p, ',')) {
            auto n = normalize_answer(piece);
            if (!n.empty()) out.insert(n);
        }
    }
    return out;
}
}  // namespace detail

inline bool exact_match(std::string_view prediction, const QAItem& item) {
    const auto pred = normalize_answer(prediction);
    switch (item.category) {
        case Category::c2:
            return !pred.empty() && detail::answer_set({std::string(prediction)}) == detail::answer_set(item.gold);
        case Category::commonsense: {
            const auto& label = item.gold.front();
            const auto it = std::find_if(item.options.begin(), item.options.end(),
                                         [&](const AnswerOption& o) { return o.label == label; });
            if (pred == normalize_answer(label)) return true;
            if (it == item.options.end()) return false;
            if (pred == normalize_answer(it->text)) return true;
            // "A. Sirius" / "A) Sirius"
            return pred == normalize_answer(label + ". " + it->text) || pred == normalize_answer(label + ") " + it->text);
        }
        default:
            return std::any_of(item.gold.begin(), item.gold.end(),
                               [&](const std::string& g) { return pred == normalize_answer(g); });
    }
}

// ---------------------------------------------------------------------------
// Run configuration

enum class Method { direct, vanilla_rag, chronos };

inline const char* to_string(Method m) {
    switch (m) {
        case Method::direct: return "direct";
        case Method::vanilla_rag: return "vanilla_rag";
        case Method::chronos: return "chronos";
    }
    return "?";
}

inline std::optional<Method> method_from_string(std::string_view s) {
    for (auto m : {Method::direct, Method::vanilla_rag, Method::chronos}) {
        if (s == to_string(m)) return m;
    }
    return std::nullopt;
}

enum class Ablation { time_aware_retrieval, history_reconstruction, event_augmentation, temporal_view, entity_view };

inline const char* to_string(Ablation a) {
    switch (a) {
        case Ablation::time_aware_retrieval: return "time_aware_retrieval";
        case Ablation::history_reconstruction: return "history_reconstruction";
        case Ablation::event_augmentation: return "event_augmentation";
        case Ablation::temporal_view: return "temporal_view";
        case Ablation::entity_view: return "entity_view";
    }
    return "?";
}

inline std::optional<Ablation> ablation_from_string(std::string_view s) {
    for (auto a : {Ablation::time_aware_retrieval, Ablation::history_reconstruction, Ablation::event_augmentation,
                   Ablation::temporal_view, Ablation::entity_view}) {
        if (s == to_string(a)) return a;
    }
    return std::nullopt;
}

/// How much of the timeline the temporal view shows. `as_of` keeps every
/// event up to the window end, so a point-in-time question still sees the
/// event that established the state on that day; `window` shows only events
/// inside the window.
enum class ViewScope { as_of, window };

struct RunConfig {
    Method method = Method::chronos;
    std::set<Ablation> ablations;
    RetrievalParams retrieval;
    TimeWindow knowledge_window{Date::from_ymd(2024, 1, 1), Date::from_ymd(2025, 12, 31)};
    bool deterministic = true;  // omit wall-clock fields from records
    std::size_t augment_rounds = 1;
    ViewScope view_scope = ViewScope::as_of;
    std::size_t workers = 1;
    std::string run_name;
    std::optional<std::filesystem::path> dump_graphs_dir;

    bool enabled(Ablation a) const { return !ablations.contains(a); }

    void validate() const {
        retrieval.validate();
        if (!ablations.empty() && method != Method::chronos) {
            throw std::invalid_argument("ablations apply only to the chronos method");
        }
        if (ablations.contains(Ablation::temporal_view) && ablations.contains(Ablation::entity_view)) {
            throw std::invalid_argument("cannot drop both the temporal view and the entity views");
        }
        if (knowledge_window.end < knowledge_window.start) throw std::invalid_argument("knowledge window is inverted");
        if (workers == 0) throw std::invalid_argument("eval.workers must be >= 1");
    }

    std::string label() const {
        if (!run_name.empty()) return run_name;
        std::string out = to_string(method);
        for (auto a : ablations) out += std::string("-") + to_string(a);
        return out;
    }

    nlohmann::ordered_json to_json() const {
        nlohmann::ordered_json j;
        j["method"] = to_string(method);
        auto& abl = j["ablations"] = nlohmann::ordered_json::array();
        for (auto a : ablations) abl.push_back(to_string(a));
        j["retrieval"] = {{"alpha", retrieval.alpha},
                          {"tau_days", retrieval.tau_days},
                          {"candidate_pool", retrieval.candidate_pool},
                          {"top_n", retrieval.top_n},
                          {"pooled_cap", retrieval.pooled_cap}};
        j["knowledge_window"] = {knowledge_window.start.to_string(), knowledge_window.end.to_string()};
        j["augment_rounds"] = augment_rounds;
        j["view_scope"] = view_scope == ViewScope::as_of ? "as_of" : "window";
        j["deterministic"] = deterministic;
        return j;
    }
};

// ---------------------------------------------------------------------------
// Pipeline

struct ChronosTrace {
    QueryAnalysis analysis;
    std::vector<ScoredCandidate> retrieved;
    std::vector<KnowledgeQuadruple> history;
    std::optional<std::string> follow_up;
    EventGraph graph;
    TimeWindow view_scope;
    ViewBundle views;
    std::string answer;
    std::vector<std::string> notes;
    TokenUsage usage;
};

/// Everything one pipeline run needs; the store, index and backend are
/// shared read-only across items.
struct PipelineContext {
    const QuadrupleStore& store;
    const VectorIndex& index;
    const LlmBackend& backend;
    const PromptSet& prompts;
};

inline std::vector<ScoredCandidate> retrieve_for(const PipelineContext& ctx, const RunConfig& cfg,
                                                 const std::vector<std::string>& queries, const TimeWindow& window,
                                                 std::vector<std::string>* notes) {
    if (cfg.enabled(Ablation::time_aware_retrieval)) return retrieve_multi(ctx.index, queries, window, cfg.retrieval, notes);
    return pool_entities(queries, cfg.retrieval,
                         [&](const std::string& q) { return retrieve_semantic(ctx.index, q, window, cfg.retrieval); },
                         notes);
}

/// query analysis -> retrieval -> EEG-I -> history (EEG-F) -> augmentation
/// -> entity linking (EEG-A) -> views -> answer.
inline ChronosTrace run_pipeline(const std::string& question, const PipelineContext& ctx, const RunConfig& cfg) {
    ChronosTrace t;
    t.analysis = analyze_query(question, ctx.prompts, ctx.backend, cfg.knowledge_window, &t.usage);
    const auto& window = t.analysis.window;
    for (const auto& e : t.analysis.entities) {
        if (!ctx.store.contains_entity(e)) t.notes.push_back("entity not in store: " + e);
    }

    t.retrieved = retrieve_for(ctx, cfg, t.analysis.entities, window, &t.notes);
    std::vector<KnowledgeQuadruple> events;
    for (const auto& c : t.retrieved) events.push_back(c.quad);
    EventGraph g = build_initial(events);

    if (cfg.enabled(Ablation::history_reconstruction)) {
        auto h = reconstruct_history(t.analysis.time_agnostic_query, window, ctx.prompts, ctx.backend, &t.usage);
        for (auto& w : h.warnings) t.notes.push_back(std::move(w));
        for (const auto& q : h.quads) {
            if (cfg.knowledge_window.contains(q.timestamp)) {
                t.notes.push_back("reconstructed history inside the knowledge window: " + q.text() + " @ " +
                                  q.timestamp.to_string());
            }
        }
        t.history = std::move(h.quads);
    }
    g = merge_history(std::move(g), t.history);

    if (cfg.enabled(Ablation::event_augmentation)) {
        for (std::size_t round = 0; round < cfg.augment_rounds; ++round) {
            auto a = augment_events(question, graph_summary(g), ctx.prompts, ctx.backend, &t.usage);
            for (auto& w : a.warnings) t.notes.push_back(std::move(w));
            std::vector<KnowledgeQuadruple> extra = a.quads;
            if (a.follow_up) {
                t.follow_up = a.follow_up;
                for (const auto& c : retrieve_for(ctx, cfg, {*a.follow_up}, window, &t.notes)) extra.push_back(c.quad);
            }
            const auto before = g.size();
            g = augment(std::move(g), extra);
            if (!a.follow_up && a.quads.empty()) break;
            if (g.size() == before) break;
        }
    }
    g = link_entities(std::move(g));

    t.view_scope = window;
    if (cfg.view_scope == ViewScope::as_of) {
        for (const auto& n : g.nodes()) t.view_scope.start = std::min(t.view_scope.start, n.quad.timestamp);
    }
    t.views.has_temporal = cfg.enabled(Ablation::temporal_view);
    t.views.has_entity = cfg.enabled(Ablation::entity_view);
    if (t.views.has_temporal) t.views.temporal_view = temporal_view(g, t.view_scope);
    if (t.views.has_entity) t.views.entity_views = entity_views(g);
    t.graph = std::move(g);

    t.answer = answer(question, t.views, window, ctx.prompts, ctx.backend, &t.usage);
    return t;
}

// ---------------------------------------------------------------------------
// Reports

struct ItemRecord {
    std::string id;
    Category category = Category::c1;
    std::string prediction;
    std::vector<std::string> gold;
    bool correct = false;
    std::optional<double> latency_ms;
    std::optional<long> prompt_tokens;
    std::optional<long> completion_tokens;
    std::optional<std::string> error;
    std::vector<std::string> notes;

    friend bool operator==(const ItemRecord&, const ItemRecord&) = default;
};

struct CategoryScore {
    int correct = 0;
    int total = 0;
    double accuracy() const { return total == 0 ? 0.0 : 100.0 * correct / total; }
};

struct Report {
    std::string run;
    std::string method;
    nlohmann::ordered_json config;
    std::vector<ItemRecord> items;

    /// Recomputed from the item records every time.
    std::map<Category, CategoryScore> scores() const {
        std::map<Category, CategoryScore> out;
        for (const auto& r : items) {
            auto& s = out[r.category];
            ++s.total;
            s.correct += r.correct ? 1 : 0;
        }
        return out;
    }

    std::optional<double> accuracy(Category c) const {
        auto s = scores();
        auto it = s.find(c);
        if (it == s.end() || it->second.total == 0) return std::nullopt;
        return it->second.accuracy();
    }
};

inline nlohmann::ordered_json to_json(const ItemRecord& r) {
    nlohmann::ordered_json j{{"id", r.id},
                             {"category", to_string(r.category)},
                             {"prediction", r.prediction},
                             {"gold", r.gold},
                             {"correct", r.correct}};
    if (r.latency_ms) j["latency_ms"] = *r.latency_ms;
    if (r.prompt_tokens) j["prompt_tokens"] = *r.prompt_tokens;
    if (r.completion_tokens) j["completion_tokens"] = *r.completion_tokens;
    if (r.error) j["error"] = *r.error;
    if (!r.notes.empty()) j["notes"] = r.notes;
    return j;
}

inline nlohmann::ordered_json to_json(const Report& report) {
    nlohmann::ordered_json j;
    j["run"] = report.run;
    j["method"] = report.method;
    j["config"] = report.config;
    auto& cats = j["categories"] = nlohmann::ordered_json::object();
    for (const auto& [c, s] : report.scores()) {
        cats[to_string(c)] = {{"correct", s.correct}, {"total", s.total}, {"accuracy", s.accuracy()}};
    }
    auto& items = j["items"] = nlohmann::ordered_json::array();
    for (const auto& r : report.items) items.push_back(to_json(r));
    return j;
}

inline Report report_from_json(const nlohmann::json& j) {
    Report r;
    try {
        r.run = j.at("run").get<std::string>();
        r.method = j.at("method").get<std::string>();
        r.config = j.value("config", nlohmann::json::object());
        for (const auto& ij : j.at("items")) {
            ItemRecord rec;
            rec.id = ij.at("id").get<std::string>();
            auto c = category_from_string(ij.at("category").get<std::string>());
            if (!c) throw DatasetError("unknown category in report");
            rec.category = *c;
            rec.prediction = ij.at("prediction").get<std::string>();
            rec.gold = ij.at("gold").get<std::vector<std::string>>();
            rec.correct = ij.at("correct").get<bool>();
            if (ij.contains("latency_ms")) rec.latency_ms = ij["latency_ms"].get<double>();
            if (ij.contains("prompt_tokens")) rec.prompt_tokens = ij["prompt_tokens"].get<long>();
            if (ij.contains("completion_tokens")) rec.completion_tokens = ij["completion_tokens"].get<long>();
            if (ij.contains("error")) rec.error = ij["error"].get<std::string>();
            if (ij.contains("notes")) rec.notes = ij["notes"].get<std::vector<std::string>>();
            r.items.push_back(std::move(rec));
        }
    } catch (const nlohmann::json::exception& e) {
        throw DatasetError(std::string("malformed report: ") + e.what());
    }
    return r;
}

inline Report load_report(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DatasetError("cannot open report '" + path + "'");
    try {
        return report_from_json(nlohmann::json::parse(in));
    } catch (const nlohmann::json::parse_error& e) {
        throw DatasetError(path + ": " + e.what());
    }
}

namespace detail {
inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    return out + "\"";
}
}  // namespace detail

inline std::string report_csv(const Report& report) {
    std::ostringstream os;
    os << "id,category,prediction,gold,correct,latency_ms,prompt_tokens,completion_tokens,error\n";
    for (const auto& r : report.items) {
        std::string gold;
        for (const auto& g : r.gold) gold += (gold.empty() ? "" : "|") + g;
        os << detail::csv_field(r.id) << ',' << to_string(r.category) << ',' << detail::csv_field(r.prediction) << ','
           << detail::csv_field(gold) << ',' << (r.correct ? 1 : 0) << ','
           << (r.latency_ms ? std::to_string(*r.latency_ms) : "") << ','
           << (r.prompt_tokens ? std::to_string(*r.prompt_tokens) : "") << ','
           << (r.completion_tokens ? std::to_string(*r.completion_tokens) : "") << ','
           << detail::csv_field(r.error.value_or("")) << '\n';
    }
    return os.str();
}

/// Writes <stem>.json and <stem>.csv.
inline void save_report(const Report& report, const std::filesystem::path& json_path) {
    std::ofstream(json_path) << to_json(report).dump(2) << '\n';
    auto csv = json_path;
    csv.replace_extension(".csv");
    std::ofstream(csv) << report_csv(report);
}

/// Re-scores stored predictions against the dataset's gold answers.
inline Report rescore(const Report& report, const std::vector<QAItem>& dataset) {
    std::map<std::string, const QAItem*> by_id;
    for (const auto& it : dataset) by_id[it.id] = &it;
    Report out = report;
    for (auto& r : out.items) {
        auto it = by_id.find(r.id);
        if (it == by_id.end()) throw DatasetError("report item '" + r.id + "' is not in the dataset");
        r.correct = exact_match(r.prediction, *it->second);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Runs

/// Evaluates items on a bounded pool of workers. Records land in dataset
/// order whatever the completion order; an exception marks only its item
/// wrong.
template <typename Answerer>
Report evaluate(const std::vector<QAItem>& items, const RunConfig& cfg, Answerer&& answer_item) {
    Report report;
    report.run = cfg.label();
    report.method = to_string(cfg.method);
    report.config = cfg.to_json();
    report.items.resize(items.size());

    auto work = [&](std::size_t i) {
        const auto& item = items[i];
        ItemRecord rec;
        rec.id = item.id;
        rec.category = item.category;
        rec.gold = item.gold;
        TokenUsage usage;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            rec.prediction = answer_item(item, usage, rec.notes);
            rec.correct = exact_match(rec.prediction, item);
        } catch (const std::exception& e) {
            rec.error = e.what();
            rec.correct = false;
        }
        if (!cfg.deterministic) {
            rec.latency_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
        }
        if (usage.reported) {
            rec.prompt_tokens = usage.prompt_tokens;
            rec.completion_tokens = usage.completion_tokens;
        }
        report.items[i] = std::move(rec);
    };

    const std::size_t n_workers = std::min(cfg.workers, std::max<std::size_t>(items.size(), 1));
    if (n_workers <= 1) {
        for (std::size_t i = 0; i < items.size(); ++i) work(i);
        return report;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < n_workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < items.size(); i = next++) work(i);
        });
    }
    pool.clear();
    return report;
}

inline Report run_direct(const std::vector<QAItem>& items, const LlmBackend& backend, const PromptSet& prompts,
                         RunConfig cfg = {}) {
    cfg.method = Method::direct;
    cfg.validate();
    return evaluate(items, cfg, [&](const QAItem& item, TokenUsage& usage, std::vector<std::string>&) {
        return answer_direct(item.prompt_text(), prompts, backend, &usage);
    });
}

inline Report run_vanilla_rag(const std::vector<QAItem>& items, const VectorIndex& index, const LlmBackend& backend,
                              const PromptSet& prompts, std::size_t top_n, RunConfig cfg = {}) {
    if (top_n == 0) throw std::invalid_argument("vanilla RAG needs top_n >= 1");
    cfg.method = Method::vanilla_rag;
    cfg.validate();
    return evaluate(items, cfg, [&](const QAItem& item, TokenUsage& usage, std::vector<std::string>&) {
        std::vector<KnowledgeQuadruple> context;
        for (const auto& nb : nearest(index, item.question, top_n)) context.push_back(nb.quad);
        return answer_with_context(item.prompt_text(), context, prompts, backend, &usage);
    });
}

inline Report run_chronos(const std::vector<QAItem>& items, const PipelineContext& ctx, RunConfig cfg) {
    cfg.method = Method::chronos;
    cfg.validate();
    if (cfg.dump_graphs_dir) std::filesystem::create_directories(*cfg.dump_graphs_dir);
    return evaluate(items, cfg, [&](const QAItem& item, TokenUsage& usage, std::vector<std::string>& notes) {
        auto trace = run_pipeline(item.prompt_text(), ctx, cfg);
        usage = trace.usage;
        notes = std::move(trace.notes);
        if (cfg.dump_graphs_dir) {
            std::ofstream(*cfg.dump_graphs_dir / (item.id + ".json")) << serialize_graph(trace.graph) << '\n';
        }
        return trace.answer;
    });
}

// ---------------------------------------------------------------------------
// Comparison table

struct ComparisonRow {
    std::string run;
    std::map<Category, double> accuracy;  // present categories only
    double overall = 0.0;                 // unweighted mean over present categories
    double overall_weighted = 0.0;        // by item count
    bool missing_categories = false;
};

struct ComparisonTable {
    std::vector<ComparisonRow> rows;
    bool overall_both = false;

    std::string to_text() const {
        std::ostringstream os;
        auto cell = [](std::optional<double> v) {
            if (!v) return std::string("-");
            char buf[32];
            std::snprintf(buf, sizeof buf, "%.2f", *v);
            return std::string(buf);
        };
        std::size_t width = 6;
        for (const auto& r : rows) width = std::max(width, r.run.size() + (r.missing_categories ? 1 : 0));
        auto pad = [](std::string s, std::size_t w) {
            if (s.size() < w) s.append(w - s.size(), ' ');
            return s;
        };
        os << pad("Run", width);
        for (auto c : all_categories) os << "  " << pad(column_title(c), 11);
        os << "  Overall";
        if (overall_both) os << "    Weighted";
        os << '\n';
        bool footnote = false;
        for (const auto& r : rows) {
            os << pad(r.run + (r.missing_categories ? "*" : ""), width);
            for (auto c : all_categories) {
                auto it = r.accuracy.find(c);
                os << "  " << pad(cell(it == r.accuracy.end() ? std::nullopt : std::optional<double>(it->second)), 11);
            }
            os << "  " << pad(cell(r.overall), 7);
            if (overall_both) os << "    " << cell(r.overall_weighted);
            os << '\n';
            footnote = footnote || r.missing_categories;
        }
        if (footnote) os << "* Overall averages only the categories present in that run.\n";
        return os.str();
    }

    nlohmann::ordered_json to_json() const {
        auto arr = nlohmann::ordered_json::array();
        for (const auto& r : rows) {
            nlohmann::ordered_json j{{"run", r.run}};
            for (auto c : all_categories) {
                auto it = r.accuracy.find(c);
                j[column_title(c)] = it == r.accuracy.end() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(it->second);
            }
            j["Overall"] = r.overall;
            if (overall_both) j["OverallWeighted"] = r.overall_weighted;
            j["missing_categories"] = r.missing_categories;
            arr.push_back(std::move(j));
        }
        return arr;
    }
};

inline ComparisonTable aggregate(const std::vector<Report>& reports, bool overall_both = false) {
    if (reports.empty()) throw std::invalid_argument("aggregate needs at least one report");
    ComparisonTable table;
    table.overall_both = overall_both;
    for (const auto& rep : reports) {
        ComparisonRow row;
        row.run = rep.run;
        int correct = 0, total = 0;
        for (const auto& [c, s] : rep.scores()) {
            if (s.total == 0) continue;
            row.accuracy[c] = s.accuracy();
            correct += s.correct;
            total += s.total;
        }
        double sum = 0.0;
        for (const auto& [_, a] : row.accuracy) sum += a;
        row.overall = row.accuracy.empty() ? 0.0 : sum / static_cast<double>(row.accuracy.size());
        row.overall_weighted = total == 0 ? 0.0 : 100.0 * correct / total;
        row.missing_categories = row.accuracy.size() < all_categories.size();
        table.rows.push_back(std::move(row));
    }
    return table;
}

}  // namespace chronos
