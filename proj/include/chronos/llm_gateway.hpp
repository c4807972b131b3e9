#pragma once
// Prompted stages of the pipeline over a pluggable completion backend:
// query analysis, history reconstruction, event augmentation, final answer,
// and the two baseline prompts.

#include <algorithm>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "chronos/date.hpp"
#include "chronos/eeg.hpp"
#include "chronos/knowledge_store.hpp"
#include "chronos/prompts.hpp"
#include "chronos/retrieval.hpp"

namespace chronos {

class BackendError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A reply that could not be parsed even after one re-prompt. Keeps the raw
/// text for the run log.
class ResponseParseError : public std::runtime_error {
public:
    ResponseParseError(const std::string& what, std::string raw)
        : std::runtime_error(what), raw_(std::move(raw)) {}
    const std::string& raw() const { return raw_; }

private:
    std::string raw_;
};

struct Completion {
    std::string text;
    std::optional<long> prompt_tokens;
    std::optional<long> completion_tokens;
};

/// complete() runs at temperature 0. Implementations must be callable from
/// several threads at once.
class LlmBackend {
public:
    virtual ~LlmBackend() = default;
    virtual std::string name() const = 0;
    virtual Completion complete(const std::string& prompt) const = 0;
};

struct TokenUsage {
    long prompt_tokens = 0;
    long completion_tokens = 0;
    bool reported = false;
    int calls = 0;

    void add(const Completion& c) {
        ++calls;
        if (c.prompt_tokens) prompt_tokens += *c.prompt_tokens, reported = true;
        if (c.completion_tokens) completion_tokens += *c.completion_tokens, reported = true;
    }
};

struct QueryAnalysis {
    std::vector<std::string> entities;
    std::string time_agnostic_query;
    TimeWindow window;
};

struct HistoryResult {
    std::vector<KnowledgeQuadruple> quads;
    std::vector<std::string> warnings;
    bool degraded = false;
};

struct AugmentResult {
    std::vector<KnowledgeQuadruple> quads;
    std::optional<std::string> follow_up;
    std::vector<std::string> warnings;
    bool degraded = false;
};

namespace detail {

inline std::string trim(std::string_view s) {
    auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

inline std::vector<std::string> split_lines(std::string_view text) {
    std::vector<std::string> lines;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto eol = text.find('\n', pos);
        if (eol == std::string_view::npos) eol = text.size();
        std::string line(text.substr(pos, eol - pos));
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
        pos = eol + 1;
    }
    return lines;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (true) {
        auto next = s.find(sep, pos);
        out.emplace_back(s.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
        if (next == std::string_view::npos) break;
        pos = next + 1;
    }
    return out;
}

inline std::string window_text(const TimeWindow& w) {
    return w.start.to_string() + " to " + w.end.to_string();
}

inline Completion call(const LlmBackend& backend, const std::string& prompt, TokenUsage* usage) {
    Completion c = backend.complete(prompt);
    if (usage) usage->add(c);
    return c;
}

inline std::string reprompt(const std::string& prompt, const std::string& problem) {
    return prompt + "\nYour previous reply could not be used (" + problem +
           "). Reply again following the required format exactly.\n";
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Response parsers

/// Parses the ```analysis block. Missing dates fall back to `default_window`.
/// Throws ResponseParseError when there is no block or a date is invalid.
inline QueryAnalysis parse_analysis(const std::string& response, const TimeWindow& default_window) {
    const auto lines = detail::split_lines(response);
    auto open = std::find_if(lines.begin(), lines.end(),
                             [](const std::string& l) { return detail::trim(l).starts_with("```analysis"); });
    if (open == lines.end()) throw ResponseParseError("no ```analysis block in reply", response);
    QueryAnalysis qa;
    std::optional<Date> start, end;
    bool closed = false;
    for (auto it = open + 1; it != lines.end(); ++it) {
        const auto line = detail::trim(*it);
        if (line.starts_with("```")) {
            closed = true;
            break;
        }
        auto colon = line.find(':');
        if (colon == std::string::npos) continue;
        const auto key = detail::ascii_lower(detail::trim(std::string_view(line).substr(0, colon)));
        const auto value = detail::trim(std::string_view(line).substr(colon + 1));
        auto parse_date = [&](const char* which) -> std::optional<Date> {
            if (value.empty()) return std::nullopt;
            Date d;
            if (!Date::try_parse(value, d)) {
                throw ResponseParseError(std::string("invalid ") + which + " date '" + value + "'", response);
            }
            return d;
        };
        if (key == "entities") {
            for (const auto& e : detail::split(value, ';')) {
                auto t = detail::collapse_whitespace(e);
                if (!t.empty()) qa.entities.push_back(t);
            }
        } else if (key == "query") {
            qa.time_agnostic_query = value;
        } else if (key == "start") {
            start = parse_date("start");
        } else if (key == "end") {
            end = parse_date("end");
        }
    }
    if (!closed) throw ResponseParseError("unterminated ```analysis block", response);
    if (start && !end) end = start;
    if (end && !start) start = end;
    if (start) {
        if (*end < *start) throw ResponseParseError("window end precedes start", response);
        qa.window = TimeWindow{*start, *end};
    } else {
        qa.window = default_window;
    }
    return qa;
}

/// Lines of the form "subject | relation | object | YYYY-MM-DD" anywhere in
/// the reply. Malformed candidates become warnings; duplicates are dropped.
inline std::vector<KnowledgeQuadruple> parse_quadruple_lines(const std::string& response,
                                                             std::vector<std::string>* warnings) {
    std::vector<KnowledgeQuadruple> out;
    std::set<decltype(KnowledgeQuadruple{}.key())> seen;
    for (auto line : detail::split_lines(response)) {
        line = detail::trim(line);
        if (line.starts_with("- ")) line = line.substr(2);
        if (std::count(line.begin(), line.end(), '|') != 3) continue;
        auto fields = detail::split(line, '|');
        Date d;
        if (!Date::try_parse(detail::trim(fields[3]), d)) {
            if (warnings) warnings->push_back("dropped line with invalid date: " + line);
            continue;
        }
        try {
            auto q = KnowledgeQuadruple::make(fields[0], fields[1], fields[2], d);
            if (seen.insert(q.key()).second) out.push_back(std::move(q));
        } catch (const StoreError& e) {
            if (warnings) warnings->push_back(std::string("dropped line: ") + e.what() + ": " + line);
        }
    }
    return out;
}

inline std::optional<std::string> parse_follow_up(const std::string& response) {
    for (const auto& raw : detail::split_lines(response)) {
        const auto line = detail::trim(raw);
        if (detail::ascii_lower(line.substr(0, 10)) == "follow-up:") {
            auto q = detail::trim(std::string_view(line).substr(10));
            if (!q.empty()) return q;
        }
    }
    return std::nullopt;
}

/// Text after the last "ANSWER:" marker.
inline std::optional<std::string> parse_answer(const std::string& response) {
    std::optional<std::string> found;
    for (const auto& raw : detail::split_lines(response)) {
        const auto line = detail::trim(raw);
        if (line.size() >= 7 && detail::ascii_lower(line.substr(0, 7)) == "answer:") {
            auto a = detail::trim(std::string_view(line).substr(7));
            if (!a.empty()) found = a;
        }
    }
    return found;
}

// ---------------------------------------------------------------------------
// Stages

/// Renders P1 and parses the analysis, re-prompting once. When the model
/// names no entity the rewritten query itself is used as the retrieval key.
inline QueryAnalysis analyze_query(const std::string& q_raw, const PromptSet& prompts, const LlmBackend& backend,
                                   const TimeWindow& knowledge_window, TokenUsage* usage = nullptr) {
    if (detail::trim(q_raw).empty()) throw std::invalid_argument("analyze_query: empty question");
    const auto prompt = prompts.get(PromptId::P1).render({{"question", q_raw}, {"window", detail::window_text(knowledge_window)}});
    auto attempt = [&](const std::string& p) {
        auto qa = parse_analysis(detail::call(backend, p, usage).text, knowledge_window);
        if (qa.time_agnostic_query.empty()) qa.time_agnostic_query = detail::trim(q_raw);
        if (qa.entities.empty()) qa.entities.push_back(qa.time_agnostic_query);
        return qa;
    };
    try {
        return attempt(prompt);
    } catch (const ResponseParseError& first) {
        try {
            return attempt(detail::reprompt(prompt, first.what()));
        } catch (const ResponseParseError& second) {
            throw ResponseParseError(std::string("query analysis failed: ") + second.what(), second.raw());
        }
    }
}

/// P2. A failing backend yields an empty, degraded result; the pipeline goes on.
inline HistoryResult reconstruct_history(const std::string& q0, const TimeWindow& window, const PromptSet& prompts,
                                         const LlmBackend& backend, TokenUsage* usage = nullptr) {
    HistoryResult out;
    const auto prompt = prompts.get(PromptId::P2).render({{"question", q0}, {"window", detail::window_text(window)}});
    try {
        out.quads = parse_quadruple_lines(detail::call(backend, prompt, usage).text, &out.warnings);
    } catch (const BackendError& e) {
        out.degraded = true;
        out.warnings.push_back(std::string("history reconstruction unavailable: ") + e.what());
    }
    return out;
}

/// P3: extra events and/or a single follow-up query.
inline AugmentResult augment_events(const std::string& q_raw, const std::string& graph_summary_text,
                                    const PromptSet& prompts, const LlmBackend& backend,
                                    TokenUsage* usage = nullptr) {
    AugmentResult out;
    const auto prompt = prompts.get(PromptId::P3).render({{"question", q_raw}, {"graph_summary", graph_summary_text}});
    try {
        const auto text = detail::call(backend, prompt, usage).text;
        out.quads = parse_quadruple_lines(text, &out.warnings);
        out.follow_up = parse_follow_up(text);
    } catch (const BackendError& e) {
        out.degraded = true;
        out.warnings.push_back(std::string("event augmentation unavailable: ") + e.what());
    }
    return out;
}

namespace detail {

inline std::string ask_for_answer(const LlmBackend& backend, const std::string& prompt, TokenUsage* usage) {
    auto a = parse_answer(call(backend, prompt, usage).text);
    if (a) return *a;
    const auto retry_text = call(backend, reprompt(prompt, "missing ANSWER: line"), usage).text;
    a = parse_answer(retry_text);
    if (!a) throw ResponseParseError("reply has no ANSWER: line", retry_text);
    return *a;
}

inline std::string render_entity_views(const ViewBundle& views) {
    if (!views.has_entity) return "(not provided)\n";
    std::string out;
    for (const auto& [_, text] : views.entity_views) out += text + "\n";
    return out.empty() ? "(none)\n" : out;
}

}  // namespace detail

/// P4 over the temporal view followed by the entity views.
inline std::string answer(const std::string& q_raw, const ViewBundle& views, const TimeWindow& window,
                          const PromptSet& prompts, const LlmBackend& backend, TokenUsage* usage = nullptr) {
    const auto prompt = prompts.get(PromptId::P4).render({
        {"question", q_raw},
        {"window", detail::window_text(window)},
        {"temporal_view", views.has_temporal ? views.temporal_view : std::string("(not provided)\n")},
        {"entity_views", detail::render_entity_views(views)},
    });
    return detail::ask_for_answer(backend, prompt, usage);
}

inline std::string answer_direct(const std::string& q_raw, const PromptSet& prompts, const LlmBackend& backend,
                                 TokenUsage* usage = nullptr) {
    return detail::ask_for_answer(backend, prompts.get(PromptId::Direct).render({{"question", q_raw}}), usage);
}

inline std::string answer_with_context(const std::string& q_raw, const std::vector<KnowledgeQuadruple>& context,
                                       const PromptSet& prompts, const LlmBackend& backend, TokenUsage* usage = nullptr) {
    std::string ctx;
    for (const auto& q : context) ctx += format_event_line({q, Provenance::retrieved, 0}) + "\n";
    if (ctx.empty()) ctx = "(none)\n";
    return detail::ask_for_answer(backend, prompts.get(PromptId::Rag).render({{"question", q_raw}, {"context", ctx}}), usage);
}

}  // namespace chronos
