#pragma once
// Prompt templates with {{placeholder}} slots.
//
// Every template starts with a "TEMPLATE: <id>" line so a backend can tell
// the stages apart, and carries its inputs in "### <SECTION>" blocks.

#include <array>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace chronos {

class PromptError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// P1 query analysis, P2 history reconstruction, P3 augmentation, P4 final
/// answer; Direct and Rag serve the baselines.
enum class PromptId { P1, P2, P3, P4, Direct, Rag };

inline constexpr std::array<PromptId, 6> all_prompt_ids{PromptId::P1, PromptId::P2, PromptId::P3,
                                                        PromptId::P4, PromptId::Direct, PromptId::Rag};

inline const char* to_string(PromptId id) {
    switch (id) {
        case PromptId::P1: return "P1";
        case PromptId::P2: return "P2";
        case PromptId::P3: return "P3";
        case PromptId::P4: return "P4";
        case PromptId::Direct: return "DIRECT";
        case PromptId::Rag: return "RAG";
    }
    return "?";
}

inline std::optional<PromptId> prompt_id_from_string(std::string_view s) {
    for (auto id : all_prompt_ids) {
        if (s == to_string(id)) return id;
    }
    return std::nullopt;
}

inline const std::set<std::string>& allowed_placeholders() {
    static const std::set<std::string> names{"question", "window", "temporal_view", "entity_views",
                                             "graph_summary", "context"};
    return names;
}

using PromptBindings = std::map<std::string, std::string>;

class PromptTemplate {
public:
    PromptTemplate(PromptId id, std::string body) : id_(id), body_(std::move(body)) {
        for (const auto& name : placeholders()) {
            if (!allowed_placeholders().contains(name)) {
                throw PromptError(std::string("template ") + to_string(id_) + " uses unknown placeholder {{" + name + "}}");
            }
        }
    }

    PromptId id() const { return id_; }
    const std::string& body() const { return body_; }

    std::set<std::string> placeholders() const {
        std::set<std::string> out;
        std::size_t pos = 0;
        while ((pos = body_.find("{{", pos)) != std::string::npos) {
            auto close = body_.find("}}", pos + 2);
            if (close == std::string::npos) {
                throw PromptError(std::string("template ") + to_string(id_) + " has an unterminated placeholder");
            }
            out.insert(body_.substr(pos + 2, close - pos - 2));
            pos = close + 2;
        }
        return out;
    }

    /// Single pass; every slot in the body must be bound.
    std::string render(const PromptBindings& values) const {
        std::string out;
        out.reserve(body_.size() + 256);
        std::size_t pos = 0;
        while (true) {
            auto open = body_.find("{{", pos);
            if (open == std::string::npos) {
                out.append(body_, pos);
                break;
            }
            auto close = body_.find("}}", open + 2);
            out.append(body_, pos, open - pos);
            const auto name = body_.substr(open + 2, close - open - 2);
            auto it = values.find(name);
            if (it == values.end()) {
                throw PromptError(std::string("template ") + to_string(id_) + ": placeholder {{" + name + "}} is unbound");
            }
            out += it->second;
            pos = close + 2;
        }
        return out;
    }

private:
    PromptId id_;
    std::string body_;
};

inline std::string default_template_body(PromptId id) {
    switch (id) {
        case PromptId::P1:
            return R"(TEMPLATE: P1
You analyze questions about time-stamped facts. Knowledge window: {{window}}.
Identify the entities the question is about, rewrite the question with every
temporal expression removed, and give the date range it refers to as ISO dates.
Leave start and end empty when the question names no time.
Reply with exactly one fenced block:
```analysis
entities: <entity>; <entity>
query: <question without temporal expressions>
start: <YYYY-MM-DD>
end: <YYYY-MM-DD>
```

### QUESTION
{{question}}
)";
        case PromptId::P2:
            return R"(TEMPLATE: P2
From your own knowledge, list past events that explain the history behind the
question up to the end of the time window. One event per line, inside a fenced
block, in the form "subject | relation | object | YYYY-MM-DD".
Reply NONE if you know of no such events.

### WINDOW
{{window}}

### QUESTION
{{question}}
)";
        case PromptId::P3:
            return R"(TEMPLATE: P3
Below is the event timeline collected so far for the question. If events needed
to answer it are missing, either list them as "subject | relation | object | YYYY-MM-DD"
lines, or write one line "FOLLOW-UP: <search query>" describing what to look up.
Reply NONE if the timeline is sufficient.

### GRAPH
{{graph_summary}}
### QUESTION
{{question}}
)";
        case PromptId::P4:
            return R"(TEMPLATE: P4
Answer the question using the timeline and entity histories below. Facts marked
(historical) or (augmented) were reconstructed, not retrieved. If the evidence
does not settle the question, answer UNKNOWN. Multiple-choice questions may use
general knowledge; answer with the option label. When several answers apply,
separate them with commas. End with a line "ANSWER: <answer>".

### WINDOW
{{window}}

### TEMPORAL VIEW
{{temporal_view}}
### ENTITY VIEWS
{{entity_views}}
### QUESTION
{{question}}
)";
        case PromptId::Direct:
            return R"(TEMPLATE: DIRECT
Answer the question from your own knowledge. If you do not know, answer UNKNOWN.
Multiple-choice questions: answer with the option label. When several answers
apply, separate them with commas. End with a line "ANSWER: <answer>".

### QUESTION
{{question}}
)";
        case PromptId::Rag:
            return R"(TEMPLATE: RAG
Answer the question using the retrieved facts below. If they do not help, answer
UNKNOWN. Multiple-choice questions: answer with the option label. When several
answers apply, separate them with commas. End with a line "ANSWER: <answer>".

### CONTEXT
{{context}}
### QUESTION
{{question}}
)";
    }
    return {};
}

/// The six templates in use. Files named <ID>.txt in a prompts directory
/// replace the built-in bodies.
class PromptSet {
public:
    PromptSet() {
        for (auto id : all_prompt_ids) templates_.emplace(id, PromptTemplate(id, default_template_body(id)));
    }

    static PromptSet from_directory(const std::filesystem::path& dir) {
        PromptSet set;
        set.reload(dir);
        return set;
    }

    /// Re-reads template files; missing files keep the current body.
    void reload(const std::filesystem::path& dir) {
        if (!std::filesystem::is_directory(dir)) throw PromptError("prompts.dir '" + dir.string() + "' is not a directory");
        for (auto id : all_prompt_ids) {
            const auto file = dir / (std::string(to_string(id)) + ".txt");
            if (!std::filesystem::exists(file)) continue;
            std::ifstream in(file);
            std::stringstream ss;
            ss << in.rdbuf();
            templates_.insert_or_assign(id, PromptTemplate(id, ss.str()));
        }
    }

    const PromptTemplate& get(PromptId id) const { return templates_.at(id); }

private:
    std::map<PromptId, PromptTemplate> templates_;
};

/// Reads "### <name>" blocks back out of a rendered prompt. Text before the
/// first header is ignored.
inline std::map<std::string, std::string> prompt_sections(std::string_view prompt) {
    std::map<std::string, std::string> out;
    std::string current;
    bool in_section = false;
    std::size_t pos = 0;
    while (pos <= prompt.size()) {
        auto eol = prompt.find('\n', pos);
        if (eol == std::string_view::npos) eol = prompt.size();
        std::string_view line = prompt.substr(pos, eol - pos);
        if (line.starts_with("### ")) {
            current = std::string(line.substr(4));
            out[current];
            in_section = true;
        } else if (in_section) {
            out[current].append(line).push_back('\n');
        }
        pos = eol + 1;
    }
    for (auto& [_, body] : out) {
        while (!body.empty() && (body.back() == '\n' || body.back() == ' ')) body.pop_back();
    }
    return out;
}

/// The id named on the "TEMPLATE:" line, if any.
inline std::optional<std::string> prompt_template_tag(std::string_view prompt) {
    constexpr std::string_view tag = "TEMPLATE: ";
    auto pos = prompt.find(tag);
    if (pos == std::string_view::npos) return std::nullopt;
    auto eol = prompt.find('\n', pos);
    auto v = prompt.substr(pos + tag.size(), (eol == std::string_view::npos ? prompt.size() : eol) - pos - tag.size());
    while (!v.empty() && (v.back() == '\r' || v.back() == ' ')) v.remove_suffix(1);
    return std::string(v);
}

}  // namespace chronos
