#pragma once
// Deterministic stand-in for a frozen LLM. It reads the template id and the
// "### " sections of each prompt and answers with fixed rules:
//
//   P1      entities by longest lexicon match; window from date phrases
//   P2      facts from its memory table (what the model "knew" before cutoff)
//   P3      one follow-up naming a lexicon entity the question hints at but
//           the timeline lacks
//   P4      commonsense options from memory; "which X's Y" via entity views;
//           otherwise the latest matching event as of the window end, or
//           every distinct value inside the window for plural questions
//   DIRECT  memory only, UNKNOWN for anything after the cutoff
//   RAG     like P4 over the context, but trusts the context even when no
//           fact fits the date
//
// The completion is a pure function of the prompt text.

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <optional>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "chronos/date.hpp"
#include "chronos/knowledge_store.hpp"
#include "chronos/llm_gateway.hpp"
#include "chronos/prompts.hpp"

namespace chronos {

namespace scripted {

/// Lowercase word tokens for phrase matching. Curly apostrophes fold to "'",
/// other non-ASCII bytes separate words.
inline std::vector<std::string> match_tokens(std::string_view text) {
    std::string folded;
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (i + 2 < text.size() && static_cast<unsigned char>(text[i]) == 0xE2 &&
            static_cast<unsigned char>(text[i + 1]) == 0x80 &&
            (static_cast<unsigned char>(text[i + 2]) == 0x99 || static_cast<unsigned char>(text[i + 2]) == 0x98)) {
            folded.push_back('\'');
            i += 2;
        } else {
            folded.push_back(text[i]);
        }
    }
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&] {
        while (!cur.empty() && cur.front() == '\'') cur.erase(cur.begin());
        while (!cur.empty() && cur.back() == '\'') cur.pop_back();
        if (!cur.empty()) out.push_back(cur);
        cur.clear();
    };
    for (char c : folded) {
        auto u = static_cast<unsigned char>(c);
        if ((u < 0x80 && std::isalnum(u)) || c == '\'') {
            cur.push_back(static_cast<char>(std::tolower(u)));
        } else {
            flush();
        }
    }
    flush();
    return out;
}

inline std::string fold_phrase(std::string_view text) {
    std::string out;
    for (const auto& t : match_tokens(text)) {
        if (!out.empty()) out.push_back(' ');
        out += t;
    }
    return out;
}

inline bool contains_phrase(const std::vector<std::string>& haystack, const std::vector<std::string>& needle) {
    if (needle.empty() || needle.size() > haystack.size()) return false;
    return std::search(haystack.begin(), haystack.end(), needle.begin(), needle.end()) != haystack.end();
}

inline constexpr std::array<const char*, 12> month_names{"january", "february", "march",     "april",
                                                         "may",     "june",     "july",      "august",
                                                         "september", "october", "november", "december"};

inline int month_number(std::string_view word) {
    std::string w = detail::ascii_lower(std::string(word));
    if (!w.empty() && w.back() == '.') w.pop_back();
    for (int i = 0; i < 12; ++i) {
        std::string_view full = month_names[i];
        if (w == full || (w.size() >= 3 && full.starts_with(w))) return i + 1;
    }
    return 0;
}

/// Content words: no stopwords, month names, numbers, or possessive 's.
inline std::set<std::string> content_words(std::string_view text) {
    static const std::set<std::string> stop{
        "a",     "an",    "and",   "any",   "are",   "as",    "at",    "by",    "did",  "do",     "does",
        "during", "for",  "from",  "had",   "has",   "have",  "his",   "her",   "its",  "in",     "is",
        "it",    "led",   "of",    "on",    "or",    "point", "the",   "their", "to",   "was",    "were",
        "what",  "when",  "which", "who",   "whom",  "whose", "with",  "held",  "none", "unknown"};
    std::set<std::string> out;
    for (auto t : match_tokens(text)) {
        if (t.size() > 2 && t.ends_with("'s")) t.resize(t.size() - 2);
        if (t.size() < 2 || stop.contains(t) || month_number(t) != 0) continue;
        if (std::all_of(t.begin(), t.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) continue;
        out.insert(t);
    }
    return out;
}

}  // namespace scripted

/// Canonical entity names with optional aliases. File format: one entity
/// per line, aliases after the canonical name separated by tabs; '#' starts
/// a comment line.
class EntityLexicon {
public:
    struct Entry {
        std::string canonical;
        std::vector<std::string> aliases;
    };

    EntityLexicon() = default;
    explicit EntityLexicon(std::vector<Entry> entries) : entries_(std::move(entries)) { index(); }

    static EntityLexicon parse(std::istream& in) {
        std::vector<Entry> entries;
        std::string line;
        while (std::getline(in, line)) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (detail::trim(line).empty() || detail::trim(line).starts_with("#")) continue;
            auto fields = detail::split(line, '\t');
            Entry e{detail::collapse_whitespace(fields[0]), {}};
            for (std::size_t i = 1; i < fields.size(); ++i) {
                auto a = detail::collapse_whitespace(fields[i]);
                if (!a.empty()) e.aliases.push_back(a);
            }
            entries.push_back(std::move(e));
        }
        return EntityLexicon(std::move(entries));
    }

    static EntityLexicon load(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw std::runtime_error("cannot open entity lexicon '" + path + "'");
        return parse(in);
    }

    const std::vector<Entry>& entries() const { return entries_; }

    /// Canonical names in order of first appearance; longest match wins at
    /// each position and matches never overlap.
    std::vector<std::string> match(std::string_view text) const {
        const auto toks = scripted::match_tokens(text);
        std::vector<std::string> found;
        std::size_t i = 0;
        while (i < toks.size()) {
            std::size_t best_len = 0;
            const std::string* best = nullptr;
            for (const auto& [phrase, canonical] : phrases_) {
                if (phrase.size() <= best_len || i + phrase.size() > toks.size()) continue;
                if (std::equal(phrase.begin(), phrase.end(), toks.begin() + static_cast<std::ptrdiff_t>(i))) {
                    best_len = phrase.size();
                    best = &canonical;
                }
            }
            if (best) {
                if (std::find(found.begin(), found.end(), *best) == found.end()) found.push_back(*best);
                i += best_len;
            } else {
                ++i;
            }
        }
        return found;
    }

private:
    void index() {
        phrases_.clear();
        for (const auto& e : entries_) {
            phrases_.emplace_back(scripted::match_tokens(e.canonical), e.canonical);
            for (const auto& a : e.aliases) phrases_.emplace_back(scripted::match_tokens(a), e.canonical);
        }
    }

    std::vector<Entry> entries_;
    std::vector<std::pair<std::vector<std::string>, std::string>> phrases_;
};

struct ScriptedOptions {
    Date cutoff = Date::from_ymd(2024, 1, 1);          // end of the model's own knowledge
    Date reference_date = Date::from_ymd(2025, 12, 31);  // "today" for relative phrases
};

class ScriptedBackend final : public LlmBackend {
public:
    ScriptedBackend(EntityLexicon lexicon, std::vector<KnowledgeQuadruple> memory, ScriptedOptions options = {})
        : lexicon_(std::move(lexicon)), memory_(std::move(memory)), options_(options) {}

    std::string name() const override { return "scripted"; }

    Completion complete(const std::string& prompt) const override {
        const auto tag = prompt_template_tag(prompt);
        const auto id = tag ? prompt_id_from_string(*tag) : std::nullopt;
        if (!id) throw BackendError("scripted backend: unrecognized template id '" + tag.value_or("") + "'");
        const auto sections = prompt_sections(prompt);
        auto section = [&](const char* name) {
            auto it = sections.find(name);
            return it == sections.end() ? std::string() : it->second;
        };
        switch (*id) {
            case PromptId::P1: return {analyze(section("QUESTION")), {}, {}};
            case PromptId::P2: return {history(section("QUESTION"), section("WINDOW")), {}, {}};
            case PromptId::P3: return {follow_up(section("QUESTION"), section("GRAPH")), {}, {}};
            case PromptId::P4:
                return {final_answer(section("QUESTION"), section("TEMPORAL VIEW"), section("ENTITY VIEWS")), {}, {}};
            case PromptId::Direct: return {direct(section("QUESTION")), {}, {}};
            case PromptId::Rag: return {rag(section("QUESTION"), section("CONTEXT")), {}, {}};
        }
        throw BackendError("scripted backend: unhandled template");
    }

    // ---- question understanding, exposed for tests ----

    struct TemporalExpression {
        TimeWindow window;
        std::size_t begin = 0;  // byte span within the question
        std::size_t end = 0;
    };

    /// Recognizes "on <Month D, YYYY>", "<Month D, YYYY>", ISO dates,
    /// "in/during <Month YYYY>", "in/during <YYYY>", and a few phrases
    /// relative to the reference date.
    std::optional<TemporalExpression> find_temporal_expression(std::string_view question) const {
        const std::string lower = detail::ascii_lower(std::string(question));
        static const std::string month =
            "(january|february|march|april|may|june|july|august|september|october|november|december|"
            "jan|feb|mar|apr|jun|jul|aug|sept|sep|oct|nov|dec)\\.?";
        static const std::regex day_re("(?:\\b(?:on|as of)\\s+)?\\b" + month + "\\s+(\\d{1,2})(?:st|nd|rd|th)?,?\\s+(\\d{4})\\b");
        static const std::regex iso_re("(?:\\bon\\s+)?\\b(\\d{4})-(\\d{2})-(\\d{2})\\b");
        static const std::regex month_re("\\b(?:in|during)\\s+" + month + "\\s+(\\d{4})\\b");
        static const std::regex year_re("\\b(?:in|during)\\s+(\\d{4})\\b");
        static const std::regex rel_re("\\b(last month|last year|this month|this year|yesterday|today)\\b");
        std::smatch m;
        auto span = [&](const std::smatch& mm) {
            return std::pair<std::size_t, std::size_t>{static_cast<std::size_t>(mm.position(0)),
                                                       static_cast<std::size_t>(mm.position(0) + mm.length(0))};
        };
        auto make = [&](Date a, Date b, const std::smatch& mm) -> std::optional<TemporalExpression> {
            auto [s, e] = span(mm);
            return TemporalExpression{TimeWindow{a, b}, s, e};
        };
        if (std::regex_search(lower, m, day_re)) {
            int mo = scripted::month_number(m[1].str()), d = std::stoi(m[2].str()), y = std::stoi(m[3].str());
            if (Date::valid_ymd(y, mo, d)) return make(Date::from_ymd(y, mo, d), Date::from_ymd(y, mo, d), m);
        }
        if (std::regex_search(lower, m, iso_re)) {
            int y = std::stoi(m[1].str()), mo = std::stoi(m[2].str()), d = std::stoi(m[3].str());
            if (Date::valid_ymd(y, mo, d)) return make(Date::from_ymd(y, mo, d), Date::from_ymd(y, mo, d), m);
        }
        if (std::regex_search(lower, m, month_re)) {
            int mo = scripted::month_number(m[1].str()), y = std::stoi(m[2].str());
            return make(Date::from_ymd(y, mo, 1), Date::from_ymd(y, mo, Date::days_in_month(y, mo)), m);
        }
        if (std::regex_search(lower, m, year_re)) {
            int y = std::stoi(m[1].str());
            return make(Date::from_ymd(y, 1, 1), Date::from_ymd(y, 12, 31), m);
        }
        if (std::regex_search(lower, m, rel_re)) {
            const auto ref = options_.reference_date.ymd();
            const std::string what = m[1].str();
            if (what == "today") return make(options_.reference_date, options_.reference_date, m);
            if (what == "yesterday") return make(options_.reference_date - 1, options_.reference_date - 1, m);
            if (what == "this year") return make(Date::from_ymd(ref.year, 1, 1), Date::from_ymd(ref.year, 12, 31), m);
            if (what == "last year") return make(Date::from_ymd(ref.year - 1, 1, 1), Date::from_ymd(ref.year - 1, 12, 31), m);
            int y = ref.year, mo = ref.month;
            if (what == "last month" && --mo == 0) mo = 12, --y;
            return make(Date::from_ymd(y, mo, 1), Date::from_ymd(y, mo, Date::days_in_month(y, mo)), m);
        }
        return std::nullopt;
    }

    /// The question with its temporal expression cut out.
    std::string time_agnostic(std::string_view question) const {
        std::string q(question);
        if (auto t = find_temporal_expression(question)) q.erase(t->begin, t->end - t->begin);
        q = detail::collapse_whitespace(q);
        for (const char* p : {" ?", " ,", " ."}) {
            for (auto pos = q.find(p); pos != std::string::npos; pos = q.find(p)) q.erase(pos, 1);
        }
        return q;
    }

    const EntityLexicon& lexicon() const { return lexicon_; }

private:
    struct Event {
        Date date;
        std::string subject, relation, object;
    };

    struct Question {
        std::string text;
        std::vector<std::pair<std::string, std::string>> options;  // label, text
        std::optional<TimeWindow> window;
        std::vector<std::string> entities;  // normalized canonical names
        bool plural = false;
    };

    Question read_question(const std::string& section) const {
        static const std::regex option_re("^\\s*([A-Z])[.)]\\s+(.+?)\\s*$");
        Question q;
        std::string text;
        for (const auto& line : detail::split_lines(section)) {
            std::smatch m;
            if (std::regex_match(line, m, option_re)) {
                q.options.emplace_back(m[1].str(), m[2].str());
            } else if (detail::trim(line) != "Options:") {
                text += line + " ";
            }
        }
        q.text = detail::collapse_whitespace(text);
        if (auto t = find_temporal_expression(q.text)) q.window = t->window;
        for (const auto& e : lexicon_.match(q.text)) q.entities.push_back(normalize_entity(e));
        static const std::regex plural_re("\\b(were|people|companies|at any point)\\b");
        q.plural = std::regex_search(detail::ascii_lower(q.text), plural_re);
        return q;
    }

    static std::optional<Event> parse_event_line(const std::string& raw) {
        static const std::string dash = " \xE2\x80\x94 ";
        auto line = detail::trim(raw);
        if (line.size() < 14 || line[0] != '[' || line[11] != ']') return std::nullopt;
        Date d;
        if (!Date::try_parse(std::string_view(line).substr(1, 10), d)) return std::nullopt;
        std::string body = line.substr(13);
        if (auto paren = body.rfind(" ("); paren != std::string::npos && body.back() == ')') body.resize(paren);
        auto a = body.find(dash);
        if (a == std::string::npos) return std::nullopt;
        auto b = body.find(dash, a + dash.size());
        if (b == std::string::npos) return std::nullopt;
        return Event{d, body.substr(0, a), body.substr(a + dash.size(), b - a - dash.size()), body.substr(b + dash.size())};
    }

    static std::vector<Event> parse_events(const std::string& text) {
        std::vector<Event> out;
        for (const auto& line : detail::split_lines(text)) {
            if (auto e = parse_event_line(line)) out.push_back(std::move(*e));
        }
        return out;
    }

    /// Entity name -> its events, from "Entity: <name>" blocks.
    static std::vector<std::pair<std::string, std::vector<Event>>> parse_entity_views(const std::string& text) {
        std::vector<std::pair<std::string, std::vector<Event>>> out;
        for (const auto& line : detail::split_lines(text)) {
            if (line.starts_with("Entity: ")) {
                out.emplace_back(detail::trim(std::string_view(line).substr(8)), std::vector<Event>{});
            } else if (!out.empty()) {
                if (auto e = parse_event_line(line)) out.back().second.push_back(std::move(*e));
            }
        }
        return out;
    }

    static std::string reply(const std::optional<std::string>& ans) { return "ANSWER: " + ans.value_or("UNKNOWN") + "\n"; }

    static std::string month_year(Date d) {
        auto [y, m, _] = d.ymd();
        std::string name = scripted::month_names[m - 1];
        name[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(name[0])));
        return name + " " + std::to_string(y);
    }

    std::vector<Event> memory_events() const {
        std::vector<Event> out;
        for (const auto& q : memory_) out.push_back({q.timestamp, q.subject, q.relation, q.object});
        return out;
    }

    /// Memory facts tied to the question: an entity it names, or a subject
    /// phrase it contains.
    std::vector<KnowledgeQuadruple> recall(const std::string& question, Date not_after) const {
        const auto toks = scripted::match_tokens(question);
        std::set<std::string> ents;
        for (const auto& e : lexicon_.match(question)) ents.insert(normalize_entity(e));
        std::vector<KnowledgeQuadruple> out;
        for (const auto& q : memory_) {
            if (q.timestamp > not_after) continue;
            const bool named = ents.contains(normalize_entity(q.subject)) || ents.contains(normalize_entity(q.object));
            if (named || scripted::contains_phrase(toks, scripted::match_tokens(q.subject))) out.push_back(q);
        }
        return out;
    }

    std::optional<std::string> pick_option(const Question& q) const {
        const auto toks = scripted::match_tokens(q.text);
        for (const auto& fact : memory_) {
            if (!scripted::contains_phrase(toks, scripted::match_tokens(fact.subject))) continue;
            for (const auto& [label, text] : q.options) {
                if (scripted::fold_phrase(text) == scripted::fold_phrase(fact.object)) return label;
            }
        }
        return std::nullopt;
    }

    /// (date, value) pairs the question asks about, in input order. Subject
    /// matches win over object matches.
    static std::vector<std::pair<Date, std::string>> relevant(const Question& q, const std::vector<Event>& events) {
        std::vector<std::pair<Date, std::string>> by_subject, by_object;
        auto has = [&](const std::string& name) {
            return std::find(q.entities.begin(), q.entities.end(), normalize_entity(name)) != q.entities.end();
        };
        for (const auto& e : events) {
            if (has(e.subject)) by_subject.emplace_back(e.date, e.object);
            else if (has(e.object)) by_object.emplace_back(e.date, e.subject);
        }
        return by_subject.empty() ? by_object : by_subject;
    }

    static std::optional<std::string> resolve(const Question& q, const std::vector<std::pair<Date, std::string>>& facts) {
        if (q.plural && q.window) {
            std::vector<std::pair<Date, std::string>> inside;
            for (const auto& f : facts) {
                if (q.window->contains(f.first)) inside.push_back(f);
            }
            std::stable_sort(inside.begin(), inside.end(), [](auto& a, auto& b) { return a.first < b.first; });
            std::vector<std::string> names;
            for (const auto& [_, v] : inside) {
                if (std::find_if(names.begin(), names.end(), [&](const std::string& n) {
                        return normalize_entity(n) == normalize_entity(v);
                    }) == names.end()) {
                    names.push_back(v);
                }
            }
            if (names.empty()) return std::nullopt;
            std::string out;
            for (const auto& n : names) out += (out.empty() ? "" : ", ") + n;
            return out;
        }
        const std::pair<Date, std::string>* best = nullptr;
        for (const auto& f : facts) {
            if (q.window && f.first > q.window->end) continue;
            if (!best || f.first >= best->first) best = &f;
        }
        return best ? std::optional<std::string>(best->second) : std::nullopt;
    }

    /// "Which <kind>'s <noun> ..." : the entity view whose name carries the
    /// noun and whose latest event on or before the window end is the most
    /// recent; the answer is the part of its name before the noun.
    std::optional<std::string> possessive_lookup(const Question& q, const std::string& entity_views_text) const {
        static const std::regex re("\\bwhich\\s+([a-z]+)'s\\s+([a-z]+)");
        std::smatch m;
        const auto folded = scripted::fold_phrase(q.text);
        if (!std::regex_search(folded, m, re)) return std::nullopt;
        const std::string noun = m[2].str();
        std::optional<std::string> best;
        std::optional<Date> best_date;
        for (const auto& [name, events] : parse_entity_views(entity_views_text)) {
            const auto toks = scripted::match_tokens(name);
            auto it = std::find(toks.begin(), toks.end(), noun);
            if (it == toks.end() || it == toks.begin()) continue;
            std::optional<Date> latest;
            for (const auto& e : events) {
                if (q.window && e.date > q.window->end) continue;
                if (!latest || e.date > *latest) latest = e.date;
            }
            if (!latest || (best_date && *latest <= *best_date)) continue;
            best_date = latest;
            // keep the original spelling of the leading words
            const auto words = detail::split(detail::collapse_whitespace(name), ' ');
            std::string prefix;
            for (std::size_t i = 0; i < static_cast<std::size_t>(it - toks.begin()) && i < words.size(); ++i) {
                prefix += (prefix.empty() ? "" : " ") + words[i];
            }
            best = prefix;
        }
        return best;
    }

    static bool is_possessive_question(const Question& q) {
        static const std::regex re("\\bwhich\\s+[a-z]+'s\\s+[a-z]+");
        return std::regex_search(scripted::fold_phrase(q.text), re);
    }

    std::string analyze(const std::string& question) const {
        std::string out = "```analysis\nentities: ";
        const auto ents = lexicon_.match(question);
        for (std::size_t i = 0; i < ents.size(); ++i) out += (i ? "; " : "") + ents[i];
        out += "\nquery: " + time_agnostic(question) + "\n";
        if (auto t = find_temporal_expression(question)) {
            out += "start: " + t->window.start.to_string() + "\nend: " + t->window.end.to_string() + "\n";
        } else {
            out += "start:\nend:\n";
        }
        return out + "```\n";
    }

    std::string history(const std::string& q0, const std::string& window_text) const {
        Date not_after = Date::max();
        if (auto pos = window_text.rfind(' '); pos != std::string::npos) {
            Date::try_parse(detail::trim(std::string_view(window_text).substr(pos + 1)), not_after);
        }
        const auto facts = recall(q0, not_after);
        if (facts.empty()) return "NONE\n";
        std::string out = "```quadruples\n";
        for (const auto& f : facts) {
            out += f.subject + " | " + f.relation + " | " + f.object + " | " + f.timestamp.to_string() + "\n";
        }
        return out + "```\n";
    }

    std::string follow_up(const std::string& question, const std::string& graph) const {
        const auto asked = scripted::content_words(question);
        const auto seen = scripted::content_words(graph);
        const auto graph_toks = scripted::match_tokens(graph);
        const Question q = read_question(question);
        const std::string* best = nullptr;
        std::size_t best_asked = 0, best_seen = 0;
        for (const auto& entry : lexicon_.entries()) {
            if (scripted::contains_phrase(graph_toks, scripted::match_tokens(entry.canonical))) continue;
            std::size_t a = 0, s = 0;
            for (const auto& w : scripted::content_words(entry.canonical)) {
                a += asked.contains(w);
                s += seen.contains(w);
            }
            if (a == 0) continue;
            if (!best || a > best_asked || (a == best_asked && s > best_seen)) {
                best = &entry.canonical;
                best_asked = a;
                best_seen = s;
            }
        }
        if (!best) return "NONE\n";
        std::string query = *best;
        if (q.window) query += " " + month_year(q.window->end);
        return "FOLLOW-UP: " + query + "\n";
    }

    std::string final_answer(const std::string& question, const std::string& temporal, const std::string& entity) const {
        const Question q = read_question(question);
        if (!q.options.empty()) return reply(pick_option(q));
        if (is_possessive_question(q)) return reply(possessive_lookup(q, entity));
        std::vector<Event> events = parse_events(temporal);
        if (events.empty() && detail::trim(temporal) == "(not provided)") {
            std::set<std::tuple<std::int64_t, std::string, std::string, std::string>> seen;
            for (const auto& [_, evs] : parse_entity_views(entity)) {
                for (const auto& e : evs) {
                    if (seen.insert({e.date.days(), e.subject, e.relation, e.object}).second) events.push_back(e);
                }
            }
            std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.date < b.date; });
        }
        return reply(resolve(q, relevant(q, events)));
    }

    std::string direct(const std::string& question) const {
        const Question q = read_question(question);
        if (!q.options.empty()) return reply(pick_option(q));
        if (q.window && q.window->start >= options_.cutoff) return reply(std::nullopt);
        return reply(resolve(q, relevant(q, memory_events())));
    }

    std::string rag(const std::string& question, const std::string& context) const {
        const Question q = read_question(question);
        if (!q.options.empty()) return reply(pick_option(q));
        const auto facts = relevant(q, parse_events(context));
        if (auto a = resolve(q, facts)) return reply(a);
        return reply(facts.empty() ? std::nullopt : std::optional<std::string>(facts.front().second));
    }

    EntityLexicon lexicon_;
    std::vector<KnowledgeQuadruple> memory_;
    ScriptedOptions options_;
};

}  // namespace chronos
