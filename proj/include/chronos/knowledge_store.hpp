#pragma once
// Time-stamped knowledge quadruples and an indexed, deduplicating store.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "chronos/date.hpp"

namespace chronos {

class StoreError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string collapse_whitespace(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    bool pending_space = false;
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            pending_space = !out.empty();
            continue;
        }
        if (pending_space) out.push_back(' ');
        pending_space = false;
        out.push_back(c);
    }
    return out;
}

inline std::string ascii_lower(std::string s) {
    for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

}  // namespace detail

/// Trim, collapse internal whitespace runs, ASCII case-fold. Used for every
/// index key and entity-equality check.
inline std::string normalize_entity(std::string_view name) {
    return detail::ascii_lower(detail::collapse_whitespace(name));
}

struct KnowledgeQuadruple {
    std::string subject;
    std::string relation;
    std::string object;
    Date timestamp;

    /// Throws StoreError when a field is blank.
    static KnowledgeQuadruple make(std::string_view subject, std::string_view relation,
                                   std::string_view object, Date timestamp) {
        KnowledgeQuadruple q{detail::collapse_whitespace(subject),
                             detail::collapse_whitespace(relation),
                             detail::collapse_whitespace(object), timestamp};
        q.validate();
        return q;
    }

    void validate() const {
        auto check = [](const std::string& v, const char* field) {
            if (detail::collapse_whitespace(v).empty()) {
                throw StoreError(std::string("quadruple field '") + field + "' is empty");
            }
        };
        check(subject, "subject");
        check(relation, "relation");
        check(object, "object");
    }

    /// Identity under normalization; two quadruples with the same key are the same event.
    std::tuple<std::string, std::string, std::string, std::int64_t> key() const {
        return {normalize_entity(subject), normalize_entity(relation), normalize_entity(object),
                timestamp.days()};
    }

    bool involves(std::string_view normalized_entity) const {
        return normalize_entity(subject) == normalized_entity ||
               normalize_entity(object) == normalized_entity;
    }

    /// Text handed to the embedder. Timestamps stay out of it.
    std::string text() const { return subject + " " + relation + " " + object; }

    friend bool operator==(const KnowledgeQuadruple&, const KnowledgeQuadruple&) = default;
};

inline void to_json(nlohmann::ordered_json& j, const KnowledgeQuadruple& q) {
    j = nlohmann::ordered_json{{"subject", q.subject},
                               {"relation", q.relation},
                               {"object", q.object},
                               {"timestamp", q.timestamp.to_string()}};
}

/// Decodes one JSON object. Throws StoreError on missing keys or a bad date.
inline KnowledgeQuadruple quadruple_from_json(const nlohmann::json& j) {
    if (!j.is_object()) throw StoreError("expected a JSON object");
    auto field = [&](const char* name) {
        auto it = j.find(name);
        if (it == j.end() || !it->is_string()) {
            throw StoreError(std::string("missing string field '") + name + "'");
        }
        return it->get<std::string>();
    };
    const std::string stamp = field("timestamp");
    Date d;
    if (!Date::try_parse(stamp, d)) throw StoreError("invalid timestamp '" + stamp + "'");
    return KnowledgeQuadruple::make(field("subject"), field("relation"), field("object"), d);
}

inline std::ostream& operator<<(std::ostream& os, const KnowledgeQuadruple& q) {
    return os << "(" << q.subject << ", " << q.relation << ", " << q.object << ", "
              << q.timestamp.to_string() << ")";
}

/// Ordered collection of unique quadruples with entity and time indices.
///
/// Positions are load order and act as the final tie-break everywhere. Both
/// indices keep positions sorted by (timestamp, position). The store is
/// read-only once serving begins; insert() needs exclusive access.
class QuadrupleStore {
public:
    using Position = std::size_t;

    std::size_t size() const { return items_.size(); }
    bool empty() const { return items_.empty(); }
    const std::vector<KnowledgeQuadruple>& items() const { return items_; }
    const KnowledgeQuadruple& at(Position p) const { return items_.at(p); }

    /// Returns false without mutating when an equal event already exists.
    bool insert(const KnowledgeQuadruple& quad) {
        quad.validate();
        auto key = quad.key();
        if (keys_.contains(key)) return false;
        keys_.insert(std::move(key));

        const Position pos = items_.size();
        items_.push_back(quad);
        place(time_index_, pos);
        place(entity_index_[normalize_entity(quad.subject)], pos);
        const auto obj = normalize_entity(quad.object);
        if (obj != normalize_entity(quad.subject)) place(entity_index_[obj], pos);
        return true;
    }

    /// Positions of every item whose subject or object normalizes to `entity`.
    const std::vector<Position>& entity_positions(std::string_view entity) const {
        static const std::vector<Position> none;
        auto it = entity_index_.find(normalize_entity(entity));
        return it == entity_index_.end() ? none : it->second;
    }

    std::vector<KnowledgeQuadruple> events_for_entity(std::string_view entity) const {
        return gather(entity_positions(entity));
    }

    std::vector<KnowledgeQuadruple> events_in_window(const TimeWindow& window) const {
        auto lo = std::partition_point(time_index_.begin(), time_index_.end(),
                                       [&](Position p) { return items_[p].timestamp < window.start; });
        auto hi = std::partition_point(lo, time_index_.end(),
                                       [&](Position p) { return items_[p].timestamp <= window.end; });
        return gather({lo, hi});
    }

    const std::vector<Position>& time_index() const { return time_index_; }

    bool contains_entity(std::string_view entity) const {
        return entity_index_.contains(normalize_entity(entity));
    }

    std::vector<std::string> entities() const {
        std::vector<std::string> out;
        out.reserve(entity_index_.size());
        for (const auto& [k, _] : entity_index_) out.push_back(k);
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    void place(std::vector<Position>& index, Position pos) const {
        auto it = std::upper_bound(index.begin(), index.end(), pos, [&](Position a, Position b) {
            return std::tie(items_[a].timestamp, a) < std::tie(items_[b].timestamp, b);
        });
        index.insert(it, pos);
    }

    std::vector<KnowledgeQuadruple> gather(const std::vector<Position>& positions) const {
        std::vector<KnowledgeQuadruple> out;
        out.reserve(positions.size());
        for (Position p : positions) out.push_back(items_[p]);
        return out;
    }

    std::vector<KnowledgeQuadruple> items_;
    std::set<std::tuple<std::string, std::string, std::string, std::int64_t>> keys_;
    std::unordered_map<std::string, std::vector<Position>> entity_index_;
    std::vector<Position> time_index_;
};

/// Reads JSON Lines. Blank lines are skipped; duplicates keep the first
/// occurrence. Errors carry the 1-based line number.
inline QuadrupleStore read_store(std::istream& in, const std::string& source = "<stream>") {
    QuadrupleStore store;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (detail::collapse_whitespace(line).empty()) continue;
        try {
            store.insert(quadruple_from_json(nlohmann::json::parse(line)));
        } catch (const std::exception& e) {
            throw StoreError(source + ":" + std::to_string(lineno) + ": " + e.what());
        }
    }
    return store;
}

inline QuadrupleStore load_store(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw StoreError("cannot open store file '" + path + "'");
    return read_store(in, path);
}

inline void write_store(std::ostream& out, const QuadrupleStore& store) {
    for (const auto& q : store.items()) out << nlohmann::ordered_json(q).dump() << '\n';
}

inline void save_store(const std::string& path, const QuadrupleStore& store) {
    std::ofstream out(path);
    if (!out) throw StoreError("cannot write store file '" + path + "'");
    write_store(out, store);
}

}  // namespace chronos
