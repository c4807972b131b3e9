#pragma once
// Shared fixtures for the unit suites.

#include <string>
#include <vector>

#include "chronos/knowledge_store.hpp"

namespace chronos::testing {

inline std::string data_path(const std::string& rel) { return std::string(CHRONOS_DATA_DIR) + "/" + rel; }

inline Date d(const char* iso) { return Date::parse(iso); }

inline KnowledgeQuadruple quad(const char* s, const char* r, const char* o, const char* t) {
    return KnowledgeQuadruple::make(s, r, o, Date::parse(t));
}

inline const std::string kRichest = "World\xE2\x80\x99s Richest Person";

inline QuadrupleStore table1_store() { return load_store(data_path("table1/store.jsonl")); }

inline std::vector<KnowledgeQuadruple> richest_events() {
    const auto store = table1_store();
    std::vector<KnowledgeQuadruple> out;
    for (const auto& q : store.items()) {
        if (q.subject == kRichest) out.push_back(q);
    }
    return out;
}

}  // namespace chronos::testing
