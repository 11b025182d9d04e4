#pragma once

#include <functional>
#include <vector>

#include "engram/config.hpp"
#include "engram/ltm.hpp"
#include "engram/schema.hpp"

namespace engram {

/// What the importance encoder measures about one recall: how many cues found
/// it, how many attributes it carries and where they sit, and how many of
/// those attributes are irrational.
struct ImportanceRecord {
    std::size_t cue_count = 0;
    std::size_t attribute_count = 0;
    std::vector<FieldId> location_map; // ascending field ids of defined attributes
    std::size_t irrational_count = 0;
};

inline ImportanceRecord encode_importance(const LtmWord& word, const SearchCues& cues,
                                          const AttributeSchema& schema) {
    ImportanceRecord rec;
    rec.cue_count = cues.size();
    for (const auto& [f, v] : word.values) {
        rec.location_map.push_back(f);
        if (schema.field(f).kind == FieldKind::irrational) ++rec.irrational_count;
    }
    rec.attribute_count = rec.location_map.size();
    return rec;
}

enum class GateDecision { allowed, repressed };

/// Freud's limit: more than L irrational attributes blocks the recall from
/// consciousness. Dreams ignore L.
inline GateDecision gate(const ImportanceRecord& rec, int repression_limit, bool dream_mode) {
    if (dream_mode) return GateDecision::allowed;
    return rec.irrational_count > static_cast<std::size_t>(repression_limit)
               ? GateDecision::repressed
               : GateDecision::allowed;
}

using ImportanceScore = std::function<double(const ImportanceRecord&)>;

/// Default score: the final count of attributes. The encoder's other
/// quantities stay available to custom score functions.
inline double default_importance_score(const ImportanceRecord& rec) {
    return static_cast<double>(rec.attribute_count);
}

/// Argmax of the score over the match set; ties go to the earliest stored word.
inline std::size_t select_most_important(const Ltm& ltm, const std::vector<std::size_t>& matches,
                                         const SearchCues& cues, const AttributeSchema& schema,
                                         const ImportanceScore& score = default_importance_score) {
    if (matches.empty()) throw DeliveryError("select_most_important on empty match set");
    std::size_t best = matches[0];
    double best_score = score(encode_importance(ltm.word(best), cues, schema));
    for (std::size_t i = 1; i < matches.size(); ++i) {
        double s = score(encode_importance(ltm.word(matches[i]), cues, schema));
        if (s > best_score) {
            best_score = s;
            best = matches[i];
        }
    }
    return best;
}

/// Resolve a Single or Multiple outcome into the ordered list of words that
/// will be presented to short-term memory.
inline std::vector<std::size_t> deliver(const Ltm& ltm, const SearchOutcome& outcome,
                                        MultiMatchPolicy policy, const SearchCues& cues,
                                        const AttributeSchema& schema,
                                        const ImportanceScore& score = default_importance_score) {
    if (outcome.kind() == OutcomeKind::no_recall)
        throw DeliveryError("deliver called on NoRecall");
    if (outcome.kind() == OutcomeKind::single) return {outcome.single_index()};
    switch (policy) {
        case MultiMatchPolicy::first:
            return {outcome.matches().front()};
        case MultiMatchPolicy::sequential:
            return outcome.matches();
        case MultiMatchPolicy::importance_max:
            return {select_most_important(ltm, outcome.matches(), cues, schema, score)};
    }
    throw Error("unreachable policy");
}

} // namespace engram
