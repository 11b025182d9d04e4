#pragma once

#include <optional>
#include <vector>

#include "engram/importance.hpp"
#include "engram/ltm.hpp"

namespace engram {

struct EditPass {
    std::vector<Cue> removed; // empty on pass 0, one cue per single pass, two in pair mode
    OutcomeKind outcome = OutcomeKind::no_recall;
};

struct EditResolution {
    std::vector<Cue> removed;
    SearchCues effective_cues; // the reduced cue set that produced the recall
    SearchOutcome outcome;
    std::vector<std::size_t> delivered;
};

struct EditTrace {
    std::vector<EditPass> passes;
    std::optional<EditResolution> resolved;
};

struct EditResult {
    std::vector<std::size_t> delivered; // empty when the block is unresolvable
    EditTrace trace;
};

namespace detail {

inline SearchCues without(const SearchCues& cues, std::size_t skip_a,
                          std::size_t skip_b = std::size_t(-1)) {
    SearchCues reduced;
    reduced.reserve(cues.size());
    for (std::size_t i = 0; i < cues.size(); ++i)
        if (i != skip_a && i != skip_b) reduced.push_back(cues[i]);
    return reduced;
}

} // namespace detail

/// The subliminal editor. Pass 0 searches the full cue set; on No-Recall each
/// cue is removed in list order (restoring it before the next trial), and when
/// single removal exhausts and pair mode is on, cue pairs follow. The first
/// pass that recalls anything is resolved through the delivery policy. Runs to
/// completion within one tick; the caller's cue list is never altered.
inline EditResult edit_and_search(const Ltm& ltm, const SearchCues& cues,
                                  MultiMatchPolicy policy, bool pair_removal,
                                  const AttributeSchema& schema) {
    if (cues.empty()) throw Error("edit_and_search needs a non-empty cue list");
    EditResult result;

    auto attempt = [&](std::vector<std::size_t> skipped) -> bool {
        SearchCues reduced = skipped.size() == 2
                                 ? detail::without(cues, skipped[0], skipped[1])
                                 : skipped.size() == 1 ? detail::without(cues, skipped[0])
                                                       : cues;
        SearchOutcome outcome = ltm.search(reduced);
        EditPass pass;
        for (std::size_t i : skipped) pass.removed.push_back(cues[i]);
        pass.outcome = outcome.kind();
        result.trace.passes.push_back(pass);
        if (outcome.kind() == OutcomeKind::no_recall) return false;
        EditResolution res;
        res.removed = pass.removed;
        res.effective_cues = reduced;
        res.delivered = deliver(ltm, outcome, policy, reduced, schema);
        res.outcome = std::move(outcome);
        result.delivered = res.delivered;
        result.trace.resolved = std::move(res);
        return true;
    };

    if (attempt({})) return result;
    for (std::size_t i = 0; i < cues.size(); ++i)
        if (attempt({i})) return result;
    if (pair_removal) {
        for (std::size_t i = 0; i < cues.size(); ++i)
            for (std::size_t j = i + 1; j < cues.size(); ++j)
                if (attempt({i, j})) return result;
    }
    return result; // persistent No-Recall: full trace, no delivery
}

struct BrainstormEntry {
    std::optional<Cue> removed; // nullopt for the full cue set
    std::vector<std::size_t> matches;
};

/// Systematic single-cue removal as idea generation: fewer cues imply more
/// matches, so every entry's match set contains the full-set match set.
inline std::vector<BrainstormEntry> brainstorm(const Ltm& ltm, const SearchCues& cues) {
    if (cues.empty()) throw Error("brainstorm needs a non-empty cue list");
    std::vector<BrainstormEntry> out;
    out.push_back(BrainstormEntry{std::nullopt, ltm.search(cues).matches()});
    for (std::size_t i = 0; i < cues.size(); ++i)
        out.push_back(BrainstormEntry{cues[i], ltm.search(detail::without(cues, i)).matches()});
    return out;
}

} // namespace engram
