#pragma once

#include <string>

#include "engram/errors.hpp"

namespace engram {

/// How ambiguous recalls reach consciousness when the multiple-match line fires.
enum class MultiMatchPolicy { first, sequential, importance_max };

inline std::string to_string(MultiMatchPolicy p) {
    switch (p) {
        case MultiMatchPolicy::first: return "first";
        case MultiMatchPolicy::sequential: return "sequential";
        case MultiMatchPolicy::importance_max: return "importance_max";
    }
    return "?";
}

/// Simulation knobs. One tick is 100 ms of simulated time; the 30-tick default
/// keeps short-term contents alive for about three seconds.
struct Config {
    int ttl_default = 30;
    int ttl_max = 30;
    int rehearsal_threshold = 2; // R: rehearsals required before LTM commit
    int repression_limit = 2;    // L: irrational attributes tolerated per recall
    bool dream_mode = false;
    MultiMatchPolicy policy = MultiMatchPolicy::first;
    bool pair_removal = false;
    bool interchange = false;

    void validate() const {
        if (rehearsal_threshold < 1) throw Error("rehearsal_threshold must be >= 1");
        if (repression_limit < 0) throw Error("repression_limit must be >= 0");
        if (ttl_default < 1) throw Error("ttl_default must be >= 1");
        if (ttl_max < ttl_default) throw Error("ttl_max must be >= ttl_default");
    }
};

} // namespace engram
