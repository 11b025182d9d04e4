#pragma once

#include <algorithm>
#include <vector>

#include "engram/bits.hpp"
#include "engram/schema.hpp"

namespace engram {

/// The conscious register: one 4-bit slot per schema field plus a per-field
/// time-to-live counter. A field whose ttl reaches zero reads as all-zero;
/// its bits are physically cleared at expiry, so the stored bus always equals
/// the readable bus.
class StmWord {
public:
    StmWord() = default;

    StmWord(std::size_t field_count, int ttl_max)
        : bits_(field_count * AttributeSchema::kFieldWidth),
          ttl_(field_count, 0),
          ttl_max_(ttl_max) {}

    std::size_t field_count() const { return ttl_.size(); }
    int ttl_max() const { return ttl_max_; }

    bool live(FieldId f) const { return ttl_.at(f) > 0; }
    int ttl(FieldId f) const { return ttl_.at(f); }

    Nibble read(FieldId f) const {
        check(f);
        return get_nibble(bits_, f);
    }

    /// Replace one field's bits and reset its ttl (clamped to ttl_max).
    /// Other fields are untouched. A non-positive ttl expires the field.
    void write_field(FieldId f, Nibble value, int ttl) {
        check(f);
        ttl = std::min(ttl, ttl_max_);
        if (ttl <= 0) {
            set_nibble(bits_, f, 0);
            ttl_[f] = 0;
        } else {
            set_nibble(bits_, f, Nibble(value & 0xF));
            ttl_[f] = ttl;
        }
    }

    /// One tick of persistence loss: every live ttl drops by one and fields
    /// reaching zero return to rest (all-zero bits).
    void tick_decay() {
        for (FieldId f = 0; f < ttl_.size(); ++f) {
            if (ttl_[f] == 0) continue;
            if (--ttl_[f] == 0) set_nibble(bits_, f, 0);
        }
    }

    /// Incoming values overwrite their fields and refresh those ttls; fields
    /// the incoming word does not define keep their lingering values and ttls.
    void dominate(const FieldValues& incoming, int ttl) {
        for (const auto& [f, v] : incoming) write_field(f, v, ttl);
    }

    const BitVec& bus() const { return bits_; }

    /// Write back a bus transformed by nanocode. Fields whose nibble changed
    /// are treated as freshly touched and get their ttl refreshed.
    void absorb_bus(const BitVec& next, int ttl) {
        if (next.size() != bits_.size()) throw SchemaError("bus width mismatch");
        for (FieldId f = 0; f < ttl_.size(); ++f) {
            Nibble nv = get_nibble(next, f);
            if (nv != get_nibble(bits_, f)) write_field(f, nv, ttl);
        }
    }

    /// The live, nonzero fields — what the mind can currently attend to.
    FieldValues live_values() const {
        FieldValues out;
        for (FieldId f = 0; f < ttl_.size(); ++f) {
            if (ttl_[f] > 0) {
                Nibble v = get_nibble(bits_, f);
                if (v != 0) out.emplace(f, v);
            }
        }
        return out;
    }

private:
    void check(FieldId f) const {
        if (f >= ttl_.size())
            throw SchemaError("field index out of range: " + std::to_string(f));
    }

    BitVec bits_;
    std::vector<int> ttl_;
    int ttl_max_ = 0;
};

} // namespace engram
