#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "engram/bits.hpp"
#include "engram/errors.hpp"
#include "engram/schema.hpp"

namespace engram {

// Direction codes for the action attribute. Left and Right differ in the two
// low bits so a two-bit swap interchanges them while Straight is symmetric.
inline constexpr Nibble kActionRight = 1;    // 0001
inline constexpr Nibble kActionLeft = 2;     // 0010
inline constexpr Nibble kActionStraight = 3; // 0011

inline std::optional<Nibble> action_code(std::string_view name) {
    if (name == "Right") return kActionRight;
    if (name == "Left") return kActionLeft;
    if (name == "Straight") return kActionStraight;
    return std::nullopt;
}

inline std::string action_name(Nibble code) {
    switch (code) {
        case kActionRight: return "Right";
        case kActionLeft: return "Left";
        case kActionStraight: return "Straight";
        default: return std::to_string(unsigned(code));
    }
}

/// One engram. A word defines only a subset of the schema's fields; the
/// optional action tag mirrors the value stored in the schema's "action"
/// field, and the optional machine id names an embedded state machine whose
/// body lives in the machine table. Once committed a word never changes.
struct LtmWord {
    FieldValues values;
    std::optional<std::string> action;
    std::optional<std::string> machine;
    bool committed = false;

    friend bool operator==(const LtmWord& a, const LtmWord& b) {
        return a.values == b.values && a.action == b.action &&
               a.machine == b.machine && a.committed == b.committed;
    }
};

/// An (attribute, value) search key. Cue order is significant: it is the cue
/// editor's removal order.
struct Cue {
    FieldId field;
    Nibble value;

    friend bool operator==(const Cue&, const Cue&) = default;
};

using SearchCues = std::vector<Cue>;

inline SearchCues cues_from_values(const FieldValues& values) {
    SearchCues cues;
    cues.reserve(values.size());
    for (const auto& [f, v] : values) cues.push_back(Cue{f, v});
    return cues;
}

inline SearchCues make_cues(const AttributeSchema& schema,
                            std::initializer_list<std::pair<const char*, unsigned>> list) {
    SearchCues cues;
    for (const auto& [name, v] : list)
        cues.push_back(Cue{schema.index_of(name), encode_value(schema, name, v)});
    return cues;
}

enum class OutcomeKind { no_recall, single, multiple };

inline std::string to_string(OutcomeKind k) {
    switch (k) {
        case OutcomeKind::no_recall: return "NoRecall";
        case OutcomeKind::single: return "Single";
        case OutcomeKind::multiple: return "Multiple";
    }
    return "?";
}

/// Search result: the recall line and the multiple-match line in one value.
/// Match indices ascend in storage (commit) order.
class SearchOutcome {
public:
    static SearchOutcome classify(std::vector<std::size_t> matches) {
        SearchOutcome o;
        o.matches_ = std::move(matches);
        o.kind_ = o.matches_.empty()    ? OutcomeKind::no_recall
                  : o.matches_.size() == 1 ? OutcomeKind::single
                                           : OutcomeKind::multiple;
        return o;
    }

    OutcomeKind kind() const { return kind_; }
    std::size_t count() const { return matches_.size(); }
    const std::vector<std::size_t>& matches() const { return matches_; }

    std::size_t single_index() const {
        if (kind_ != OutcomeKind::single) throw Error("outcome is not Single");
        return matches_[0];
    }

private:
    OutcomeKind kind_ = OutcomeKind::no_recall;
    std::vector<std::size_t> matches_;
};

struct MemorizeOutcome {
    bool committed = false;
    std::size_t index = 0; // valid only when committed
};

/// Write-once associative store. Search is mask-based: each committed word
/// keeps a defined-field bit mask and its value bits expanded onto the bus,
/// so a cue set reduces to one subset test plus one masked compare per word.
class Ltm {
public:
    explicit Ltm(std::size_t field_count = 0) : field_count_(field_count) {}

    std::size_t field_count() const { return field_count_; }
    std::size_t size() const { return words_.size(); }

    const LtmWord& word(std::size_t i) const {
        if (i >= words_.size())
            throw Error("word index out of range: " + std::to_string(i));
        return words_[i].word;
    }

    /// Rehearsal-gated append. Below the threshold nothing is written.
    MemorizeOutcome memorize(LtmWord word, int rehearsals, int rehearsal_threshold) {
        return memorize_at(words_.size(), std::move(word), rehearsals, rehearsal_threshold);
    }

    /// Memorize into an explicit address. Addressing a committed word is a
    /// write-once violation; only the next free address may be written.
    MemorizeOutcome memorize_at(std::size_t index, LtmWord word, int rehearsals,
                                int rehearsal_threshold) {
        if (index < words_.size())
            throw WriteOnceViolation("word " + std::to_string(index) +
                                     " is committed and cannot be overwritten");
        if (index > words_.size())
            throw Error("address beyond next free word: " + std::to_string(index));
        validate(word);
        if (rehearsals < rehearsal_threshold) return {false, 0};
        word.committed = true;
        Stored s;
        s.defined = BitVec(bus_width());
        s.bits = BitVec(bus_width());
        for (const auto& [f, v] : word.values) {
            for (std::size_t k = 0; k < AttributeSchema::kFieldWidth; ++k)
                s.defined.set(f * AttributeSchema::kFieldWidth + k);
            set_nibble(s.bits, f, v);
        }
        s.word = std::move(word);
        words_.push_back(std::move(s));
        return {true, words_.size() - 1};
    }

    /// A word matches iff it defines every cue's field with an equal value.
    /// The empty cue list matches every committed word.
    SearchOutcome search(const SearchCues& cues) const {
        BitVec mask(bus_width());
        BitVec want(bus_width());
        for (const Cue& c : cues) {
            if (c.field >= field_count_)
                throw SchemaError("cue field out of range: " + std::to_string(c.field));
            for (std::size_t k = 0; k < AttributeSchema::kFieldWidth; ++k)
                mask.set(c.field * AttributeSchema::kFieldWidth + k);
            set_nibble(want, c.field, c.value);
        }
        std::vector<std::size_t> matches;
        for (std::size_t i = 0; i < words_.size(); ++i) {
            const Stored& s = words_[i];
            if (contains_all(s.defined, mask) && masked_equal(s.bits, want, mask))
                matches.push_back(i);
        }
        return SearchOutcome::classify(std::move(matches));
    }

private:
    struct Stored {
        LtmWord word;
        BitVec defined;
        BitVec bits;
    };

    std::size_t bus_width() const { return field_count_ * AttributeSchema::kFieldWidth; }

    void validate(const LtmWord& w) const {
        for (const auto& [f, v] : w.values) {
            if (f >= field_count_)
                throw SchemaError("word defines field outside schema: " + std::to_string(f));
            if (v > 15)
                throw SchemaError("nibble overflow in word value");
        }
    }

    std::size_t field_count_;
    std::vector<Stored> words_;
};

enum class MultiMatchClass { differentiating, non_differentiating };

inline std::string to_string(MultiMatchClass c) {
    return c == MultiMatchClass::differentiating ? "Differentiating" : "NonDifferentiating";
}

/// Semon's classification: identical contents resonate as one strong recall,
/// any difference makes the stream differentiating.
inline MultiMatchClass classify_multiple(const Ltm& ltm, const std::vector<std::size_t>& matches) {
    if (matches.size() < 2) throw Error("classify_multiple needs at least 2 matches");
    const LtmWord& first = ltm.word(matches[0]);
    for (std::size_t i = 1; i < matches.size(); ++i) {
        const LtmWord& w = ltm.word(matches[i]);
        if (w.values != first.values || w.action != first.action)
            return MultiMatchClass::differentiating;
    }
    return MultiMatchClass::non_differentiating;
}

// Operator codes for the arithmetic-fact attribute.
enum class ArithOp : Nibble { plus = 1, minus = 2, times = 3, divide = 4 };

inline std::optional<ArithOp> arith_op_from(std::string_view name) {
    if (name == "plus") return ArithOp::plus;
    if (name == "minus") return ArithOp::minus;
    if (name == "times") return ArithOp::times;
    if (name == "divide") return ArithOp::divide;
    return std::nullopt;
}

inline std::string to_string(ArithOp op) {
    switch (op) {
        case ArithOp::plus: return "plus";
        case ArithOp::minus: return "minus";
        case ArithOp::times: return "times";
        case ArithOp::divide: return "divide";
    }
    return "?";
}

inline char arith_symbol(ArithOp op) {
    switch (op) {
        case ArithOp::plus: return '+';
        case ArithOp::minus: return '-';
        case ArithOp::times: return '*';
        case ArithOp::divide: return '/';
    }
    return '?';
}

/// Canonical field names of the arithmetic fact table.
struct ArithFields {
    FieldId op1, op2, op, result;

    static ArithFields resolve(const AttributeSchema& schema) {
        return ArithFields{schema.index_of("arith_op1"), schema.index_of("arith_op2"),
                           schema.index_of("arith_operator"), schema.index_of("arith_result")};
    }
};

/// Associative fact lookup: nullopt when the fact was never memorized,
/// FactTableError when the table holds duplicate facts for the operands.
inline std::optional<Nibble> lookup_arithmetic(const Ltm& ltm, Nibble op1, Nibble op2,
                                               ArithOp op, const ArithFields& fields) {
    SearchCues cues{Cue{fields.op1, op1}, Cue{fields.op2, op2},
                    Cue{fields.op, static_cast<Nibble>(op)}};
    SearchOutcome outcome = ltm.search(cues);
    if (outcome.kind() == OutcomeKind::no_recall) return std::nullopt;
    if (outcome.kind() == OutcomeKind::multiple)
        throw FactTableError("fact table holds " + std::to_string(outcome.count()) +
                             " entries for " + std::to_string(unsigned(op1)) + " " +
                             to_string(op) + " " + std::to_string(unsigned(op2)));
    const LtmWord& fact = ltm.word(outcome.single_index());
    auto it = fact.values.find(fields.result);
    if (it == fact.values.end())
        throw FactTableError("fact word lacks a result field");
    return it->second;
}

/// The wayfinding record as an integer matrix: one row per action-tagged word
/// in storage order, one column per non-action field any such word defines,
/// undefined entries read 0. Returns the exact determinant when the matrix is
/// square (n <= 10 keeps Bareiss in int64 range), nullopt otherwise.
inline std::optional<long long> landmark_determinant(const Ltm& ltm, const AttributeSchema& schema) {
    std::optional<FieldId> action = schema.find("action");
    std::vector<std::size_t> rows;
    std::vector<bool> used(schema.field_count(), false);
    for (std::size_t i = 0; i < ltm.size(); ++i) {
        const LtmWord& w = ltm.word(i);
        if (!w.action) continue;
        rows.push_back(i);
        for (const auto& [f, v] : w.values)
            if (!action || f != *action) used[f] = true;
    }
    std::vector<FieldId> cols;
    for (FieldId f = 0; f < used.size(); ++f)
        if (used[f]) cols.push_back(f);
    const std::size_t n = rows.size();
    if (n == 0 || n != cols.size() || n > 10) return std::nullopt;

    std::vector<std::vector<long long>> m(n, std::vector<long long>(n, 0));
    for (std::size_t r = 0; r < n; ++r) {
        const FieldValues& vals = ltm.word(rows[r]).values;
        for (std::size_t c = 0; c < n; ++c) {
            auto it = vals.find(cols[c]);
            m[r][c] = it == vals.end() ? 0 : it->second;
        }
    }
    // Bareiss fraction-free elimination; divisions are exact.
    long long sign = 1;
    long long prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k] == 0) {
            std::size_t swap_row = k + 1;
            while (swap_row < n && m[swap_row][k] == 0) ++swap_row;
            if (swap_row == n) return 0;
            std::swap(m[k], m[swap_row]);
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i)
            for (std::size_t j = k + 1; j < n; ++j)
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
        prev = m[k][k];
    }
    return sign * m[n - 1][n - 1];
}

} // namespace engram
