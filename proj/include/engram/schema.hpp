#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "engram/bits.hpp"
#include "engram/errors.hpp"

namespace engram {

using FieldId = std::size_t;
using Nibble = std::uint8_t; // 0..15

/// Attributes without a sensible external referent (imagined, emotional).
/// Recalls rich in these are candidates for repression.
enum class FieldKind { rational, irrational };

struct FieldDescriptor {
    std::string name;
    FieldKind kind = FieldKind::rational;
};

/// Ordered list of named 4-bit attribute fields. Field f occupies bus bits
/// [4f, 4f+3], bit 4f being the least significant. The layout is normative
/// for nanocode bit addressing.
class AttributeSchema {
public:
    static constexpr std::size_t kFieldWidth = 4;

    FieldId add_field(std::string name, FieldKind kind = FieldKind::rational) {
        if (by_name_.count(name))
            throw SchemaError("duplicate field name: " + name);
        fields_.push_back(FieldDescriptor{name, kind});
        by_name_.emplace(std::move(name), fields_.size() - 1);
        return fields_.size() - 1;
    }

    std::size_t field_count() const { return fields_.size(); }
    std::size_t bus_width() const { return fields_.size() * kFieldWidth; }

    const FieldDescriptor& field(FieldId f) const {
        if (f >= fields_.size())
            throw SchemaError("field index out of range: " + std::to_string(f));
        return fields_[f];
    }

    std::optional<FieldId> find(std::string_view name) const {
        auto it = by_name_.find(std::string(name));
        if (it == by_name_.end()) return std::nullopt;
        return it->second;
    }

    FieldId index_of(std::string_view name) const {
        if (auto f = find(name)) return *f;
        throw SchemaError("unknown field: " + std::string(name));
    }

    std::size_t bit_base(FieldId f) const { return f * kFieldWidth; }

    bool empty() const { return fields_.empty(); }

private:
    std::vector<FieldDescriptor> fields_;
    std::map<std::string, FieldId, std::less<>> by_name_;
};

/// Standard binary encoding of a field value, LSB at the field's lowest bus bit.
inline Nibble encode_value(const AttributeSchema& schema, std::string_view field, unsigned value) {
    schema.index_of(field); // unknown-field check
    if (value > 15)
        throw SchemaError("value overflow for field " + std::string(field) + ": " +
                          std::to_string(value));
    return static_cast<Nibble>(value);
}

inline unsigned decode_value(Nibble nibble) { return nibble & 0xF; }

inline Nibble get_nibble(const BitVec& bus, FieldId f) {
    Nibble v = 0;
    for (std::size_t k = 0; k < AttributeSchema::kFieldWidth; ++k)
        if (bus.test(f * AttributeSchema::kFieldWidth + k)) v |= Nibble(1u << k);
    return v;
}

inline void set_nibble(BitVec& bus, FieldId f, Nibble value) {
    for (std::size_t k = 0; k < AttributeSchema::kFieldWidth; ++k)
        bus.set(f * AttributeSchema::kFieldWidth + k, (value >> k) & 1u);
}

/// Field values keyed by field index; the map order (ascending field id) is
/// the deterministic iteration order used everywhere.
using FieldValues = std::map<FieldId, Nibble>;

} // namespace engram
