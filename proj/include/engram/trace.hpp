#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "engram/ltm.hpp"
#include "engram/schema.hpp"
#include "engram/stm.hpp"

namespace engram {

enum class TraceKind {
    sensory,
    search,
    no_recall,
    mult_match,
    recall,
    repressed,
    edit_pass,
    machine_step,
    interchange
};

inline std::string to_string(TraceKind k) {
    switch (k) {
        case TraceKind::sensory: return "Sensory";
        case TraceKind::search: return "Search";
        case TraceKind::no_recall: return "NoRecall";
        case TraceKind::mult_match: return "MultMatch";
        case TraceKind::recall: return "Recall";
        case TraceKind::repressed: return "Repressed";
        case TraceKind::edit_pass: return "EditPass";
        case TraceKind::machine_step: return "MachineStep";
        case TraceKind::interchange: return "Interchange";
    }
    return "?";
}

/// One line of the simulation log: `tick=<n> <Kind> <key=value ...>`.
struct TraceEvent {
    long tick = 0;
    TraceKind kind = TraceKind::sensory;
    std::string payload;
};

inline std::string to_line(const TraceEvent& e) {
    std::string line = "tick=" + std::to_string(e.tick) + " " + to_string(e.kind);
    if (!e.payload.empty()) line += " " + e.payload;
    return line;
}

/// `name=value` pairs in ascending field order, action values by name.
inline std::string render_values(const FieldValues& values, const AttributeSchema& schema) {
    std::optional<FieldId> action = schema.find("action");
    std::string out;
    for (const auto& [f, v] : values) {
        if (!out.empty()) out.push_back(',');
        out += schema.field(f).name;
        out.push_back('=');
        if (action && f == *action)
            out += action_name(v);
        else
            out += std::to_string(unsigned(v));
    }
    return out;
}

inline std::string render_cues(const SearchCues& cues, const AttributeSchema& schema) {
    std::string out;
    for (const Cue& c : cues) {
        if (!out.empty()) out.push_back(',');
        out += schema.field(c.field).name;
        out.push_back('=');
        out += std::to_string(unsigned(c.value));
    }
    return out;
}

inline std::string render_indices(const std::vector<std::size_t>& idx) {
    std::string out = "[";
    for (std::size_t i = 0; i < idx.size(); ++i) {
        if (i) out.push_back(',');
        out += std::to_string(idx[i]);
    }
    out.push_back(']');
    return out;
}

/// Compact equation display of the problem area: "2x+5=11", "2x=6", "x=3".
/// The coefficient is omitted when 0 or 1 and the operator-plus-operand pair
/// is omitted when the operand is zero. Returns nullopt unless the schema
/// declares all six problem fields.
inline std::optional<std::string> render_problem_area(const StmWord& stm,
                                                      const AttributeSchema& schema) {
    auto a = schema.find("problem_A");
    auto x = schema.find("problem_x");
    auto op = schema.find("problem_op");
    auto b = schema.find("problem_B");
    auto eq = schema.find("problem_eq");
    auto y = schema.find("problem_Y");
    if (!a || !x || !op || !b || !eq || !y) return std::nullopt;
    std::ostringstream out;
    unsigned av = stm.read(*a);
    if (av > 1) out << av;
    if (stm.read(*x) != 0) out << "x";
    unsigned bv = stm.read(*b);
    if (bv != 0) {
        switch (stm.read(*op)) {
            case 2: out << '-'; break;
            default: out << '+'; break;
        }
        out << bv;
    }
    if (stm.read(*eq) != 0) out << '=';
    out << unsigned(stm.read(*y));
    return out.str();
}

} // namespace engram
