#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "engram/ltm.hpp"
#include "engram/nanocode.hpp"
#include "engram/schema.hpp"
#include "engram/stm.hpp"

namespace engram {

struct NanoStep {
    NanoProgram program;
};

/// Read two short-term fields, recover the fact associatively, and dominate
/// the result field with the answer.
struct ArithStep {
    FieldId op1_field;
    ArithOp op;
    FieldId op2_field;
    FieldId result_field;
};

struct HaltStep {};

using Step = std::variant<NanoStep, ArithStep, HaltStep>;

/// A learned procedure embedded in long-term memory: pattern-triggered, then
/// stepping without conscious direction.
struct StateMachine {
    std::string id;
    SearchCues trigger;
    std::vector<Step> steps;
};

// Form code recognized by the builtin equation reducer (Ax + B = Y).
inline constexpr Nibble kFormLinearEquation = 1;

/// Immutable bodies of installed machines; the LTM words hold only the ids.
class MachineStore {
public:
    std::size_t size() const { return machines_.size(); }

    const StateMachine& at(std::size_t i) const { return machines_.at(i); }

    const StateMachine* find(std::string_view id) const {
        for (const StateMachine& m : machines_)
            if (m.id == id) return &m;
        return nullptr;
    }

    void add(StateMachine m) { machines_.push_back(std::move(m)); }

private:
    std::vector<StateMachine> machines_;
};

/// Validate and commit a machine: trigger and steps checked, every nanocode
/// program verified against the bus, then a write-once LTM word is committed
/// carrying the machine id. Reinstalling an id is a write-once violation.
inline std::string install_machine(Ltm& ltm, MachineStore& store, StateMachine machine,
                                   const AttributeSchema& schema, int rehearsal_threshold) {
    if (machine.id.empty()) throw Error("machine id must not be empty");
    if (store.find(machine.id))
        throw WriteOnceViolation("machine '" + machine.id + "' is already installed");
    if (machine.trigger.empty())
        throw Error("machine '" + machine.id + "' has an empty trigger");
    if (machine.steps.empty())
        throw Error("machine '" + machine.id + "' has no steps");
    for (const Cue& c : machine.trigger)
        schema.field(c.field);
    for (const Step& s : machine.steps) {
        if (const auto* nano = std::get_if<NanoStep>(&s)) {
            verify_or_throw(nano->program, schema.bus_width());
        } else if (const auto* arith = std::get_if<ArithStep>(&s)) {
            schema.field(arith->op1_field);
            schema.field(arith->op2_field);
            schema.field(arith->result_field);
        }
    }
    LtmWord word;
    word.machine = machine.id;
    std::string id = machine.id;
    store.add(std::move(machine));
    ltm.memorize(std::move(word), rehearsal_threshold, rehearsal_threshold);
    return id;
}

/// First installed machine whose trigger cues all equal the current STM field
/// reads (an expired field reads zero). Returns nullptr when nothing matches.
inline const StateMachine* trigger(const Ltm& ltm, const MachineStore& store,
                                   const StmWord& stm) {
    for (std::size_t i = 0; i < ltm.size(); ++i) {
        const LtmWord& w = ltm.word(i);
        if (!w.machine) continue;
        const StateMachine* m = store.find(*w.machine);
        if (!m) continue;
        bool ok = true;
        for (const Cue& c : m->trigger) {
            if (c.field >= stm.field_count() || stm.read(c.field) != c.value) {
                ok = false;
                break;
            }
        }
        if (ok) return m;
    }
    return nullptr;
}

struct StepTrace {
    std::size_t index = 0;
    std::string kind;   // "nano", "arith", "halt"
    std::string detail; // program name or fact rendering
    FieldValues stm_after;
    std::vector<std::string> warnings;
};

struct ExecuteResult {
    bool completed = false;
    std::optional<std::size_t> aborted_step;
    std::string abort_reason;
    std::vector<StepTrace> steps;
};

/// Run a machine to completion within the current tick. Nanocode transforms
/// the bus (touched fields get fresh ttls); arithmetic steps dominate the
/// result field. A missing fact aborts the machine and surfaces as the
/// orchestrator's No-Recall signal.
inline ExecuteResult execute(const StateMachine& machine, StmWord& stm, const Ltm& ltm,
                             const AttributeSchema& schema, int ttl_default) {
    ExecuteResult result;
    for (std::size_t i = 0; i < machine.steps.size(); ++i) {
        StepTrace trace;
        trace.index = i;
        const Step& s = machine.steps[i];
        if (const auto* nano = std::get_if<NanoStep>(&s)) {
            trace.kind = "nano";
            trace.detail = nano->program.name;
            RunReport report = run_checked(stm.bus(), nano->program);
            trace.warnings = report.warnings;
            stm.absorb_bus(report.bits, ttl_default);
        } else if (const auto* arith = std::get_if<ArithStep>(&s)) {
            trace.kind = "arith";
            Nibble a = stm.read(arith->op1_field);
            Nibble b = stm.read(arith->op2_field);
            trace.detail = std::to_string(unsigned(a)) + arith_symbol(arith->op) +
                           std::to_string(unsigned(b));
            auto value = lookup_arithmetic(ltm, a, b, arith->op, ArithFields::resolve(schema));
            if (!value) {
                trace.stm_after = stm.live_values();
                result.steps.push_back(std::move(trace));
                result.aborted_step = i;
                result.abort_reason = "no fact for " + std::to_string(unsigned(a)) + " " +
                                      to_string(arith->op) + " " + std::to_string(unsigned(b));
                return result;
            }
            trace.detail += "=" + std::to_string(unsigned(*value));
            stm.write_field(arith->result_field, *value, ttl_default);
        } else {
            trace.kind = "halt";
            trace.stm_after = stm.live_values();
            result.steps.push_back(std::move(trace));
            break;
        }
        trace.stm_after = stm.live_values();
        result.steps.push_back(std::move(trace));
    }
    result.completed = true;
    return result;
}

/// The learned reduction of Ax + B = Y to Ax = Y - B: move Y and B to the
/// arithmetic area (leaving zeros), recover the difference associatively,
/// copy it back to Y's position. Exactly 8 + 8 + 4 = 20 nanocode operations.
inline StateMachine builtin_method_alpha(const AttributeSchema& schema) {
    for (const char* required :
         {"problem_A", "problem_x", "problem_op", "problem_B", "problem_eq", "problem_Y",
          "arith_op1", "arith_op2", "arith_operator", "arith_result", "form"})
        schema.index_of(required);
    StateMachine m;
    m.id = "method_alpha";
    m.trigger = {Cue{schema.index_of("form"), kFormLinearEquation}};
    m.steps.push_back(NanoStep{emit_move(schema, "problem_Y", "arith_op1")});
    m.steps.push_back(NanoStep{emit_move(schema, "problem_B", "arith_op2")});
    m.steps.push_back(ArithStep{schema.index_of("arith_op1"), ArithOp::minus,
                                schema.index_of("arith_op2"),
                                schema.index_of("arith_result")});
    m.steps.push_back(NanoStep{emit_copy(schema, "arith_result", "problem_Y")});
    m.steps.push_back(HaltStep{});
    return m;
}

/// Back-tracking conversion: swap the two low bits of the action attribute,
/// exchanging Left and Right while fixing Straight.
inline void interchange_left_right(StmWord& stm, const AttributeSchema& schema, int ttl) {
    FieldId action = schema.index_of("action");
    auto base = static_cast<std::uint16_t>(schema.bit_base(action));
    NanoProgram swap = emit_swap_bits(base, static_cast<std::uint16_t>(base + 1));
    stm.absorb_bus(run(stm.bus(), swap), ttl);
}

} // namespace engram
