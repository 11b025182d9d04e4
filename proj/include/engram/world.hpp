#pragma once

#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "engram/config.hpp"
#include "engram/cue_editor.hpp"
#include "engram/importance.hpp"
#include "engram/ltm.hpp"
#include "engram/machine.hpp"
#include "engram/nanocode.hpp"
#include "engram/schema.hpp"
#include "engram/stm.hpp"
#include "engram/trace.hpp"

namespace engram {

struct SensoryEvent {
    long tick = 0;
    FieldValues values;
};

/// Everything the simulation owns. Pure value type: copying a world forks the
/// simulation, and identical worlds stepped identically stay identical.
struct World {
    AttributeSchema schema;
    Config config;
    StmWord stm;
    Ltm ltm;
    MachineStore machines;
    std::map<std::string, NanoProgram> programs; // named scenario nanocode
    std::vector<SensoryEvent> sensory;           // sorted by tick, stable
    long tick = 0;
    std::vector<TraceEvent> trace;
    std::vector<std::string> load_warnings;
};

namespace detail {

inline void emit(World& world, TraceKind kind, std::string payload,
                 std::ostream* stream) {
    TraceEvent e{world.tick, kind, std::move(payload)};
    if (stream) (*stream) << to_line(e) << '\n';
    world.trace.push_back(std::move(e));
}

inline void emit_machine_steps(World& world, const std::string& id,
                               const ExecuteResult& res, std::ostream* stream) {
    for (const StepTrace& st : res.steps) {
        std::string payload = "machine=" + id + " step=" + std::to_string(st.index) +
                              " kind=" + st.kind;
        if (st.kind == "nano") payload += " program=" + st.detail;
        if (st.kind == "arith") payload += " fact=" + st.detail;
        payload += " stm=" + render_values(st.stm_after, world.schema);
        if (auto problem = render_problem_area(world.stm, world.schema);
            problem && st.index + 1 == res.steps.size())
            payload += " problem=" + *problem;
        if (!st.warnings.empty())
            payload += " warnings=" + std::to_string(st.warnings.size());
        emit(world, TraceKind::machine_step, std::move(payload), stream);
    }
}

} // namespace detail

/// One tick of the attention loop: due sensory images dominate the conscious
/// register, its live contents become search cues, long-term memory answers
/// (with the cue editor breaking blocks), deliveries pass the importance gate
/// and dominate, a triggered machine runs to completion, and finally the
/// register decays one step.
inline void attention_cycle(World& world, std::ostream* stream = nullptr) {
    ++world.tick;
    const int ttl = world.config.ttl_default;

    // 1. sensory input
    std::set<FieldId> sensed_now;
    for (const SensoryEvent& ev : world.sensory) {
        if (ev.tick != world.tick) continue;
        world.stm.dominate(ev.values, ttl);
        for (const auto& [f, v] : ev.values) sensed_now.insert(f);
        detail::emit(world, TraceKind::sensory, render_values(ev.values, world.schema), stream);
    }

    // 2-4. search, edit, gate, dominate
    SearchCues cues = cues_from_values(world.stm.live_values());
    if (!cues.empty()) {
        SearchOutcome outcome = world.ltm.search(cues);
        std::string search_payload = "cues=" + render_cues(cues, world.schema) +
                                     " outcome=" + to_string(outcome.kind());
        if (outcome.kind() == OutcomeKind::single)
            search_payload += " word=" + std::to_string(outcome.single_index());
        if (outcome.kind() == OutcomeKind::multiple)
            search_payload += " count=" + std::to_string(outcome.count()) +
                              " words=" + render_indices(outcome.matches());
        detail::emit(world, TraceKind::search, std::move(search_payload), stream);

        std::vector<std::size_t> delivered;
        SearchCues in_force = cues;
        const SearchOutcome* final_outcome = &outcome;
        EditResult edited;
        if (outcome.kind() == OutcomeKind::no_recall) {
            detail::emit(world, TraceKind::no_recall, "", stream);
            edited = edit_and_search(world.ltm, cues, world.config.policy,
                                     world.config.pair_removal, world.schema);
            for (std::size_t p = 1; p < edited.trace.passes.size(); ++p) {
                const EditPass& pass = edited.trace.passes[p];
                std::string removed;
                for (const Cue& c : pass.removed) {
                    if (!removed.empty()) removed.push_back(',');
                    removed += world.schema.field(c.field).name;
                }
                detail::emit(world, TraceKind::edit_pass,
                             "pass=" + std::to_string(p) + " removed=" + removed +
                                 " outcome=" + to_string(pass.outcome),
                             stream);
            }
            if (edited.trace.resolved) {
                delivered = edited.delivered;
                in_force = edited.trace.resolved->effective_cues;
                final_outcome = &edited.trace.resolved->outcome;
            }
        } else {
            delivered = deliver(world.ltm, outcome, world.config.policy, cues, world.schema);
        }

        if (!delivered.empty() && final_outcome->kind() == OutcomeKind::multiple) {
            detail::emit(world, TraceKind::mult_match,
                         "count=" + std::to_string(final_outcome->count()) +
                             " words=" + render_indices(final_outcome->matches()) + " class=" +
                             to_string(classify_multiple(world.ltm, final_outcome->matches())),
                         stream);
        }

        bool recalled_action = false;
        auto action_field = world.schema.find("action");
        for (std::size_t idx : delivered) {
            const LtmWord& word = world.ltm.word(idx);
            ImportanceRecord rec = encode_importance(word, in_force, world.schema);
            if (gate(rec, world.config.repression_limit, world.config.dream_mode) ==
                GateDecision::repressed) {
                detail::emit(world, TraceKind::repressed,
                             "word=" + std::to_string(idx) +
                                 " irrational=" + std::to_string(rec.irrational_count) +
                                 " limit=" + std::to_string(world.config.repression_limit),
                             stream);
                continue;
            }
            // Fresh sensory input outranks recalls that land the same tick.
            FieldValues incoming;
            for (const auto& [f, v] : word.values)
                if (!sensed_now.count(f)) incoming.emplace(f, v);
            world.stm.dominate(incoming, ttl);
            detail::emit(world, TraceKind::recall,
                         "word=" + std::to_string(idx) +
                             " values=" + render_values(word.values, world.schema),
                         stream);
            if (action_field && word.values.count(*action_field)) recalled_action = true;
        }

        if (recalled_action && world.config.interchange && action_field) {
            Nibble before = world.stm.read(*action_field);
            interchange_left_right(world.stm, world.schema, ttl);
            Nibble after = world.stm.read(*action_field);
            detail::emit(world, TraceKind::interchange,
                         "action=" + action_name(before) + "->" + action_name(after), stream);
        }
    }

    // 5. embedded state machine
    if (const StateMachine* m = trigger(world.ltm, world.machines, world.stm)) {
        ExecuteResult res = execute(*m, world.stm, world.ltm, world.schema, ttl);
        detail::emit_machine_steps(world, m->id, res, stream);
        if (!res.completed) {
            const StepTrace& aborted = res.steps.back();
            detail::emit(world, TraceKind::no_recall,
                         "machine=" + m->id + " step=" + std::to_string(*res.aborted_step) +
                             " missing=" + aborted.detail,
                         stream);
        }
    }

    // 6. persistence loss
    world.stm.tick_decay();
}

inline void run_simulation(World& world, long ticks, std::ostream* stream = nullptr) {
    for (long i = 0; i < ticks; ++i) attention_cycle(world, stream);
}

/// Human-readable dump of a loaded world (the CLI's inspect view).
inline std::string dump_world(const World& world) {
    std::ostringstream out;
    out << "schema (" << world.schema.field_count() << " fields, bus width "
        << world.schema.bus_width() << ")\n";
    for (FieldId f = 0; f < world.schema.field_count(); ++f) {
        const FieldDescriptor& d = world.schema.field(f);
        out << "  [" << f << "] " << d.name << " bits " << world.schema.bit_base(f) << ".."
            << world.schema.bit_base(f) + 3
            << (d.kind == FieldKind::irrational ? " irrational" : "") << "\n";
    }
    const Config& c = world.config;
    out << "config ttl_default=" << c.ttl_default << " ttl_max=" << c.ttl_max
        << " rehearsal_threshold=" << c.rehearsal_threshold
        << " repression_limit=" << c.repression_limit
        << " dream_mode=" << (c.dream_mode ? "on" : "off")
        << " multi_match_policy=" << to_string(c.policy)
        << " pair_removal=" << (c.pair_removal ? "on" : "off")
        << " interchange=" << (c.interchange ? "on" : "off") << "\n";
    out << "ltm (" << world.ltm.size() << " words)\n";
    for (std::size_t i = 0; i < world.ltm.size(); ++i) {
        const LtmWord& w = world.ltm.word(i);
        out << "  [" << i << "] ";
        if (w.values.empty())
            out << "(no attributes)";
        else
            out << render_values(w.values, world.schema);
        if (w.machine) out << " machine=" << *w.machine;
        out << "\n";
    }
    if (auto det = landmark_determinant(world.ltm, world.schema))
        out << "landmark determinant " << *det << (*det == 0 ? " (not unique!)" : "") << "\n";
    out << "machines (" << world.machines.size() << ")\n";
    for (std::size_t i = 0; i < world.machines.size(); ++i) {
        const StateMachine& m = world.machines.at(i);
        out << "  " << m.id << " trigger " << render_cues(m.trigger, world.schema) << ", "
            << m.steps.size() << " steps\n";
    }
    out << "nanocode programs (" << world.programs.size() << ")\n";
    for (const auto& [name, prog] : world.programs)
        out << "  " << name << ": " << prog.ops.size() << " ops\n";
    out << "sensory events (" << world.sensory.size() << ")\n";
    for (const SensoryEvent& ev : world.sensory)
        out << "  tick=" << ev.tick << " " << render_values(ev.values, world.schema) << "\n";
    for (const std::string& w : world.load_warnings) out << "warning: " << w << "\n";
    return out.str();
}

} // namespace engram
