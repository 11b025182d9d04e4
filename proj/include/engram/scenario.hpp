#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "engram/world.hpp"

namespace engram {

// Scenario file grammar (line oriented, `#` starts a comment):
//
//   [schema]                 field <name> [kind=rational|irrational]
//   [config]                 <key>=<value>
//   [ltm]                    <field>=<int>... [action=<id>] [rehearsals=<n>]
//   [arith]                  <a> <op> <b> = <c>
//   [nanocode <name>]        FM/TO line pairs
//   [machine <id>]           trigger: <field>=<value>... then step lines:
//                            builtin method_alpha | nano <name> |
//                            arith <f1> <op> <f2> -> <f3> | halt
//   [sensory]                tick=<n> <field>=<value>...
//
// Sections may repeat and appear in any order; the world is built in a fixed
// order (schema, config, nanocode, ltm, arith, machines, sensory) so word
// indices follow file order within each kind.

namespace detail {

struct Line {
    std::size_t no;
    std::string text;
};

struct Section {
    std::string kind;
    std::string name;
    std::size_t header_line = 0;
    std::vector<Line> lines;
};

inline std::vector<std::string> split_ws(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string tok;
    while (in >> tok) out.push_back(tok);
    return out;
}

[[noreturn]] inline void fail(const std::string& file, std::size_t line, const std::string& msg) {
    throw ParseError(file + ":" + std::to_string(line) + ": " + msg);
}

inline int parse_int(const std::string& file, std::size_t line, const std::string& tok,
                     const std::string& what) {
    std::size_t pos = 0;
    int v = 0;
    try {
        v = std::stoi(tok, &pos);
    } catch (const std::exception&) {
        pos = 0;
    }
    if (pos != tok.size()) fail(file, line, "malformed " + what + " '" + tok + "'");
    return v;
}

inline bool parse_flag(const std::string& file, std::size_t line, const std::string& tok) {
    if (tok == "on" || tok == "true" || tok == "1") return true;
    if (tok == "off" || tok == "false" || tok == "0") return false;
    fail(file, line, "expected on/off, got '" + tok + "'");
}

inline std::pair<std::string, std::string> split_kv(const std::string& file, std::size_t line,
                                                    const std::string& tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == tok.size())
        fail(file, line, "expected key=value, got '" + tok + "'");
    return {tok.substr(0, eq), tok.substr(eq + 1)};
}

inline Nibble parse_field_value(const std::string& file, std::size_t line,
                                const AttributeSchema& schema, FieldId field,
                                const std::string& tok) {
    if (schema.field(field).name == "action") {
        if (auto code = action_code(tok)) return *code;
    }
    int v = parse_int(file, line, tok, "value for field " + schema.field(field).name);
    if (v < 0 || v > 15)
        fail(file, line, "value out of nibble range for field " + schema.field(field).name +
                             ": " + tok);
    return static_cast<Nibble>(v);
}

} // namespace detail

inline World load_scenario(std::string_view text, const std::string& file = "scenario") {
    using detail::fail;

    // Pass 1: slice into sections.
    std::vector<detail::Section> sections;
    {
        std::istringstream in{std::string(text)};
        std::string raw;
        std::size_t line_no = 0;
        detail::Section* current = nullptr;
        while (std::getline(in, raw)) {
            ++line_no;
            if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
            std::size_t a = raw.find_first_not_of(" \t\r");
            if (a == std::string::npos) continue;
            std::size_t b = raw.find_last_not_of(" \t\r");
            std::string line = raw.substr(a, b - a + 1);
            if (line.front() == '[') {
                if (line.back() != ']') fail(file, line_no, "unterminated section header");
                auto inner = detail::split_ws(line.substr(1, line.size() - 2));
                if (inner.empty() || inner.size() > 2)
                    fail(file, line_no, "bad section header '" + line + "'");
                detail::Section s;
                s.kind = inner[0];
                if (inner.size() == 2) s.name = inner[1];
                s.header_line = line_no;
                if ((s.kind == "nanocode" || s.kind == "machine") && s.name.empty())
                    fail(file, line_no, "[" + s.kind + "] needs a name");
                sections.push_back(std::move(s));
                current = &sections.back();
            } else {
                if (!current) fail(file, line_no, "content before any section header");
                current->lines.push_back({line_no, line});
            }
        }
    }

    World world;

    // Pass 2: schema.
    for (const auto& sec : sections) {
        if (sec.kind != "schema") continue;
        for (const auto& [no, line] : sec.lines) {
            auto tok = detail::split_ws(line);
            if (tok.size() < 2 || tok[0] != "field")
                fail(file, no, "expected 'field <name> [kind=...]'");
            FieldKind kind = FieldKind::rational;
            if (tok.size() >= 3) {
                auto [k, v] = detail::split_kv(file, no, tok[2]);
                if (k != "kind") fail(file, no, "unknown field option '" + k + "'");
                if (v == "rational")
                    kind = FieldKind::rational;
                else if (v == "irrational")
                    kind = FieldKind::irrational;
                else
                    fail(file, no, "kind must be rational or irrational, got '" + v + "'");
            }
            try {
                world.schema.add_field(tok[1], kind);
            } catch (const SchemaError& e) {
                fail(file, no, e.what());
            }
        }
    }
    if (world.schema.empty()) fail(file, 1, "scenario declares no [schema] fields");

    // Config.
    bool ttl_max_given = false;
    for (const auto& sec : sections) {
        if (sec.kind != "config") continue;
        for (const auto& [no, line] : sec.lines) {
            for (const auto& tok : detail::split_ws(line)) {
                auto [key, value] = detail::split_kv(file, no, tok);
                if (key == "ttl_default")
                    world.config.ttl_default = detail::parse_int(file, no, value, key);
                else if (key == "ttl_max") {
                    world.config.ttl_max = detail::parse_int(file, no, value, key);
                    ttl_max_given = true;
                } else if (key == "rehearsal_threshold")
                    world.config.rehearsal_threshold = detail::parse_int(file, no, value, key);
                else if (key == "repression_limit")
                    world.config.repression_limit = detail::parse_int(file, no, value, key);
                else if (key == "dream_mode")
                    world.config.dream_mode = detail::parse_flag(file, no, value);
                else if (key == "pair_removal")
                    world.config.pair_removal = detail::parse_flag(file, no, value);
                else if (key == "interchange")
                    world.config.interchange = detail::parse_flag(file, no, value);
                else if (key == "multi_match_policy") {
                    if (value == "first")
                        world.config.policy = MultiMatchPolicy::first;
                    else if (value == "sequential")
                        world.config.policy = MultiMatchPolicy::sequential;
                    else if (value == "importance_max")
                        world.config.policy = MultiMatchPolicy::importance_max;
                    else
                        fail(file, no, "unknown multi_match_policy '" + value + "'");
                } else
                    fail(file, no, "unknown config key '" + key + "'");
            }
        }
    }
    if (!ttl_max_given) world.config.ttl_max = world.config.ttl_default;
    try {
        world.config.validate();
    } catch (const Error& e) {
        fail(file, 1, std::string("bad config: ") + e.what());
    }

    world.stm = StmWord(world.schema.field_count(), world.config.ttl_max);
    world.ltm = Ltm(world.schema.field_count());

    // Nanocode blocks, verified against the bus at load time.
    for (const auto& sec : sections) {
        if (sec.kind != "nanocode") continue;
        if (world.programs.count(sec.name))
            fail(file, sec.header_line, "duplicate nanocode program '" + sec.name + "'");
        std::string body;
        std::size_t first_line = sec.lines.empty() ? sec.header_line : sec.lines.front().no;
        std::size_t expect = first_line;
        for (const auto& [no, line] : sec.lines) {
            while (expect < no) { // keep absolute line numbers in diagnostics
                body += "\n";
                ++expect;
            }
            body += line;
            body += "\n";
            ++expect;
        }
        NanoProgram prog;
        try {
            prog = assemble(body, sec.name, first_line);
        } catch (const ParseError& e) {
            throw ParseError(file + ":" + std::string(e.what()));
        }
        try {
            verify_or_throw(prog, world.schema.bus_width());
        } catch (const VerifyError& e) {
            throw VerifyError(file + ":" + std::to_string(sec.header_line) + ": " + e.what());
        }
        world.programs.emplace(sec.name, std::move(prog));
    }

    // LTM rows, then arithmetic facts, then machines: word indices follow.
    auto memorize_checked = [&](LtmWord word, int rehearsals, std::size_t no,
                                const std::string& what) {
        MemorizeOutcome out =
            world.ltm.memorize(std::move(word), rehearsals, world.config.rehearsal_threshold);
        if (!out.committed)
            world.load_warnings.push_back(what + " at line " + std::to_string(no) +
                                          " not committed (rehearsals " +
                                          std::to_string(rehearsals) + " < threshold " +
                                          std::to_string(world.config.rehearsal_threshold) + ")");
    };

    for (const auto& sec : sections) {
        if (sec.kind != "ltm") continue;
        for (const auto& [no, line] : sec.lines) {
            LtmWord word;
            int rehearsals = world.config.rehearsal_threshold;
            for (const auto& tok : detail::split_ws(line)) {
                auto [key, value] = detail::split_kv(file, no, tok);
                if (key == "rehearsals") {
                    rehearsals = detail::parse_int(file, no, value, key);
                    continue;
                }
                auto f = world.schema.find(key);
                if (!f) fail(file, no, "unknown field '" + key + "'");
                if (word.values.count(*f)) fail(file, no, "field '" + key + "' given twice");
                Nibble v = detail::parse_field_value(file, no, world.schema, *f, value);
                word.values.emplace(*f, v);
                if (key == "action") word.action = action_name(v);
            }
            if (word.values.empty()) fail(file, no, "ltm word defines no fields");
            memorize_checked(std::move(word), rehearsals, no, "ltm word");
        }
    }

    for (const auto& sec : sections) {
        if (sec.kind != "arith") continue;
        ArithFields fields{};
        try {
            fields = ArithFields::resolve(world.schema);
        } catch (const SchemaError&) {
            fail(file, sec.header_line,
                 "[arith] needs schema fields arith_op1, arith_op2, arith_operator, arith_result");
        }
        for (const auto& [no, line] : sec.lines) {
            auto tok = detail::split_ws(line);
            if (tok.size() != 5 || tok[3] != "=")
                fail(file, no, "expected '<a> <op> <b> = <c>'");
            auto op = arith_op_from(tok[1]);
            if (!op) fail(file, no, "unknown operator '" + tok[1] + "'");
            auto nib = [&](const std::string& t) {
                int v = detail::parse_int(file, no, t, "operand");
                if (v < 0 || v > 15) fail(file, no, "operand out of nibble range: " + t);
                return static_cast<Nibble>(v);
            };
            LtmWord fact;
            fact.values.emplace(fields.op1, nib(tok[0]));
            fact.values.emplace(fields.op2, nib(tok[2]));
            fact.values.emplace(fields.op, static_cast<Nibble>(*op));
            fact.values.emplace(fields.result, nib(tok[4]));
            memorize_checked(std::move(fact), world.config.rehearsal_threshold, no,
                             "arithmetic fact");
        }
    }

    for (const auto& sec : sections) {
        if (sec.kind != "machine") continue;
        StateMachine machine;
        machine.id = sec.name;
        bool trigger_given = false;
        std::optional<SearchCues> builtin_trigger;
        for (const auto& [no, line] : sec.lines) {
            auto tok = detail::split_ws(line);
            if (tok[0] == "trigger:") {
                if (trigger_given) fail(file, no, "duplicate trigger line");
                trigger_given = true;
                for (std::size_t i = 1; i < tok.size(); ++i) {
                    auto [key, value] = detail::split_kv(file, no, tok[i]);
                    auto f = world.schema.find(key);
                    if (!f) fail(file, no, "unknown field '" + key + "'");
                    machine.trigger.push_back(
                        Cue{*f, detail::parse_field_value(file, no, world.schema, *f, value)});
                }
                if (machine.trigger.empty()) fail(file, no, "trigger line lists no cues");
            } else if (tok[0] == "builtin") {
                if (tok.size() != 2 || tok[1] != "method_alpha")
                    fail(file, no, "unknown builtin (available: method_alpha)");
                StateMachine alpha;
                try {
                    alpha = builtin_method_alpha(world.schema);
                } catch (const SchemaError& e) {
                    fail(file, no, std::string("builtin method_alpha: ") + e.what());
                }
                for (Step& s : alpha.steps) machine.steps.push_back(std::move(s));
                builtin_trigger = std::move(alpha.trigger);
            } else if (tok[0] == "nano") {
                if (tok.size() != 2) fail(file, no, "expected 'nano <program-name>'");
                auto it = world.programs.find(tok[1]);
                if (it == world.programs.end())
                    fail(file, no, "unknown nanocode program '" + tok[1] + "'");
                machine.steps.push_back(NanoStep{it->second});
            } else if (tok[0] == "arith") {
                if (tok.size() != 6 || tok[4] != "->")
                    fail(file, no, "expected 'arith <f1> <op> <f2> -> <f3>'");
                auto op = arith_op_from(tok[2]);
                if (!op) fail(file, no, "unknown operator '" + tok[2] + "'");
                auto field = [&](const std::string& name) {
                    auto f = world.schema.find(name);
                    if (!f) fail(file, no, "unknown field '" + name + "'");
                    return *f;
                };
                machine.steps.push_back(ArithStep{field(tok[1]), *op, field(tok[3]),
                                                  field(tok[5])});
                try {
                    ArithFields::resolve(world.schema);
                } catch (const SchemaError&) {
                    fail(file, no, "arith step needs the arith_* fact fields in the schema");
                }
            } else if (tok[0] == "halt") {
                machine.steps.push_back(HaltStep{});
            } else {
                fail(file, no, "unknown machine step '" + tok[0] + "'");
            }
        }
        if (machine.trigger.empty() && builtin_trigger) machine.trigger = *builtin_trigger;
        try {
            install_machine(world.ltm, world.machines, std::move(machine), world.schema,
                            world.config.rehearsal_threshold);
        } catch (const Error& e) {
            throw ParseError(file + ":" + std::to_string(sec.header_line) + ": " + e.what());
        }
    }

    for (const auto& sec : sections) {
        if (sec.kind != "sensory") continue;
        for (const auto& [no, line] : sec.lines) {
            SensoryEvent ev;
            bool tick_given = false;
            for (const auto& tok : detail::split_ws(line)) {
                auto [key, value] = detail::split_kv(file, no, tok);
                if (key == "tick") {
                    ev.tick = detail::parse_int(file, no, value, "tick");
                    if (ev.tick < 1) fail(file, no, "tick must be >= 1");
                    tick_given = true;
                    continue;
                }
                auto f = world.schema.find(key);
                if (!f) fail(file, no, "unknown field '" + key + "'");
                ev.values.emplace(*f,
                                  detail::parse_field_value(file, no, world.schema, *f, value));
            }
            if (!tick_given) fail(file, no, "sensory line needs tick=<n>");
            world.sensory.push_back(std::move(ev));
        }
    }
    std::stable_sort(world.sensory.begin(), world.sensory.end(),
                     [](const SensoryEvent& a, const SensoryEvent& b) { return a.tick < b.tick; });

    if (auto det = landmark_determinant(world.ltm, world.schema); det && *det == 0)
        world.load_warnings.push_back(
            "landmark matrix is singular (determinant 0): intersections are not uniquely cued");

    return world;
}

inline World load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open scenario file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_scenario(buf.str(), path);
}

} // namespace engram
