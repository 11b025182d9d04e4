// Acceptance suite: one criterion per section, one PASS/FAIL line each,
// with the stated runtime budgets enforced. Exits nonzero on any failure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <engram/engram.hpp>

#include "../oracle.hpp"

using namespace engram;

namespace {

std::string scenario_path(const char* name) {
    return std::string(ENGRAM_SCENARIO_DIR) + "/" + name;
}

struct Checker {
    std::vector<std::string> failures;

    void require(bool ok, const std::string& what) {
        if (!ok) failures.push_back(what);
    }
};

struct CommandResult {
    int status = -1;
    std::string output;
};

CommandResult run_command(const std::string& command) {
    CommandResult result;
    FILE* pipe = popen(command.c_str(), "r");
    if (!pipe) return result;
    char buffer[4096];
    std::size_t n;
    while ((n = fread(buffer, 1, sizeof buffer, pipe)) > 0) result.output.append(buffer, n);
    result.status = pclose(pipe);
    return result;
}

std::uint64_t g_seed = 20260810;

// ---- criterion 1 -----------------------------------------------------------

void equation_pipeline(Checker& c) {
    World world = load_scenario_file(scenario_path("equation.scn"));

    const StateMachine* alpha = world.machines.find("method_alpha");
    c.require(alpha != nullptr, "method_alpha installed");
    std::size_t ops = 0;
    std::vector<std::size_t> per_step;
    for (const Step& s : alpha->steps) {
        if (const auto* nano = std::get_if<NanoStep>(&s)) {
            ops += nano->program.ops.size();
            per_step.push_back(nano->program.ops.size());
        }
    }
    c.require(ops == 20, "method_alpha nanocode is 20 operations, got " + std::to_string(ops));
    c.require(per_step == std::vector<std::size_t>{8, 8, 4},
              "operation split is 8 move + 8 move + 4 copy");
    c.require(2 * ops == 40, "40 assembly lines");

    attention_cycle(world);
    auto after_alpha = render_problem_area(world.stm, world.schema);
    c.require(after_alpha == "2x=6",
              "problem area reads 2x=6 after the method_alpha tick, got " +
                  after_alpha.value_or("<none>"));
    bool alpha_ran = false;
    for (const TraceEvent& e : world.trace)
        if (e.kind == TraceKind::machine_step &&
            e.payload.find("machine=method_alpha") != std::string::npos)
            alpha_ran = true;
    c.require(alpha_ran, "method_alpha stepped during tick 1");

    attention_cycle(world);
    auto after_solve = render_problem_area(world.stm, world.schema);
    c.require(after_solve == "x=3",
              "problem area reads x=3 after the solve_2x tick, got " +
                  after_solve.value_or("<none>"));

    attention_cycle(world);
    c.require(render_problem_area(world.stm, world.schema) == "x=3",
              "result stable through tick 3");
}

// ---- criterion 2 -----------------------------------------------------------

void reversibility_suite(Checker& c) {
    std::mt19937_64 rng(g_seed);
    for (int trial = 0; trial < 1000; ++trial) {
        std::size_t width = 8 + rng() % 57;
        NanoProgram p = oracle::random_program(rng, width, 64);
        if (!verify(p, width).empty()) {
            c.require(false, "generated program failed verification");
            return;
        }
        BitVec bits = oracle::random_bits(rng, width);
        if (!(run(run(bits, p), reverse(p)) == bits)) {
            c.require(false, "run-then-reverse mismatch at trial " + std::to_string(trial));
            return;
        }
        BitVec probe = oracle::random_bits(rng, width);
        for (const NanoOp& op : p.ops) {
            if (!(step(step(probe, op), op) == probe)) {
                c.require(false, "operation is not an involution at trial " +
                                     std::to_string(trial));
                return;
            }
        }
    }
    for (int trial = 0; trial < 25; ++trial) {
        NanoProgram p = oracle::random_program(rng, 12, 48);
        std::set<std::uint64_t> image;
        for (std::uint64_t state = 0; state < (1u << 12); ++state)
            image.insert(run(BitVec::from_ullong(state, 12), p).to_ullong());
        if (image.size() != (1u << 12)) {
            c.require(false, "12-bit bijection broken at trial " + std::to_string(trial));
            return;
        }
    }
}

// ---- criterion 3 -----------------------------------------------------------

void black_forest_fixture(Checker& c) {
    World world = load_scenario_file(scenario_path("blackforest.scn"));
    const AttributeSchema& s = world.schema;

    SearchOutcome exact = world.ltm.search(make_cues(s, {{"B", 1}, {"C", 2}, {"D", 1}, {"S", 2}}));
    c.require(exact.kind() == OutcomeKind::single && exact.single_index() == 3,
              "(a) four true cues recall exactly row 4");
    c.require(world.ltm.word(3).action == "Left", "(a) row 4 carries action Left");

    SearchOutcome under = world.ltm.search(make_cues(s, {{"C", 2}, {"D", 1}, {"S", 2}}));
    c.require(under.kind() == OutcomeKind::multiple &&
                  under.matches() == std::vector<std::size_t>{2, 3},
              "(b) underdetermined cues match exactly rows 3 and 4");

    SearchCues blocked = make_cues(s, {{"B", 1}, {"C", 2}, {"D", 1}, {"S", 2}, {"F", 1}});
    c.require(world.ltm.search(blocked).kind() == OutcomeKind::no_recall,
              "(c) imagined fishes block recall");
    EditResult res = edit_and_search(world.ltm, blocked, MultiMatchPolicy::first, false, s);
    c.require(res.trace.passes.size() == 6 && res.trace.resolved.has_value(),
              "(c) editor resolves at pass 5");
    c.require(res.trace.resolved && res.trace.resolved->removed.size() == 1 &&
                  res.trace.resolved->removed[0].field == s.index_of("F"),
              "(c) the removed cue is F (order B,C,D,S,F)");
    c.require(res.delivered == std::vector<std::size_t>{3}, "(c) delivery is row 4");

    StmWord stm(s.field_count(), 30);
    FieldId action = s.index_of("action");
    stm.write_field(action, kActionLeft, 30);
    interchange_left_right(stm, s, 30);
    c.require(stm.read(action) == kActionRight, "(d) interchange maps Left to Right");
    stm.write_field(action, kActionStraight, 30);
    interchange_left_right(stm, s, 30);
    c.require(stm.read(action) == kActionStraight, "(d) interchange fixes Straight");

    auto det = landmark_determinant(world.ltm, s);
    c.require(det.has_value() && *det == -2, "(e) landmark determinant is -2");
    std::vector<std::vector<long long>> matrix{
        {1, 2, 1, 1}, {0, 2, 2, 2}, {0, 2, 1, 2}, {1, 2, 1, 2}};
    c.require(oracle::cofactor_det(matrix) == -2, "(e) cofactor oracle agrees on -2");
}

// ---- criterion 4 -----------------------------------------------------------

void oracle_equivalence(Checker& c) {
    std::mt19937_64 rng(g_seed ^ 0x9e3779b97f4a7c15ull);
    for (int trial = 0; trial < 1000; ++trial) {
        oracle::RandomMemory mem = oracle::random_memory(rng);
        SearchCues cues = oracle::random_cues(rng, mem);
        SearchOutcome got = mem.ltm.search(cues);
        std::vector<std::size_t> want = oracle::scan_matches(mem.ltm, cues);
        OutcomeKind kind = want.empty()      ? OutcomeKind::no_recall
                           : want.size() == 1 ? OutcomeKind::single
                                              : OutcomeKind::multiple;
        if (got.matches() != want || got.kind() != kind || got.count() != want.size()) {
            c.require(false, "search/oracle mismatch at trial " + std::to_string(trial));
            return;
        }
        if (!cues.empty()) {
            auto entries = brainstorm(mem.ltm, cues);
            const auto& full = entries[0].matches;
            for (const auto& e : entries) {
                if (e.matches.size() < full.size() ||
                    !std::includes(e.matches.begin(), e.matches.end(), full.begin(),
                                   full.end())) {
                    c.require(false, "brainstorm not monotone at trial " + std::to_string(trial));
                    return;
                }
            }
        }
    }
}

// ---- criterion 5 -----------------------------------------------------------

void write_once_rehearsal(Checker& c) {
    Ltm ltm(4);
    LtmWord w;
    w.values = {{0, 1}, {1, 2}};
    c.require(!ltm.memorize(w, 2, 3).committed && ltm.size() == 0,
              "below-threshold rehearsal never commits");
    MemorizeOutcome at = ltm.memorize(w, 3, 3);
    c.require(at.committed && at.index == 0, "at-threshold rehearsal commits");
    MemorizeOutcome above = ltm.memorize(w, 9, 3);
    c.require(above.committed && above.index == 1, "above-threshold rehearsal commits");
    bool threw = false;
    try {
        ltm.memorize_at(0, w, 9, 3);
    } catch (const WriteOnceViolation&) {
        threw = true;
    }
    c.require(threw, "overwriting a committed word raises WriteOnceViolation");

    std::mt19937_64 rng(g_seed ^ 0xabcdef);
    oracle::RandomMemory mem = oracle::random_memory(rng, 8, 32);
    std::vector<LtmWord> snapshot;
    for (std::size_t i = 0; i < mem.ltm.size(); ++i) snapshot.push_back(mem.ltm.word(i));
    for (int step = 0; step < 2000; ++step) {
        switch (rng() % 3) {
            case 0: mem.ltm.search(oracle::random_cues(rng, mem)); break;
            case 1: {
                LtmWord extra;
                extra.values.emplace(FieldId(rng() % mem.schema.field_count()),
                                     Nibble(rng() % 16));
                mem.ltm.memorize(std::move(extra), int(rng() % 4), 2);
                break;
            }
            case 2:
                if (mem.ltm.size() > 0) {
                    try {
                        LtmWord extra;
                        extra.values.emplace(FieldId(0), Nibble(1));
                        mem.ltm.memorize_at(rng() % mem.ltm.size(), extra, 9, 2);
                        c.require(false, "expected WriteOnceViolation");
                    } catch (const WriteOnceViolation&) {
                    }
                }
                break;
        }
    }
    bool identical = mem.ltm.size() >= snapshot.size();
    for (std::size_t i = 0; identical && i < snapshot.size(); ++i)
        identical = mem.ltm.word(i) == snapshot[i];
    c.require(identical, "committed words bit-identical after random operation sequences");
}

// ---- criterion 6 -----------------------------------------------------------

void repression(Checker& c) {
    const char* base =
        "[schema]\nfield seen\nfield dread kind=irrational\nfield omen kind=irrational\n"
        "field ghost kind=irrational\n"
        "[config]\nrehearsal_threshold=1\nrepression_limit=2\n%DREAM%"
        "[ltm]\nseen=1 dread=3 omen=2 ghost=1 rehearsals=1\n"
        "[sensory]\ntick=1 seen=1\n";

    std::string awake = base;
    awake.replace(awake.find("%DREAM%"), 7, "");
    World world = load_scenario(awake);
    run_simulation(world, 1);
    bool repressed_event = false, recall_event = false;
    for (const TraceEvent& e : world.trace) {
        repressed_event |= e.kind == TraceKind::repressed;
        recall_event |= e.kind == TraceKind::recall;
    }
    c.require(repressed_event && !recall_event, "irrational_count > L emits Repressed only");
    c.require(!world.stm.live(world.schema.index_of("dread")) &&
                  world.stm.read(world.schema.index_of("dread")) == 0,
              "repressed values never dominate the register");

    std::string dreaming = base;
    dreaming.replace(dreaming.find("%DREAM%"), 7, "dream_mode=on\n");
    World dream = load_scenario(dreaming);
    run_simulation(dream, 1);
    bool dream_recall = false;
    for (const TraceEvent& e : dream.trace) dream_recall |= e.kind == TraceKind::recall;
    c.require(dream_recall && dream.stm.read(dream.schema.index_of("dread")) == 3,
              "dream mode admits the same recall");

    bool monotone = true;
    for (int limit = 0; limit <= 5; ++limit) {
        bool repressed_below = false;
        for (std::size_t k = 0; k <= 12; ++k) {
            ImportanceRecord rec;
            rec.irrational_count = k;
            bool r = gate(rec, limit, false) == GateDecision::repressed;
            if (repressed_below && !r) monotone = false;
            repressed_below |= r;
            if (gate(rec, limit, true) != GateDecision::allowed) monotone = false;
        }
    }
    c.require(monotone, "gate is monotone in irrational_count and constant under dreams");
}

// ---- criterion 7 -----------------------------------------------------------

void determinism_golden(Checker& c) {
    for (const char* name : {"blackforest.scn", "equation.scn"}) {
        World a = load_scenario_file(scenario_path(name));
        World b = load_scenario_file(scenario_path(name));
        std::ostringstream sa, sb;
        run_simulation(a, 6, &sa);
        run_simulation(b, 6, &sb);
        c.require(!sa.str().empty() && sa.str() == sb.str(),
                  std::string(name) + " replays to a byte-identical trace in-process");

        std::string cmd = std::string("'") + ENGRAM_CLI_PATH + "' run '" + scenario_path(name) +
                          "' --ticks 6 2>/dev/null";
        CommandResult first = run_command(cmd);
        CommandResult second = run_command(cmd);
        c.require(first.status == 0 && !first.output.empty() && first.output == second.output,
                  std::string(name) + " replays byte-identically through the CLI");
        std::ostringstream expected;
        World w = load_scenario_file(scenario_path(name));
        run_simulation(w, 6, &expected);
        c.require(first.output == expected.str(),
                  std::string(name) + " CLI trace equals the library trace");
    }

    // nano-run output equals library run() on the same inputs
    AttributeSchema s;
    for (const char* f : {"problem_Y", "pad1", "pad2", "arith_op1"})
        s.add_field(f);
    NanoProgram move = emit_move(s, "problem_Y", "arith_op1");
    auto tmp = std::filesystem::temp_directory_path() / "acceptance_move.nano";
    {
        std::ofstream out(tmp);
        out << print_program(move);
    }
    std::string bus_in = "1011 0000 0000 0000";
    BitVec expected_bits = run(parse_bus_string(bus_in), move);
    CommandResult cli = run_command(std::string("'") + ENGRAM_CLI_PATH + "' nano-run '" +
                                    tmp.string() + "' --bus '" + bus_in + "' 2>/dev/null");
    std::string expected_line = format_bus_string(expected_bits) + "\n";
    c.require(cli.status == 0 && cli.output == expected_line,
              "CLI nano-run output equals library run(), got '" + cli.output + "'");
    std::filesystem::remove(tmp);
}

struct Criterion {
    int id;
    std::string title;
    long budget_ms; // 0 = no stated budget
    std::function<void(Checker&)> body;
};

} // namespace

int main(int argc, char** argv) {
    for (int i = 1; i + 1 < argc; ++i)
        if (std::string(argv[i]) == "--seed") g_seed = std::stoull(argv[i + 1]);

    const std::vector<Criterion> criteria{
        {1, "equation pipeline: 2x+5=11 -> 2x=6 -> x=3, 20 ops / 40 lines", 1000,
         equation_pipeline},
        {2, "reversibility: 1000 programs, involutions, 12-bit bijection", 30000,
         reversibility_suite},
        {3, "black forest fixture: recall, multiple match, cue editing, interchange, det -2",
         1000, black_forest_fixture},
        {4, "associative search equals the linear-scan oracle; brainstorm monotone", 30000,
         oracle_equivalence},
        {5, "write-once PROM semantics and rehearsal gating", 0, write_once_rehearsal},
        {6, "repression limit L and dream mode", 0, repression},
        {7, "deterministic replay and CLI/library agreement", 0, determinism_golden},
    };

    int failed = 0;
    for (const Criterion& crit : criteria) {
        Checker checker;
        auto start = std::chrono::steady_clock::now();
        try {
            crit.body(checker);
        } catch (const std::exception& e) {
            checker.failures.push_back(std::string("unexpected exception: ") + e.what());
        }
        auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - start)
                           .count();
        if (crit.budget_ms > 0 && elapsed > crit.budget_ms)
            checker.failures.push_back("runtime " + std::to_string(elapsed) +
                                       " ms exceeds budget " + std::to_string(crit.budget_ms) +
                                       " ms");
        if (checker.failures.empty()) {
            std::cout << "PASS criterion " << crit.id << " (" << elapsed << " ms): "
                      << crit.title << "\n";
        } else {
            ++failed;
            std::cout << "FAIL criterion " << crit.id << " (" << elapsed << " ms): "
                      << crit.title << "\n";
            for (const std::string& f : checker.failures) std::cout << "  - " << f << "\n";
        }
    }
    return failed == 0 ? 0 : 1;
}
