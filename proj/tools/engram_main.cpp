// Command-line front end: scenario runner, single-stepper, world inspector,
// and the nanocode assembler toolchain.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "engram/engram.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw engram::Error("cannot open file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string stem_of(const std::string& path) {
    auto slash = path.find_last_of('/');
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    auto dot = base.find_last_of('.');
    return dot == std::string::npos ? base : base.substr(0, dot);
}

struct RunFlags {
    std::string scenario;
    long ticks = 10;
    std::string policy;
    bool dream = false;
    bool pair_removal = false;
    bool interchange = false;
    long seed = 0;
};

void add_run_flags(CLI::App* cmd, RunFlags& f) {
    cmd->add_option("scenario", f.scenario, "scenario file")->required();
    cmd->add_option("--ticks", f.ticks, "number of attention cycles to run");
    cmd->add_option("--policy", f.policy, "multiple-match policy")
        ->check(CLI::IsMember({"first", "sequential", "importance_max"}));
    cmd->add_flag("--dream", f.dream, "ignore the repression limit L");
    cmd->add_flag("--pair-removal", f.pair_removal, "let the cue editor remove cue pairs");
    cmd->add_flag("--interchange", f.interchange, "swap Left/Right on recalled actions");
    cmd->add_option("--seed", f.seed,
                    "accepted for harness compatibility; the simulator is deterministic");
}

engram::World load_with_flags(const RunFlags& f, const CLI::App* cmd) {
    engram::World world = engram::load_scenario_file(f.scenario);
    if (cmd->count("--policy")) {
        if (f.policy == "first") world.config.policy = engram::MultiMatchPolicy::first;
        if (f.policy == "sequential") world.config.policy = engram::MultiMatchPolicy::sequential;
        if (f.policy == "importance_max")
            world.config.policy = engram::MultiMatchPolicy::importance_max;
    }
    if (f.dream) world.config.dream_mode = true;
    if (f.pair_removal) world.config.pair_removal = true;
    if (f.interchange) world.config.interchange = true;
    for (const std::string& w : world.load_warnings) std::cerr << "warning: " << w << "\n";
    return world;
}

void print_stm(const engram::World& world) {
    auto live = world.stm.live_values();
    std::cout << "stm: " << (live.empty() ? "(empty)" : render_values(live, world.schema));
    if (auto problem = engram::render_problem_area(world.stm, world.schema))
        std::cout << "  problem: " << *problem;
    std::cout << "\n";
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"associative-memory brain simulator"};
    app.require_subcommand(1);

    RunFlags run_flags;
    CLI::App* run_cmd = app.add_subcommand("run", "run a scenario, emitting the trace");
    add_run_flags(run_cmd, run_flags);

    RunFlags step_flags;
    step_flags.ticks = -1;
    CLI::App* step_cmd =
        app.add_subcommand("step", "run a scenario one tick at a time (Enter advances, q quits)");
    add_run_flags(step_cmd, step_flags);

    std::string inspect_path;
    CLI::App* inspect_cmd = app.add_subcommand("inspect", "dump a loaded scenario world");
    inspect_cmd->add_option("scenario", inspect_path, "scenario file")->required();

    std::string asm_path;
    CLI::App* asm_cmd =
        app.add_subcommand("nano-assemble", "parse nanocode and print its canonical form");
    asm_cmd->add_option("file", asm_path, "nanocode assembly file")->required();

    std::string verify_path;
    std::size_t verify_width = 0;
    CLI::App* verify_cmd =
        app.add_subcommand("nano-verify", "check FM/TO disjointness and bit ranges");
    verify_cmd->add_option("file", verify_path, "nanocode assembly file")->required();
    verify_cmd->add_option("--bus-width", verify_width,
                           "bus width for the range check (default: widest bit used + 1)");

    std::string nrun_path;
    std::string nrun_bus;
    CLI::App* nrun_cmd = app.add_subcommand("nano-run", "apply a program to a bus state");
    nrun_cmd->add_option("file", nrun_path, "nanocode assembly file")->required();
    nrun_cmd
        ->add_option("--bus", nrun_bus,
                     "initial bus: 4-bit groups, field 0 first, each group MSB-first")
        ->required();

    std::string rev_path;
    CLI::App* rev_cmd = app.add_subcommand("nano-reverse", "print the inverse program");
    rev_cmd->add_option("file", rev_path, "nanocode assembly file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            engram::World world = load_with_flags(run_flags, run_cmd);
            engram::run_simulation(world, run_flags.ticks, &std::cout);
            return 0;
        }
        if (*step_cmd) {
            engram::World world = load_with_flags(step_flags, step_cmd);
            long remaining = step_flags.ticks;
            std::string line;
            while (remaining != 0) {
                engram::attention_cycle(world, &std::cout);
                print_stm(world);
                if (remaining > 0) --remaining;
                if (remaining == 0) break;
                std::cout << "-- tick " << world.tick << " done; Enter for next, q to quit: "
                          << std::flush;
                if (!std::getline(std::cin, line) || line == "q") break;
            }
            return 0;
        }
        if (*inspect_cmd) {
            std::cout << engram::dump_world(engram::load_scenario_file(inspect_path));
            return 0;
        }
        if (*asm_cmd) {
            std::cout << engram::print_program(
                engram::assemble(read_file(asm_path), stem_of(asm_path)));
            return 0;
        }
        if (*verify_cmd) {
            engram::NanoProgram prog =
                engram::assemble(read_file(verify_path), stem_of(verify_path));
            std::size_t width = verify_width;
            if (verify_cmd->count("--bus-width") == 0) {
                for (const engram::NanoOp& op : prog.ops) {
                    for (auto b : op.fm) width = std::max<std::size_t>(width, b + 1);
                    for (auto b : op.to) width = std::max<std::size_t>(width, b + 1);
                }
            }
            auto violations = engram::verify(prog, width);
            if (violations.empty()) {
                std::cout << "ok: " << prog.ops.size() << " operations, "
                          << 2 * prog.ops.size() << " lines\n";
                return 0;
            }
            for (const auto& v : violations)
                std::cout << "violation: op " << v.op_index << ": " << v.message << "\n";
            return 1;
        }
        if (*nrun_cmd) {
            engram::NanoProgram prog = engram::assemble(read_file(nrun_path), stem_of(nrun_path));
            engram::BitVec bus = engram::parse_bus_string(nrun_bus);
            engram::verify_or_throw(prog, bus.size());
            engram::RunReport report = engram::run_checked(bus, prog);
            for (const std::string& w : report.warnings) std::cerr << "warning: " << w << "\n";
            std::cout << engram::format_bus_string(report.bits) << "\n";
            return 0;
        }
        if (*rev_cmd) {
            std::cout << engram::print_program(
                engram::reverse(engram::assemble(read_file(rev_path), stem_of(rev_path))));
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
