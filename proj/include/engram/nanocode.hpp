#pragma once

#include <algorithm>
#include <cstdint>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "engram/bits.hpp"
#include "engram/errors.hpp"
#include "engram/schema.hpp"

namespace engram {

/// One conditional flip: if every FM bus bit is true (vacuously so for an
/// empty FM set), every TO bit is complemented. FM and TO must be disjoint;
/// that is what makes each operation its own inverse.
struct NanoOp {
    std::vector<std::uint16_t> fm; // sorted, unique; may be empty
    std::vector<std::uint16_t> to; // sorted, unique; never empty in a verified op

    friend bool operator==(const NanoOp&, const NanoOp&) = default;
};

struct NanoProgram {
    std::string name;
    std::vector<NanoOp> ops;
    // Bus bits the program expects to be zero before it runs (emit_move and
    // emit_copy destinations). Empty for hand-assembled programs.
    std::vector<std::uint16_t> requires_zero;

    friend bool operator==(const NanoProgram&, const NanoProgram&) = default;
};

namespace detail {

inline std::vector<std::uint16_t> parse_index_list(std::string_view text, std::size_t line_no) {
    std::vector<std::uint16_t> out;
    std::string token;
    std::istringstream in{std::string(text)};
    while (std::getline(in, token, ',')) {
        // tolerate surrounding blanks
        std::size_t a = token.find_first_not_of(" \t");
        if (a == std::string::npos)
            throw ParseError("line " + std::to_string(line_no) + ": empty bit index");
        std::size_t b = token.find_last_not_of(" \t");
        token = token.substr(a, b - a + 1);
        std::size_t pos = 0;
        unsigned long v = 0;
        try {
            v = std::stoul(token, &pos);
        } catch (const std::exception&) {
            pos = 0;
        }
        if (pos != token.size() || v > 0xFFFF)
            throw ParseError("line " + std::to_string(line_no) + ": malformed bit index '" +
                             token + "'");
        out.push_back(static_cast<std::uint16_t>(v));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

inline std::string strip_comment(std::string line) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::size_t a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = line.find_last_not_of(" \t\r");
    return line.substr(a, b - a + 1);
}

} // namespace detail

/// Parse nanocode assembly: alternating `FM <indices>` / `TO <indices>` line
/// pairs, two lines per operation. `#` comments and blank lines are ignored.
/// The FM index list may be empty (unconditional flip); the TO list may not.
/// first_line offsets the line numbers reported in diagnostics.
inline NanoProgram assemble(std::string_view text, std::string name = "",
                            std::size_t first_line = 1) {
    NanoProgram prog;
    prog.name = std::move(name);
    std::istringstream in{std::string(text)};
    std::string raw;
    std::size_t line_no = first_line - 1;
    bool expect_fm = true;
    NanoOp pending;
    std::size_t pending_line = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = detail::strip_comment(raw);
        if (line.empty()) continue;
        std::string_view view = line;
        bool is_fm = view.rfind("FM", 0) == 0;
        bool is_to = view.rfind("TO", 0) == 0;
        if (!is_fm && !is_to)
            throw ParseError("line " + std::to_string(line_no) +
                             ": expected FM or TO, got '" + line + "'");
        std::string_view rest = view.substr(2);
        if (!rest.empty() && rest[0] != ' ' && rest[0] != '\t')
            throw ParseError("line " + std::to_string(line_no) +
                             ": expected FM or TO, got '" + line + "'");
        if (expect_fm) {
            if (is_to)
                throw ParseError("line " + std::to_string(line_no) +
                                 ": TO before its FM line");
            pending = NanoOp{};
            pending.fm = detail::parse_index_list(rest, line_no);
            pending_line = line_no;
            expect_fm = false;
        } else {
            if (is_fm)
                throw ParseError("line " + std::to_string(line_no) +
                                 ": FM line where TO was expected (operation started at line " +
                                 std::to_string(pending_line) + ")");
            pending.to = detail::parse_index_list(rest, line_no);
            if (pending.to.empty())
                throw ParseError("line " + std::to_string(line_no) + ": TO line is empty");
            prog.ops.push_back(std::move(pending));
            expect_fm = true;
        }
    }
    if (!expect_fm)
        throw ParseError("odd line count: FM line " + std::to_string(pending_line) +
                         " has no TO line");
    return prog;
}

/// Canonical assembly text; assemble(print_program(p)) reproduces p exactly.
inline std::string print_program(const NanoProgram& prog) {
    std::ostringstream out;
    for (const NanoOp& op : prog.ops) {
        out << "FM";
        for (std::size_t i = 0; i < op.fm.size(); ++i)
            out << (i == 0 ? " " : ",") << op.fm[i];
        out << "\nTO";
        for (std::size_t i = 0; i < op.to.size(); ++i)
            out << (i == 0 ? " " : ",") << op.to[i];
        out << "\n";
    }
    return out.str();
}

struct Violation {
    std::size_t op_index;
    std::string message;
};

/// Reversibility audit: flags any operation whose FM and TO sets overlap or
/// address bits beyond the bus. An empty result means the program is safe.
inline std::vector<Violation> verify(const NanoProgram& prog, std::size_t bus_width) {
    std::vector<Violation> violations;
    for (std::size_t i = 0; i < prog.ops.size(); ++i) {
        const NanoOp& op = prog.ops[i];
        if (op.to.empty())
            violations.push_back({i, "TO set is empty"});
        for (std::uint16_t b : op.fm)
            if (b >= bus_width)
                violations.push_back({i, "FM bit " + std::to_string(b) + " out of range (bus width " +
                                             std::to_string(bus_width) + ")"});
        for (std::uint16_t b : op.to)
            if (b >= bus_width)
                violations.push_back({i, "TO bit " + std::to_string(b) + " out of range (bus width " +
                                             std::to_string(bus_width) + ")"});
        std::vector<std::uint16_t> overlap;
        std::set_intersection(op.fm.begin(), op.fm.end(), op.to.begin(), op.to.end(),
                              std::back_inserter(overlap));
        for (std::uint16_t b : overlap)
            violations.push_back({i, "FM and TO overlap at bit " + std::to_string(b)});
    }
    return violations;
}

inline void verify_or_throw(const NanoProgram& prog, std::size_t bus_width) {
    auto v = verify(prog, bus_width);
    if (v.empty()) return;
    std::string msg = "nanocode '" + prog.name + "' failed verification:";
    for (const Violation& viol : v)
        msg += " [op " + std::to_string(viol.op_index) + "] " + viol.message + ";";
    throw VerifyError(msg);
}

inline BitVec step(BitVec bits, const NanoOp& op) {
    for (std::uint16_t b : op.fm)
        if (!bits.test(b)) return bits;
    for (std::uint16_t b : op.to) bits.flip(b);
    return bits;
}

inline BitVec run(BitVec bits, const NanoProgram& prog) {
    for (const NanoOp& op : prog.ops) bits = step(std::move(bits), op);
    return bits;
}

struct RunReport {
    BitVec bits;
    std::vector<std::string> warnings;
};

/// Like run(), but reports when the program's zero-bit precondition does not
/// hold. The flips are still applied; the result is then plain XOR rather
/// than the intended move/copy.
inline RunReport run_checked(BitVec bits, const NanoProgram& prog) {
    RunReport report;
    for (std::uint16_t b : prog.requires_zero) {
        if (bits.test(b)) {
            report.warnings.push_back("program '" + prog.name + "' expects bit " +
                                      std::to_string(b) +
                                      " to be zero; result degrades to XOR");
        }
    }
    report.bits = run(std::move(bits), prog);
    return report;
}

/// The inverse program: operations in reverse order. Each verified operation
/// is its own inverse, because the flip never touches its condition bits.
inline NanoProgram reverse(const NanoProgram& prog) {
    NanoProgram rev;
    rev.name = prog.name.empty() ? "" : prog.name + "_reversed";
    rev.ops.assign(prog.ops.rbegin(), prog.ops.rend());
    return rev;
}

namespace detail {

inline std::vector<std::uint16_t> field_bits(FieldId f) {
    std::vector<std::uint16_t> bits;
    for (std::size_t k = 0; k < AttributeSchema::kFieldWidth; ++k)
        bits.push_back(static_cast<std::uint16_t>(f * AttributeSchema::kFieldWidth + k));
    return bits;
}

} // namespace detail

/// Copy src into dst bit by bit: one conditional flip per bit. Requires dst
/// to be all-zero at run time; src is retained.
inline NanoProgram emit_copy(const AttributeSchema& schema, std::string_view src,
                             std::string_view dst) {
    FieldId s = schema.index_of(src);
    FieldId d = schema.index_of(dst);
    if (s == d) throw SchemaError("copy source and destination are the same field");
    NanoProgram prog;
    prog.name = "copy_" + std::string(src) + "_to_" + std::string(dst);
    auto sb = detail::field_bits(s);
    auto db = detail::field_bits(d);
    for (std::size_t k = 0; k < sb.size(); ++k)
        prog.ops.push_back(NanoOp{{sb[k]}, {db[k]}});
    prog.requires_zero = db;
    return prog;
}

/// Move src into dst: the copy phase above, then a clear phase that flips each
/// src bit from its fresh dst image, leaving src all-zero. 2w operations for a
/// w-bit field.
inline NanoProgram emit_move(const AttributeSchema& schema, std::string_view src,
                             std::string_view dst) {
    FieldId s = schema.index_of(src);
    FieldId d = schema.index_of(dst);
    if (s == d) throw SchemaError("move source and destination are the same field");
    NanoProgram prog;
    prog.name = "move_" + std::string(src) + "_to_" + std::string(dst);
    auto sb = detail::field_bits(s);
    auto db = detail::field_bits(d);
    for (std::size_t k = 0; k < sb.size(); ++k)
        prog.ops.push_back(NanoOp{{sb[k]}, {db[k]}});
    for (std::size_t k = 0; k < sb.size(); ++k)
        prog.ops.push_back(NanoOp{{db[k]}, {sb[k]}});
    prog.requires_zero = db;
    return prog;
}

/// Exchange two bus bits with three conditional flips (the CNOT-swap ladder).
inline NanoProgram emit_swap_bits(std::uint16_t a, std::uint16_t b) {
    if (a == b) throw Error("cannot swap a bit with itself");
    NanoProgram prog;
    prog.name = "swap_" + std::to_string(a) + "_" + std::to_string(b);
    prog.ops.push_back(NanoOp{{a}, {b}});
    prog.ops.push_back(NanoOp{{b}, {a}});
    prog.ops.push_back(NanoOp{{a}, {b}});
    return prog;
}

/// Bus-string convention used by the CLI and traces: one 4-bit group per
/// field, field 0 first, each group written MSB-first like an ordinary binary
/// literal. "1011" in group 0 means field 0 holds value 11.
inline BitVec parse_bus_string(std::string_view text) {
    std::string compact;
    for (char c : text) {
        if (c == ' ' || c == '_' || c == '\t') continue;
        if (c != '0' && c != '1')
            throw ParseError(std::string("bus string must contain only 0/1, got '") + c + "'");
        compact.push_back(c);
    }
    if (compact.empty() || compact.size() % AttributeSchema::kFieldWidth != 0)
        throw ParseError("bus string length must be a nonzero multiple of 4, got " +
                         std::to_string(compact.size()));
    BitVec bits(compact.size());
    for (std::size_t p = 0; p < compact.size(); ++p) {
        std::size_t f = p / AttributeSchema::kFieldWidth;
        std::size_t j = p % AttributeSchema::kFieldWidth;
        std::size_t bit = f * AttributeSchema::kFieldWidth +
                          (AttributeSchema::kFieldWidth - 1 - j);
        if (compact[p] == '1') bits.set(bit);
    }
    return bits;
}

inline std::string format_bus_string(const BitVec& bits) {
    std::string out;
    const std::size_t fields = bits.size() / AttributeSchema::kFieldWidth;
    for (std::size_t f = 0; f < fields; ++f) {
        if (f) out.push_back(' ');
        for (std::size_t j = 0; j < AttributeSchema::kFieldWidth; ++j) {
            std::size_t bit = f * AttributeSchema::kFieldWidth +
                              (AttributeSchema::kFieldWidth - 1 - j);
            out.push_back(bits.test(bit) ? '1' : '0');
        }
    }
    return out;
}

} // namespace engram
