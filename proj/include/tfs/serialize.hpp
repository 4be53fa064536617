#pragma once

#include <string>
#include <vector>

#include "tfs/octagon.hpp"
#include "tfs/updates.hpp"

namespace tfs {

// Text and JSON views of a transfer function. Both are lossless: the
// parsers rebuild the block, the tracked registers, the guards and the
// update rows exactly, so serialize-parse-serialize is the identity.
// Rows are written canonically (template order, normalized terms), which
// also keeps repeated runs byte-identical.

std::string instr_text(const Instruction& ins);
std::string block_text(const Block& b);  // newline-joined instructions

// "r0+r1", "-r0", ... over the given registers; primed appends ' to
// each register name.
std::string pattern_text(const TemplateRow& row, const std::vector<int>& regs,
                         bool primed = false);

std::string monomial_text(const Monomial& m);

// "max(...)" terms with coefficients, corner aggregates as cmax(...)
// and cmin(...), "(sum) / d" when the divisor exceeds 1.
std::string expr_text(const UpdateExpr& e, const std::vector<int>& regs,
                      const std::vector<Monomial>& monomials);

std::string to_text(const TransferFunction& tf);
TransferFunction from_text(const std::string& s);

std::string to_json(const TransferFunction& tf);
TransferFunction from_json(const std::string& s);

// Comma-separated state rows over the given registers:
//   "r0+r1 <= 10", "r0 >= -3", "r1 = 7", "0 <= r0 <= 5".
// Throws std::runtime_error on malformed input. The result is not closed.
Octagon parse_state(const std::string& s, const std::vector<int>& regs);

// Readable rendering of a closed octagon: one interval per register,
// then the finite pair bounds.
std::string state_text(const Octagon& o, const std::vector<int>& regs);

}  // namespace tfs
