#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tfs/bignum.hpp"
#include "tfs/encoder.hpp"
#include "tfs/isa.hpp"
#include "tfs/octagon.hpp"

namespace tfs {

struct GuardStats {
  uint64_t solver_calls = 0;
};

// Octagonal guard over a register tuple: one tight bound per canonical
// template row (octagon_template over regs.size() variables, variable i
// standing for regs[i]).
struct Guard {
  std::vector<int> regs;    // ascending register numbers
  std::vector<Int> bounds;  // parallel to octagon_template(regs.size())

  Octagon octagon() const;  // all rows asserted; not closed
};

// Greatest signed value of vec over models consistent with the base
// assumptions, found by one sign probe plus one probe per remaining bit
// (exactly vec.width() solver calls, satisfiable or not). Empty when the
// probes bottom out at the sign minimum, which the caller's width choice
// reserves for an unsatisfiable base.
std::optional<Int> max_linear(Solver& s, const BitVec& vec,
                              const std::vector<Lit>& base,
                              GuardStats* stats = nullptr);

// Unsigned unary bounds probe the register's input bits directly, most
// significant first: width solver calls per bound instead of width+1.
Int max_unsigned_input(Solver& s, const BitVec& reg,
                       const std::vector<Lit>& base,
                       GuardStats* stats = nullptr);
Int min_unsigned_input(Solver& s, const BitVec& reg,
                       const std::vector<Lit>& base,
                       GuardStats* stats = nullptr);

// Objective width for a template row: w + 1 bits of exact operand value
// plus headroom for the coefficient sum.
int objective_width(int width, const TemplateRow& row);

// Tight octagonal guard of one feasible mode vector over the given
// registers. Builds a fresh incremental session; every bound is a
// maximization over the block's inputs under the mode assumptions.
Guard synth_guard(const Block& b, const std::vector<int>& regs, int width,
                  Interp interp, const ModeVector& mv,
                  GuardStats* stats = nullptr);

// Indices of rows kept for display: greedy forward pass dropping any
// row already entailed by the rest. The octagon is unchanged; this only
// picks the printed subset.
std::vector<size_t> guard_display_rows(const Guard& g);

}  // namespace tfs
