#pragma once

#include <utility>
#include <vector>

#include "tfs/bignum.hpp"
#include "tfs/isa.hpp"
#include "tfs/sat.hpp"

namespace tfs {

// Bit vector as literals, least significant first.
struct BitVec {
  std::vector<Lit> bits;

  int width() const { return static_cast<int>(bits.size()); }
  Lit msb() const { return bits.back(); }
};

// Tseitin circuit builder over a solver. Gate helpers fold constants
// (the shared true literal and its negation) so trivial wiring adds no
// clauses. All arithmetic helpers are two's complement.
class Circuit {
 public:
  explicit Circuit(Solver& s);

  Solver& solver() { return s_; }
  Lit true_lit() const { return t_; }
  Lit false_lit() const { return -t_; }
  Lit fresh();
  BitVec fresh_vec(int n);

  Lit land(Lit a, Lit b);
  Lit lor(Lit a, Lit b);
  Lit lxor(Lit a, Lit b);
  Lit land(const std::vector<Lit>& ls);
  Lit lor(const std::vector<Lit>& ls);
  Lit ite(Lit c, Lit a, Lit b);  // c ? a : b
  Lit maj(Lit a, Lit b, Lit c);

  BitVec const_vec(const Int& value, int n);  // two's complement truncation
  BitVec sext(const BitVec& v, int n);
  BitVec zext(const BitVec& v, int n);

  // Mod 2^n on equal widths.
  BitVec add(const BitVec& a, const BitVec& b, Lit carry_in);
  BitVec add(const BitVec& a, const BitVec& b);
  BitVec sub(const BitVec& a, const BitVec& b);  // a - b
  BitVec negate(const BitVec& a);
  BitVec mul(const BitVec& a, const BitVec& b);  // product mod 2^n

  // Comparisons; widths need not match. Signed forms sign-extend,
  // unsigned forms zero-extend.
  Lit eq_const(const BitVec& v, const Int& value);
  Lit sle_const(const BitVec& v, const Int& c);  // v <= c, signed
  Lit sge_const(const BitVec& v, const Int& c);
  Lit ule_const(const BitVec& v, const Int& c);  // v <= c, unsigned
  Lit uge_const(const BitVec& v, const Int& c);
  Lit sle(const BitVec& a, const BitVec& b);  // a <= b, signed
  Lit slt(const BitVec& a, const BitVec& b);
  Lit is_zero(const BitVec& v);

  // Exact signed value of sum_i coeff_i * v_i at width n (the caller
  // picks n wide enough that nothing wraps). Each operand is sign- or
  // zero-extended according to its flag.
  struct LinTerm {
    Int coeff;
    BitVec vec;
    bool sign_extend;
  };
  BitVec linear(const std::vector<LinTerm>& terms, int n);

  // Two's complement bits of value as assumption literals over v.
  static void pin_const(const BitVec& v, const Int& value,
                        std::vector<Lit>& assumptions);

  // Value of v under a model: signed (two's complement) or unsigned.
  static Int vec_value(const BitVec& v, const SolveResult& model, bool is_signed);

 private:
  Solver& s_;
  Lit t_;
};

// One symbolic execution of a block at a given width and interpretation:
// fresh input vectors per register, per-instruction semantics with
// wraparound, a carry chain, and one defined literal per possible mode
// of every instruction. Mode literals are functions of the operands, so
// asserting a mode as an assumption constrains the inputs.
class BlockCircuit {
 public:
  BlockCircuit(Circuit& c, const Block& b, int width, Interp interp);

  Circuit& circuit() { return c_; }
  int width() const { return width_; }
  Interp interp() const { return interp_; }
  const Block& block() const { return block_; }

  const BitVec& input(int reg) const;
  const BitVec& output(int reg) const;
  Lit carry_in() const { return carry_in_; }
  Lit carry_out() const { return carry_out_; }

  // Literal for "instruction at index i runs in mode m"; m must be in
  // modality(instr, interp).
  Lit mode_lit(int instr_idx, Mode m) const;

  // Assumptions asserting a mode prefix over the multi-modal
  // instructions (prefix over multi_modal_indices order).
  std::vector<Lit> mode_assumptions(const ModeVector& prefix) const;

 private:
  BitVec encode_instr(const Instruction& ins, int idx);

  Circuit& c_;
  Block block_;
  int width_;
  Interp interp_;
  std::vector<BitVec> inputs_;   // by register
  std::vector<BitVec> current_;  // by register
  Lit carry_in_;
  Lit carry_out_;
  std::vector<std::vector<std::pair<Mode, Lit>>> mode_lits_;  // by instr
};

}  // namespace tfs
