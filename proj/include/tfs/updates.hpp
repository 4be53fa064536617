#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "tfs/affine.hpp"
#include "tfs/bignum.hpp"
#include "tfs/guards.hpp"
#include "tfs/isa.hpp"
#include "tfs/octagon.hpp"

namespace tfs {

// Product of registers (register numbers, ascending, repeats allowed:
// {0,0} is r0^2).
struct Monomial {
  std::vector<int> regs;
  bool operator==(const Monomial&) const = default;
};

// Symbols an update expression may reference: the bound of an input template
// pattern, or a corner aggregate of a monomial over the input ranges
// (AGG_MAX = greatest corner product, AGG_MIN = least).
enum class Sym { PATTERN, AGG_MAX, AGG_MIN };

struct SymTerm {
  Int coeff;
  Sym sym = Sym::PATTERN;
  int index = 0;  // template row index, or monomial index for aggregates
  bool operator==(const SymTerm&) const = default;
};

// value = (sum of terms + constant) / divisor, divisor >= 1, floor division.
// No terms = a constant.
struct UpdateExpr {
  std::vector<SymTerm> terms;
  Int constant{0};
  Int divisor{1};
  bool operator==(const UpdateExpr&) const = default;
};

enum class RowKind { AFFINE, CONST, MINEXPR };

// Upper bound on one output template pattern; a missing pattern is unbounded.
// Interval lower bounds are the rows of the negated unary patterns. MINEXPR
// takes the least of its choices.
struct UpdateRow {
  int pattern = 0;
  RowKind kind = RowKind::AFFINE;
  UpdateExpr expr;                  // AFFINE / CONST
  std::vector<UpdateExpr> choices;  // MINEXPR
  bool operator==(const UpdateRow&) const = default;
};

// One affine row solved for a single output register:
// divisor * out = coeffs . (inputs, monomial values) + constant.
struct SolvedUpdate {
  Int divisor{1};
  std::vector<Int> coeffs;
  Int constant{0};
  bool operator==(const SolvedUpdate&) const = default;
};

struct UpdateStats {
  uint64_t affine_calls = 0;  // input/output hull sampling
  uint64_t row_calls = 0;     // per-row bound and verification queries
};

enum class Domain { INTERVAL, OCTAGON };
enum class Strategy { EXACT, MEDIUM, BOUNDS };

struct SynthConfig {
  int width = 32;
  Interp interp = Interp::SIGNED;
  Domain domain = Domain::OCTAGON;
  Strategy strategy = Strategy::EXACT;
  std::vector<int> regs;           // tracked registers; empty = live-in
  std::vector<Monomial> monomials;
};

// Per-row back-substitution of the hull constraints, outputs over inputs and
// monomials only; nullopt where the hull does not determine an output.
std::vector<std::optional<SolvedUpdate>> solve_updates(const AffineSpace& hull,
                                                       int nregs, int nmono);

// Interval system: one pair of rows (+v', -v') per solved output, input
// bounds substituted in the direction of each coefficient's sign.
std::vector<UpdateRow> lift_interval(
    const std::vector<std::optional<SolvedUpdate>>& solved, int nregs);

// Octagonal system from the unary rows alone: each pair row is the sum of
// its two unary rows.
std::vector<UpdateRow> lift_octagon_medium(
    const std::vector<std::optional<SolvedUpdate>>& solved, int nregs);

// Constructive tight row for one output pattern: greedy pair-first
// decomposition of the pattern's solved expression for unary patterns, sum
// of the two unary rows for pair patterns, identity passthrough when the
// expression is itself an input pattern. Monomial coefficients map to corner
// aggregates by sign. nullopt when an involved output is unsolved.
std::optional<UpdateExpr> octagon_candidate(
    const std::vector<std::optional<SolvedUpdate>>& solved, int nregs,
    int pattern);

// One incremental solver session per mode vector; every query enters through
// assumptions so the phases share learned clauses.
class UpdateSession {
 public:
  UpdateSession(const Block& b, const std::vector<int>& regs, int width,
                Interp interp, const ModeVector& mv,
                const std::vector<Monomial>& monomials = {});
  ~UpdateSession();

  UpdateSession(const UpdateSession&) = delete;
  UpdateSession& operator=(const UpdateSession&) = delete;

  // Affine hull of the mode's (outputs, inputs, monomial values) points.
  const AffineSpace& hull();
  const std::vector<std::optional<SolvedUpdate>>& solved();

  // Greatest value of an output pattern over the mode region.
  Int bound_const(int pattern);

  // min over the per-input-pattern candidates d_k + max(out - in_k)
  // (live-in patterns only) and the constant bound.
  UpdateRow relational_row(int pattern);

  // Affine-join loop over the free-bound formula, seeded with maximal models
  // on the constructive row; nullopt when the hull stops determining the
  // pattern's bound.
  std::optional<UpdateRow> exact_row(int pattern);

  // Strict-exceed test: no input and bound assignment pushes the pattern
  // above e. The certificate for constructed rows with aggregate terms.
  bool verify_row(int pattern, const UpdateExpr& e);

  std::vector<UpdateRow> interval_rows();
  std::vector<UpdateRow> medium_rows();
  std::vector<UpdateRow> bounds_rows();   // constant bound per pattern
  std::vector<UpdateRow> octagon_rows();  // exact -> verified -> relational

  const UpdateStats& stats() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

struct GuardedUpdate {
  ModeVector modes;
  Guard guard;
  std::vector<UpdateRow> rows;
};

struct SynthStats {
  uint64_t mode_calls = 0;
  uint64_t guard_calls = 0;
  uint64_t affine_calls = 0;
  uint64_t update_calls = 0;
};

struct TransferFunction {
  Block block;
  int width = 32;
  Interp interp = Interp::SIGNED;
  Domain domain = Domain::OCTAGON;
  std::vector<int> regs;
  std::vector<Monomial> monomials;
  std::vector<GuardedUpdate> pairs;
  SynthStats stats;
};

TransferFunction synthesize(const Block& b, const SynthConfig& cfg);

}  // namespace tfs
