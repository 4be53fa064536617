#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "tfs/affine.hpp"
#include "tfs/isa.hpp"
#include "tfs/updates.hpp"

namespace tfs {

// Exhaustive cross-checks for small widths. Everything here runs the
// block concretely over all relevant inputs; nothing below touches a
// solver, so agreement with the synthesized results is meaningful.

// All mode vectors that occur over the live-in inputs (and both incoming
// carries when the flag is a block input).
std::set<ModeVector> brute_modes(const Block& b, int width, Interp interp);

// Greatest value of each octagonal pattern over `regs` across the inputs
// that execute under `mv`. nullopt when no input does at this width.
std::optional<std::vector<Int>> brute_guard_bounds(const Block& b,
                                                   const std::vector<int>& regs,
                                                   int width, Interp interp,
                                                   const ModeVector& mv);

// Affine hull of the mode's (outputs, inputs, monomial) points, computed
// by direct elimination over the full input sweep. Row form matches
// AffineSpace::constraints(). nullopt when the mode is empty.
std::optional<std::vector<AffineRow>> brute_hull(
    const Block& b, const std::vector<int>& regs, int width, Interp interp,
    const ModeVector& mv, const std::vector<Monomial>& monomials = {});

struct CheckReport {
  uint64_t samples = 0;
  uint64_t points = 0;
  uint64_t soundness_violations = 0;
  uint64_t attainment_violations = 0;
  std::vector<std::string> notes;  // first few failures, human-readable

  bool ok() const {
    return soundness_violations == 0 && attainment_violations == 0;
  }
};

// Randomized soundness check. Draws `samples` closed octagons around
// random centers, runs every machine state inside each one through the
// block, and requires the result to land inside the evaluated image.
// Also replays every guard bound against brute_guard_bounds once.
// Deterministic for a fixed seed.
CheckReport check_tf(const TransferFunction& tf, uint64_t samples,
                     uint64_t seed);

std::string check_report_json(const CheckReport& r);

}  // namespace tfs
