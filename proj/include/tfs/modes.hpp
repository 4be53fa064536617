#pragma once

#include <cstdint>
#include <vector>

#include "tfs/isa.hpp"

namespace tfs {

// Hard ceiling on enumerated mode vectors; blocks past it are rejected
// rather than ground through.
constexpr uint64_t kModeVectorCap = 4096;

struct ModeStats {
  uint64_t solver_calls = 0;
  uint64_t conflicts = 0;
};

// Feasible mode vectors (over the block's multi-modal instructions, in
// program order) at the given width and interpretation. Explores the
// mode tree depth-first with one incremental solver call per candidate
// child, so an unsatisfiable prefix prunes its whole subtree. Vectors
// come out in canonical order: per instruction O, U, P, N, E restricted
// to its modality.
std::vector<ModeVector> enumerate_modes(const Block& b, int width,
                                        Interp interp,
                                        ModeStats* stats = nullptr);

// Reference enumeration: one independent satisfiability query per full
// mode vector, no tree pruning. Same result set as enumerate_modes;
// kept as the cross-check the tree is tested against.
std::vector<ModeVector> enumerate_modes_flat(const Block& b, int width,
                                             Interp interp,
                                             ModeStats* stats = nullptr);

}  // namespace tfs
