#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "tfs/bignum.hpp"
#include "tfs/octagon.hpp"
#include "tfs/updates.hpp"

namespace tfs {

// Update expression under concrete pattern bounds and corner aggregates.
// Any infinite symbol disables the row (+inf); otherwise exact rational
// evaluation with floor division.
ExtInt eval_expr(const UpdateExpr& e, const std::vector<ExtInt>& bounds,
                 const std::vector<std::pair<ExtInt, ExtInt>>& aggs);

struct ApplyResult {
  bool applicable;
  Octagon out;  // bottom when inapplicable
};

// One (guard, update) pair on an input octagon over the tracked
// registers: meet with the guard, read the pattern bounds, evaluate the
// rows, clamp to the representable range. No solver involved.
ApplyResult apply_pair(const TransferFunction& tf, size_t pair_idx,
                       const Octagon& in);

// Join of all applicable pairs; bottom when none applies.
Octagon apply_tf(const TransferFunction& tf, const Octagon& in);

}  // namespace tfs
