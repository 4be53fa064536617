#include "tfs/modes.hpp"

#include <stdexcept>

#include "tfs/encoder.hpp"

namespace tfs {

namespace {

void check_cap(size_t count) {
  if (count > kModeVectorCap)
    throw std::runtime_error("mode vector count exceeds cap");
}

}  // namespace

std::vector<ModeVector> enumerate_modes(const Block& b, int width,
                                        Interp interp, ModeStats* stats) {
  Solver solver;
  Circuit circuit(solver);
  BlockCircuit bc(circuit, b, width, interp);
  std::vector<int> idxs = multi_modal_indices(b, interp);

  std::vector<ModeVector> out;
  ModeVector prefix;
  // Depth-first over the mode tree; the recursion invariant is that
  // prefix is already known satisfiable.
  auto walk = [&](auto&& self) -> void {
    if (prefix.size() == idxs.size()) {
      check_cap(out.size() + 1);
      out.push_back(prefix);
      return;
    }
    const Instruction& ins = b.instrs[static_cast<size_t>(idxs[prefix.size()])];
    for (Mode m : modality(ins, interp)) {
      prefix.push_back(m);
      SolveResult r = solver.solve(bc.mode_assumptions(prefix));
      if (stats) ++stats->solver_calls;
      if (r.status == SolveStatus::LIMIT)
        throw std::runtime_error("solver budget exhausted enumerating modes");
      if (r.sat()) self(self);
      prefix.pop_back();
    }
  };
  walk(walk);
  if (stats) stats->conflicts += solver.conflicts();
  return out;
}

std::vector<ModeVector> enumerate_modes_flat(const Block& b, int width,
                                             Interp interp, ModeStats* stats) {
  Solver solver;
  Circuit circuit(solver);
  BlockCircuit bc(circuit, b, width, interp);
  std::vector<int> idxs = multi_modal_indices(b, interp);

  uint64_t total = 1;
  for (int i : idxs) {
    total *= modality(b.instrs[static_cast<size_t>(i)], interp).size();
    if (total > kModeVectorCap)
      throw std::runtime_error("mode vector count exceeds cap");
  }

  std::vector<ModeVector> out;
  ModeVector v(idxs.size(), Mode::E);
  auto walk = [&](auto&& self, size_t at) -> void {
    if (at == idxs.size()) {
      SolveResult r = solver.solve(bc.mode_assumptions(v));
      if (stats) ++stats->solver_calls;
      if (r.status == SolveStatus::LIMIT)
        throw std::runtime_error("solver budget exhausted enumerating modes");
      if (r.sat()) out.push_back(v);
      return;
    }
    const Instruction& ins = b.instrs[static_cast<size_t>(idxs[at])];
    for (Mode m : modality(ins, interp)) {
      v[at] = m;
      self(self, at + 1);
    }
  };
  walk(walk, 0);
  if (stats) stats->conflicts += solver.conflicts();
  return out;
}

}  // namespace tfs
