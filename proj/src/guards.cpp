#include "tfs/guards.hpp"

#include <stdexcept>

namespace tfs {

Octagon Guard::octagon() const {
  Octagon o(static_cast<int>(regs.size()));
  auto rows = octagon_template(static_cast<int>(regs.size()));
  for (size_t i = 0; i < rows.size(); ++i) o.constrain_row(rows[i], bounds[i]);
  return o;
}

std::optional<Int> max_linear(Solver& s, const BitVec& vec,
                              const std::vector<Lit>& base, GuardStats* stats) {
  int k = vec.width();
  std::vector<Lit> assume = base;
  auto probe = [&](Lit l) {
    assume.push_back(l);
    SolveResult r = s.solve(assume);
    if (stats) ++stats->solver_calls;
    if (r.status == SolveStatus::LIMIT)
      throw std::runtime_error("solver budget exhausted maximizing");
    if (!r.sat()) assume.back() = -l;
    return r.sat();
  };
  // Sign first: can the value be non-negative at all?
  probe(-vec.bits[static_cast<size_t>(k - 1)]);
  for (int i = k - 2; i >= 0; --i) probe(vec.bits[static_cast<size_t>(i)]);

  Int v = 0;
  for (int i = 0; i < k; ++i) {
    Lit fixed = assume[base.size() + static_cast<size_t>(k - 1 - i)];
    if (fixed == vec.bits[static_cast<size_t>(i)]) v += pow2(i);
  }
  if (assume[base.size()] == vec.bits[static_cast<size_t>(k - 1)]) v -= pow2(k);
  if (v == -pow2(k - 1)) return std::nullopt;
  return v;
}

Int max_unsigned_input(Solver& s, const BitVec& reg,
                       const std::vector<Lit>& base, GuardStats* stats) {
  std::vector<Lit> assume = base;
  Int v = 0;
  for (int i = reg.width() - 1; i >= 0; --i) {
    assume.push_back(reg.bits[static_cast<size_t>(i)]);
    SolveResult r = s.solve(assume);
    if (stats) ++stats->solver_calls;
    if (r.status == SolveStatus::LIMIT)
      throw std::runtime_error("solver budget exhausted maximizing");
    if (r.sat())
      v += pow2(i);
    else
      assume.back() = -assume.back();
  }
  return v;
}

Int min_unsigned_input(Solver& s, const BitVec& reg,
                       const std::vector<Lit>& base, GuardStats* stats) {
  std::vector<Lit> assume = base;
  Int v = 0;
  for (int i = reg.width() - 1; i >= 0; --i) {
    assume.push_back(-reg.bits[static_cast<size_t>(i)]);
    SolveResult r = s.solve(assume);
    if (stats) ++stats->solver_calls;
    if (r.status == SolveStatus::LIMIT)
      throw std::runtime_error("solver budget exhausted minimizing");
    if (!r.sat()) {
      assume.back() = -assume.back();
      v += pow2(i);
    }
  }
  return v;
}

int objective_width(int width, const TemplateRow& row) {
  Int csum = 0;
  for (const auto& [c, v] : row.terms) csum += c < 0 ? -c : c;
  return width + 1 + static_cast<int>(ceil_log2(csum));
}

Guard synth_guard(const Block& b, const std::vector<int>& regs, int width,
                  Interp interp, const ModeVector& mv, GuardStats* stats) {
  Solver solver;
  Circuit circuit(solver);
  BlockCircuit bc(circuit, b, width, interp);
  std::vector<Lit> base = bc.mode_assumptions(mv);

  Guard g;
  g.regs = regs;
  auto rows = octagon_template(static_cast<int>(regs.size()));
  for (const auto& row : rows) {
    if (interp == Interp::UNSIGNED && row.terms.size() == 1) {
      const BitVec& in = bc.input(regs[static_cast<size_t>(row.terms[0].second)]);
      Int bound = row.terms[0].first > 0
                      ? max_unsigned_input(solver, in, base, stats)
                      : -min_unsigned_input(solver, in, base, stats);
      g.bounds.push_back(bound);
      continue;
    }
    int k = objective_width(width, row);
    std::vector<Circuit::LinTerm> terms;
    for (const auto& [c, v] : row.terms)
      terms.push_back({Int(c), bc.input(regs[static_cast<size_t>(v)]),
                       interp == Interp::SIGNED});
    BitVec obj = circuit.linear(terms, k);
    auto bound = max_linear(solver, obj, base, stats);
    if (!bound)
      throw std::runtime_error("guard synthesis on an infeasible mode vector");
    g.bounds.push_back(*bound);
  }
  return g;
}

std::vector<size_t> guard_display_rows(const Guard& g) {
  auto rows = octagon_template(static_cast<int>(g.regs.size()));
  std::vector<bool> kept(rows.size(), true);
  for (size_t i = 0; i < rows.size(); ++i) {
    Octagon rest(static_cast<int>(g.regs.size()));
    for (size_t j = 0; j < rows.size(); ++j)
      if (kept[j] && j != i) rest.constrain_row(rows[j], g.bounds[j]);
    Octagon closed = rest.closed();
    ExtInt implied = closed.row_bound(rows[i]);
    if (implied <= ExtInt(g.bounds[i])) kept[i] = false;
  }
  std::vector<size_t> out;
  for (size_t i = 0; i < rows.size(); ++i)
    if (kept[i]) out.push_back(i);
  return out;
}

}  // namespace tfs
