#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tfs/sat.hpp"

// Random 3-CNF fuzzing of the solver against a bit-parallel truth table.
// The table packs one assignment per bit: assignment index i sets
// variable v to bit v of i, so a variable's column is either a periodic
// mask (v < 6) or a block pattern over whole words.

namespace satfuzz {

struct FuzzReport {
  uint64_t formulas = 0;
  uint64_t sat_count = 0;
  uint64_t disagreements = 0;
  uint64_t bad_models = 0;
  std::string first_failure;
};

inline uint64_t var_word(int v, uint64_t word_index) {
  static constexpr uint64_t kPeriodic[6] = {
      0xAAAAAAAAAAAAAAAAull, 0xCCCCCCCCCCCCCCCCull, 0xF0F0F0F0F0F0F0F0ull,
      0xFF00FF00FF00FF00ull, 0xFFFF0000FFFF0000ull, 0xFFFFFFFF00000000ull};
  if (v < 6) return kPeriodic[v];
  return (word_index >> (v - 6)) & 1 ? ~0ull : 0ull;
}

inline bool table_sat(const std::vector<std::vector<tfs::Lit>>& clauses,
                      int nvars) {
  int shift = nvars >= 6 ? nvars - 6 : 0;
  uint64_t words = 1ull << shift;
  uint64_t tail = nvars < 6 ? (1ull << (1u << nvars)) - 1 : ~0ull;
  for (uint64_t wi = 0; wi < words; ++wi) {
    uint64_t alive = tail;
    for (const auto& cl : clauses) {
      uint64_t cmask = 0;
      for (tfs::Lit l : cl) {
        uint64_t col = var_word(l > 0 ? l - 1 : -l - 1, wi);
        cmask |= l > 0 ? col : ~col;
      }
      alive &= cmask;
      if (!alive) break;
    }
    if (alive) return true;
  }
  return false;
}

inline bool model_satisfies(const std::vector<std::vector<tfs::Lit>>& clauses,
                            const tfs::SolveResult& r) {
  for (const auto& cl : clauses) {
    bool ok = false;
    for (tfs::Lit l : cl)
      if (r.value_lit(l)) {
        ok = true;
        break;
      }
    if (!ok) return false;
  }
  return true;
}

// Formulas have 1..20 variables and short clauses (1..3 literals), which
// yields a healthy SAT/UNSAT mix. Deterministic for a fixed seed.
inline FuzzReport run_sat_fuzz(uint64_t formulas, uint64_t seed) {
  std::mt19937_64 rng(seed);
  FuzzReport rep;
  for (uint64_t f = 0; f < formulas; ++f) {
    int nvars = 1 + static_cast<int>(rng() % 20);
    int nclauses = 1 + static_cast<int>(rng() % (3 * nvars + 4));
    std::vector<std::vector<tfs::Lit>> clauses;
    tfs::Solver s;
    for (int v = 0; v < nvars; ++v) s.new_var();
    for (int c = 0; c < nclauses; ++c) {
      int len = 1 + static_cast<int>(rng() % 3);
      std::vector<tfs::Lit> cl;
      for (int k = 0; k < len; ++k) {
        int v = 1 + static_cast<int>(rng() % nvars);
        cl.push_back(rng() & 1 ? v : -v);
      }
      clauses.push_back(cl);
      s.add_clause(cl);
    }
    bool expect = table_sat(clauses, nvars);
    tfs::SolveResult r = s.solve();
    ++rep.formulas;
    if (r.sat()) ++rep.sat_count;
    bool bad = false;
    if (r.sat() != expect) {
      ++rep.disagreements;
      bad = true;
    } else if (r.sat() && !model_satisfies(clauses, r)) {
      ++rep.bad_models;
      bad = true;
    }
    if (bad && rep.first_failure.empty()) {
      tfs::Solver dump;
      for (int v = 0; v < nvars; ++v) dump.new_var();
      for (const auto& cl : clauses) dump.add_clause(cl);
      rep.first_failure = "formula " + std::to_string(f) + " expect " +
                          (expect ? "SAT" : "UNSAT") + "\n" +
                          tfs::export_dimacs(dump);
    }
  }
  return rep;
}

}  // namespace satfuzz
