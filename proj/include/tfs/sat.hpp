#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace tfs {

// DIMACS-style literals: +v asserts variable v, -v its negation, v >= 1.
using Var = int;
using Lit = int;

enum class SolveStatus { SAT, UNSAT, LIMIT };

struct SolveResult {
  SolveStatus status = SolveStatus::UNSAT;
  std::vector<int8_t> model;  // 1-indexed by var; +1 true, -1 false

  bool sat() const { return status == SolveStatus::SAT; }
  bool value(Var v) const { return model[static_cast<size_t>(v)] > 0; }
  bool value_lit(Lit l) const {
    bool b = value(l > 0 ? l : -l);
    return l > 0 ? b : !b;
  }
};

// Incremental CDCL solver: two-watched-literal propagation, first-UIP
// conflict learning, activity-driven branching with index tie-breaking,
// Luby restarts. Clauses persist across solve calls; per-call constraints
// go in as assumptions. Fully deterministic for a fixed call sequence.
class Solver {
 public:
  Solver();
  ~Solver();
  Solver(const Solver&) = delete;
  Solver& operator=(const Solver&) = delete;

  Var new_var();
  int num_vars() const;

  // Clauses may be added between solve calls. An empty clause (or a
  // conflicting unit) makes the instance permanently unsatisfiable.
  void add_clause(const std::vector<Lit>& lits);
  void add_unit(Lit l) { add_clause({l}); }

  // Negative budget = unlimited. The budget applies per solve call;
  // exhausting it yields LIMIT, which is distinct from UNSAT.
  void set_conflict_budget(int64_t budget);

  SolveResult solve(const std::vector<Lit>& assumptions = {});

  uint64_t solve_calls() const;
  uint64_t conflicts() const;

  // Original (non-learnt) clauses in insertion order, verbatim.
  const std::vector<std::vector<Lit>>& original_clauses() const;

 private:
  struct Impl;
  Impl* impl_;
};

// "p cnf V C" header plus zero-terminated clauses, one per line, in
// insertion order. Stable byte-for-byte for a fixed clause sequence.
std::string export_dimacs(const Solver& s);

struct DimacsFile {
  int num_vars = 0;
  std::vector<std::vector<Lit>> clauses;
};

// Parses DIMACS CNF ('c' comment lines, 'p cnf' header, zero-terminated
// clauses). Throws std::runtime_error on malformed input.
DimacsFile parse_dimacs(const std::string& text);

// Subprocess adapter: exports the session to a temp file, runs
// `command <file>`, and reads a SAT-competition style reply ("s
// SATISFIABLE"/"s UNSATISFIABLE" or bare "SAT"/"UNSAT", model on "v"
// lines or a bare literal line). Throws std::runtime_error when the
// output is unrecognizable.
SolveResult external_solve(const std::string& command, const Solver& s);

}  // namespace tfs
