#include "tfs/sat.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace tfs {

namespace {

inline Lit neg(Lit l) { return -l; }
inline Var var_of(Lit l) { return l > 0 ? l : -l; }
// Literal slot: 2v for +v, 2v+1 for -v.
inline int lidx(Lit l) { return l > 0 ? 2 * l : -2 * l + 1; }

constexpr int8_t KTrue = 1;
constexpr int8_t KFalse = -1;
constexpr int8_t KUndef = 0;

// luby(i) for i >= 1: 1 1 2 1 1 2 4 1 1 2 1 1 2 4 8 ...
uint64_t luby(uint64_t i) {
  uint64_t k = 1;
  while (((uint64_t{1} << k) - 1) < i) ++k;
  while (((uint64_t{1} << k) - 1) != i) {
    i -= (uint64_t{1} << (k - 1)) - 1;
    k = 1;
    while (((uint64_t{1} << k) - 1) < i) ++k;
  }
  return uint64_t{1} << (k - 1);
}

}  // namespace

struct Solver::Impl {
  struct Cls {
    std::vector<Lit> lits;
    bool learnt = false;
  };
  struct Watch {
    int cref;
    Lit blocker;
  };

  int nvars = 0;
  bool ok = true;
  std::vector<Cls> db;
  std::vector<std::vector<Lit>> originals;
  std::vector<std::vector<Watch>> watches;  // by lidx
  std::vector<int8_t> assigns;              // by var
  std::vector<int> level;                   // by var
  std::vector<int> reason;                  // by var, cref or -1
  std::vector<Lit> trail;
  std::vector<int> trail_lim;
  size_t qhead = 0;

  std::vector<double> activity;  // by var
  double var_inc = 1.0;
  static constexpr double kDecay = 1.0 / 0.95;
  std::vector<int> heap;      // max-heap of vars
  std::vector<int> heap_pos;  // by var, -1 if absent
  std::vector<int8_t> saved_phase;  // by var

  std::vector<int8_t> seen;  // analyze scratch, by var

  int64_t budget = -1;
  uint64_t stat_solves = 0;
  uint64_t stat_conflicts = 0;

  int8_t value_lit(Lit l) const {
    int8_t a = assigns[static_cast<size_t>(var_of(l))];
    return l > 0 ? a : static_cast<int8_t>(-a);
  }
  int decision_level() const { return static_cast<int>(trail_lim.size()); }

  // Heap orders by activity, lowest index first on ties.
  bool heap_lt(int x, int y) const {
    if (activity[static_cast<size_t>(x)] != activity[static_cast<size_t>(y)])
      return activity[static_cast<size_t>(x)] > activity[static_cast<size_t>(y)];
    return x < y;
  }
  void heap_up(int i) {
    int v = heap[static_cast<size_t>(i)];
    while (i > 0) {
      int p = (i - 1) / 2;
      if (!heap_lt(v, heap[static_cast<size_t>(p)])) break;
      heap[static_cast<size_t>(i)] = heap[static_cast<size_t>(p)];
      heap_pos[static_cast<size_t>(heap[static_cast<size_t>(i)])] = i;
      i = p;
    }
    heap[static_cast<size_t>(i)] = v;
    heap_pos[static_cast<size_t>(v)] = i;
  }
  void heap_down(int i) {
    int v = heap[static_cast<size_t>(i)];
    int n = static_cast<int>(heap.size());
    while (true) {
      int c = 2 * i + 1;
      if (c >= n) break;
      if (c + 1 < n &&
          heap_lt(heap[static_cast<size_t>(c + 1)], heap[static_cast<size_t>(c)]))
        ++c;
      if (!heap_lt(heap[static_cast<size_t>(c)], v)) break;
      heap[static_cast<size_t>(i)] = heap[static_cast<size_t>(c)];
      heap_pos[static_cast<size_t>(heap[static_cast<size_t>(i)])] = i;
      i = c;
    }
    heap[static_cast<size_t>(i)] = v;
    heap_pos[static_cast<size_t>(v)] = i;
  }
  void heap_insert(int v) {
    if (heap_pos[static_cast<size_t>(v)] >= 0) return;
    heap.push_back(v);
    heap_pos[static_cast<size_t>(v)] = static_cast<int>(heap.size()) - 1;
    heap_up(static_cast<int>(heap.size()) - 1);
  }
  int heap_pop() {
    int v = heap[0];
    heap_pos[static_cast<size_t>(v)] = -1;
    int last = heap.back();
    heap.pop_back();
    if (!heap.empty()) {
      heap[0] = last;
      heap_pos[static_cast<size_t>(last)] = 0;
      heap_down(0);
    }
    return v;
  }
  void bump(Var v) {
    activity[static_cast<size_t>(v)] += var_inc;
    if (activity[static_cast<size_t>(v)] > 1e100) {
      for (auto& a : activity) a *= 1e-100;
      var_inc *= 1e-100;
    }
    int p = heap_pos[static_cast<size_t>(v)];
    if (p >= 0) heap_up(p);
  }

  void attach(int cref) {
    const Cls& c = db[static_cast<size_t>(cref)];
    watches[static_cast<size_t>(lidx(neg(c.lits[0])))].push_back({cref, c.lits[1]});
    watches[static_cast<size_t>(lidx(neg(c.lits[1])))].push_back({cref, c.lits[0]});
  }

  void enqueue(Lit p, int from) {
    Var v = var_of(p);
    assigns[static_cast<size_t>(v)] = p > 0 ? KTrue : KFalse;
    level[static_cast<size_t>(v)] = decision_level();
    reason[static_cast<size_t>(v)] = from;
    trail.push_back(p);
  }

  void cancel_until(int lvl) {
    if (decision_level() <= lvl) return;
    int bound = trail_lim[static_cast<size_t>(lvl)];
    for (int i = static_cast<int>(trail.size()) - 1; i >= bound; --i) {
      Var v = var_of(trail[static_cast<size_t>(i)]);
      saved_phase[static_cast<size_t>(v)] = assigns[static_cast<size_t>(v)];
      assigns[static_cast<size_t>(v)] = KUndef;
      reason[static_cast<size_t>(v)] = -1;
      heap_insert(v);
    }
    trail.resize(static_cast<size_t>(bound));
    trail_lim.resize(static_cast<size_t>(lvl));
    qhead = trail.size();
  }

  // Returns conflicting cref or -1.
  int propagate() {
    while (qhead < trail.size()) {
      Lit p = trail[qhead++];
      auto& ws = watches[static_cast<size_t>(lidx(p))];
      size_t keep = 0;
      size_t i = 0;
      int confl = -1;
      for (; i < ws.size(); ++i) {
        Watch w = ws[i];
        if (value_lit(w.blocker) == KTrue) {
          ws[keep++] = w;
          continue;
        }
        Cls& c = db[static_cast<size_t>(w.cref)];
        Lit false_lit = neg(p);
        if (c.lits[0] == false_lit) std::swap(c.lits[0], c.lits[1]);
        Lit first = c.lits[0];
        if (value_lit(first) == KTrue) {
          ws[keep++] = {w.cref, first};
          continue;
        }
        bool moved = false;
        for (size_t k = 2; k < c.lits.size(); ++k) {
          if (value_lit(c.lits[k]) != KFalse) {
            std::swap(c.lits[1], c.lits[k]);
            watches[static_cast<size_t>(lidx(neg(c.lits[1])))].push_back(
                {w.cref, first});
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[keep++] = {w.cref, first};
        if (value_lit(first) == KFalse) {
          confl = w.cref;
          ++i;
          break;
        }
        enqueue(first, w.cref);
      }
      for (; i < ws.size(); ++i) ws[keep++] = ws[i];
      ws.resize(keep);
      if (confl >= 0) {
        qhead = trail.size();
        return confl;
      }
    }
    return -1;
  }

  // First-UIP learning. Fills learnt (asserting literal first) and
  // returns the backtrack level.
  int analyze(int confl, std::vector<Lit>& learnt) {
    learnt.clear();
    learnt.push_back(0);  // slot for the asserting literal
    int counter = 0;
    Lit p = 0;
    int index = static_cast<int>(trail.size()) - 1;
    int dl = decision_level();
    do {
      const Cls& c = db[static_cast<size_t>(confl)];
      for (size_t j = (p == 0 ? 0 : 1); j < c.lits.size(); ++j) {
        Lit q = c.lits[j];
        Var v = var_of(q);
        if (!seen[static_cast<size_t>(v)] && level[static_cast<size_t>(v)] > 0) {
          seen[static_cast<size_t>(v)] = 1;
          bump(v);
          if (level[static_cast<size_t>(v)] >= dl)
            ++counter;
          else
            learnt.push_back(q);
        }
      }
      while (!seen[static_cast<size_t>(var_of(trail[static_cast<size_t>(index)]))])
        --index;
      p = trail[static_cast<size_t>(index)];
      --index;
      confl = reason[static_cast<size_t>(var_of(p))];
      seen[static_cast<size_t>(var_of(p))] = 0;
      --counter;
    } while (counter > 0);
    learnt[0] = neg(p);

    int bt = 0;
    if (learnt.size() > 1) {
      size_t best = 1;
      for (size_t j = 2; j < learnt.size(); ++j) {
        if (level[static_cast<size_t>(var_of(learnt[j]))] >
            level[static_cast<size_t>(var_of(learnt[best]))])
          best = j;
      }
      std::swap(learnt[1], learnt[best]);
      bt = level[static_cast<size_t>(var_of(learnt[1]))];
    }
    for (Lit q : learnt) seen[static_cast<size_t>(var_of(q))] = 0;
    return bt;
  }

  void add_clause_internal(const std::vector<Lit>& in) {
    if (!ok) return;
    // Root-level simplification; the verbatim clause is already archived.
    std::vector<Lit> c(in);
    std::sort(c.begin(), c.end(),
              [](Lit a, Lit b) { return lidx(a) < lidx(b); });
    std::vector<Lit> out;
    Lit prev = 0;
    for (Lit l : c) {
      if (l == prev) continue;
      if (l == neg(prev) && prev != 0) return;  // tautology
      if (value_lit(l) == KTrue) return;        // satisfied at root
      if (value_lit(l) == KFalse) {
        prev = l;
        continue;
      }
      out.push_back(l);
      prev = l;
    }
    if (out.empty()) {
      ok = false;
      return;
    }
    if (out.size() == 1) {
      enqueue(out[0], -1);
      if (propagate() >= 0) ok = false;
      return;
    }
    db.push_back({std::move(out), false});
    attach(static_cast<int>(db.size()) - 1);
  }

  Lit pick_branch() {
    while (!heap.empty()) {
      int v = heap_pop();
      if (assigns[static_cast<size_t>(v)] == KUndef)
        return saved_phase[static_cast<size_t>(v)] == KTrue ? v : -v;
    }
    return 0;
  }

  SolveResult solve(const std::vector<Lit>& assumptions) {
    ++stat_solves;
    SolveResult res;
    if (!ok) {
      res.status = SolveStatus::UNSAT;
      return res;
    }
    int64_t confl_this_call = 0;
    uint64_t restart_no = 0;
    uint64_t restart_budget = 100 * luby(++restart_no);
    uint64_t confl_since_restart = 0;

    for (;;) {
      int confl = propagate();
      if (confl >= 0) {
        ++stat_conflicts;
        ++confl_this_call;
        ++confl_since_restart;
        if (decision_level() == 0) {
          ok = false;
          res.status = SolveStatus::UNSAT;
          cancel_until(0);
          return res;
        }
        std::vector<Lit> learnt;
        int bt = analyze(confl, learnt);
        cancel_until(bt);
        if (learnt.size() == 1) {
          enqueue(learnt[0], -1);
        } else {
          db.push_back({learnt, true});
          int cref = static_cast<int>(db.size()) - 1;
          attach(cref);
          enqueue(learnt[0], cref);
        }
        var_inc *= kDecay;
        if (budget >= 0 && confl_this_call >= budget) {
          cancel_until(0);
          res.status = SolveStatus::LIMIT;
          return res;
        }
      } else {
        if (confl_since_restart >= restart_budget) {
          confl_since_restart = 0;
          restart_budget = 100 * luby(++restart_no);
          cancel_until(0);
          continue;
        }
        Lit next = 0;
        bool assumption_step = false;
        while (decision_level() < static_cast<int>(assumptions.size())) {
          Lit p = assumptions[static_cast<size_t>(decision_level())];
          int8_t v = value_lit(p);
          if (v == KTrue) {
            trail_lim.push_back(static_cast<int>(trail.size()));
          } else if (v == KFalse) {
            cancel_until(0);
            res.status = SolveStatus::UNSAT;
            return res;
          } else {
            next = p;
            assumption_step = true;
            break;
          }
        }
        if (!assumption_step) {
          next = pick_branch();
          if (next == 0) {
            res.status = SolveStatus::SAT;
            res.model.assign(static_cast<size_t>(nvars) + 1, KFalse);
            for (Var v = 1; v <= nvars; ++v)
              res.model[static_cast<size_t>(v)] = assigns[static_cast<size_t>(v)];
            cancel_until(0);
            return res;
          }
        }
        trail_lim.push_back(static_cast<int>(trail.size()));
        enqueue(next, -1);
      }
    }
  }
};

Solver::Solver() : impl_(new Impl) {
  impl_->watches.resize(2);
  impl_->assigns.resize(1, KUndef);
  impl_->level.resize(1, 0);
  impl_->reason.resize(1, -1);
  impl_->activity.resize(1, 0.0);
  impl_->heap_pos.resize(1, -1);
  impl_->saved_phase.resize(1, KFalse);
  impl_->seen.resize(1, 0);
}

Solver::~Solver() { delete impl_; }

Var Solver::new_var() {
  int v = ++impl_->nvars;
  impl_->watches.resize(2 * static_cast<size_t>(v) + 2);
  impl_->assigns.push_back(KUndef);
  impl_->level.push_back(0);
  impl_->reason.push_back(-1);
  impl_->activity.push_back(0.0);
  impl_->heap_pos.push_back(-1);
  impl_->saved_phase.push_back(KFalse);
  impl_->seen.push_back(0);
  impl_->heap_insert(v);
  return v;
}

int Solver::num_vars() const { return impl_->nvars; }

void Solver::add_clause(const std::vector<Lit>& lits) {
  for (Lit l : lits) {
    if (l == 0 || var_of(l) > impl_->nvars)
      throw std::invalid_argument("literal out of range");
  }
  impl_->originals.push_back(lits);
  impl_->add_clause_internal(lits);
}

void Solver::set_conflict_budget(int64_t budget) { impl_->budget = budget; }

SolveResult Solver::solve(const std::vector<Lit>& assumptions) {
  for (Lit l : assumptions) {
    if (l == 0 || var_of(l) > impl_->nvars)
      throw std::invalid_argument("assumption out of range");
  }
  return impl_->solve(assumptions);
}

uint64_t Solver::solve_calls() const { return impl_->stat_solves; }
uint64_t Solver::conflicts() const { return impl_->stat_conflicts; }

const std::vector<std::vector<Lit>>& Solver::original_clauses() const {
  return impl_->originals;
}

}  // namespace tfs
