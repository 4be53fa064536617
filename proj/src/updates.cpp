#include "tfs/updates.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <utility>

#include "tfs/encoder.hpp"
#include "tfs/modes.hpp"
#include "tfs/sat.hpp"

namespace tfs {

namespace {

Int abs_int(const Int& v) { return v < 0 ? Int(-v) : v; }

Int gcd_int(const Int& a, const Int& b) {
  return boost::multiprecision::gcd(a, b);
}

// Canonical form: like terms combined, terms ordered by (symbol, index),
// the whole expression reduced by the gcd of coefficients, constant and
// divisor.
void normalize(UpdateExpr& e) {
  std::map<std::pair<int, int>, Int> acc;
  for (const auto& t : e.terms) {
    if (t.coeff == 0) continue;
    acc[{static_cast<int>(t.sym), t.index}] += t.coeff;
  }
  e.terms.clear();
  for (const auto& [key, c] : acc) {
    if (c == 0) continue;
    e.terms.push_back({c, static_cast<Sym>(key.first), key.second});
  }
  if (e.divisor <= 0) throw std::logic_error("update divisor must be positive");
  Int g = e.divisor;
  g = gcd_int(g, abs_int(e.constant));
  for (const auto& t : e.terms) g = gcd_int(g, abs_int(t.coeff));
  if (g > 1) {
    e.divisor /= g;
    e.constant /= g;
    for (auto& t : e.terms) t.coeff /= g;
  }
}

UpdateExpr add_exprs(const UpdateExpr& a, const UpdateExpr& b) {
  Int g = gcd_int(a.divisor, b.divisor);
  Int fa = b.divisor / g;
  Int fb = a.divisor / g;
  UpdateExpr r;
  r.divisor = a.divisor * fa;
  for (const auto& t : a.terms) r.terms.push_back({t.coeff * fa, t.sym, t.index});
  for (const auto& t : b.terms) r.terms.push_back({t.coeff * fb, t.sym, t.index});
  r.constant = a.constant * fa + b.constant * fb;
  normalize(r);
  return r;
}

std::vector<int> row_signs(const TemplateRow& row, int n) {
  std::vector<int> v(static_cast<size_t>(n), 0);
  for (auto [c, var] : row.terms) v[static_cast<size_t>(var)] = c;
  return v;
}

int find_pattern(const std::vector<TemplateRow>& tpl,
                 const std::vector<int>& signs) {
  int n = static_cast<int>(signs.size());
  for (size_t i = 0; i < tpl.size(); ++i)
    if (row_signs(tpl[i], n) == signs) return static_cast<int>(i);
  return -1;
}

// Signed combination of solved outputs over (inputs, monomials).
struct LinForm {
  Int divisor{1};
  std::vector<Int> coeffs;
  Int constant{0};
};

std::optional<LinForm> combine_solved(
    const std::vector<std::optional<SolvedUpdate>>& solved,
    const TemplateRow& row, int ncols) {
  LinForm f;
  f.coeffs.assign(static_cast<size_t>(ncols), Int(0));
  for (auto [s, var] : row.terms) {
    const auto& su = solved[static_cast<size_t>(var)];
    if (!su) return std::nullopt;
    Int g = gcd_int(f.divisor, su->divisor);
    Int ff = su->divisor / g;
    Int fs = f.divisor / g;
    for (auto& c : f.coeffs) c *= ff;
    f.constant *= ff;
    f.divisor *= ff;
    for (size_t j = 0; j < su->coeffs.size(); ++j)
      f.coeffs[j] += Int(s) * fs * su->coeffs[j];
    f.constant += Int(s) * fs * su->constant;
  }
  return f;
}

// Upper bound of a linear form over the input bounds: pair patterns are
// split off greedily first (largest common magnitude, canonical pair
// order), the remainder falls to unary bounds, monomial coefficients pick
// the corner aggregate matching their sign.
UpdateExpr greedy_upper(const LinForm& f, int n,
                        const std::vector<TemplateRow>& tpl) {
  UpdateExpr e;
  e.divisor = f.divisor;
  e.constant = f.constant;
  std::vector<Int> rho(f.coeffs.begin(), f.coeffs.begin() + n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      Int& a = rho[static_cast<size_t>(i)];
      Int& b = rho[static_cast<size_t>(j)];
      if (a == 0 || b == 0) continue;
      Int m = std::min(abs_int(a), abs_int(b));
      int si = a > 0 ? 1 : -1;
      int sj = b > 0 ? 1 : -1;
      std::vector<int> signs(static_cast<size_t>(n), 0);
      signs[static_cast<size_t>(i)] = si;
      signs[static_cast<size_t>(j)] = sj;
      int q = find_pattern(tpl, signs);
      if (q < 0) throw std::logic_error("pair pattern missing from template");
      e.terms.push_back({m, Sym::PATTERN, q});
      a -= Int(si) * m;
      b -= Int(sj) * m;
    }
  }
  for (int i = 0; i < n; ++i) {
    const Int& a = rho[static_cast<size_t>(i)];
    if (a == 0) continue;
    if (a > 0)
      e.terms.push_back({a, Sym::PATTERN, i});
    else
      e.terms.push_back({-a, Sym::PATTERN, n + i});
  }
  for (size_t t = n; t < f.coeffs.size(); ++t) {
    const Int& a = f.coeffs[t];
    if (a == 0) continue;
    int idx = static_cast<int>(t) - n;
    e.terms.push_back({a, a > 0 ? Sym::AGG_MAX : Sym::AGG_MIN, idx});
  }
  normalize(e);
  return e;
}

int lin_width(const std::vector<Circuit::LinTerm>& ts) {
  int wmax = 1;
  Int s(1);
  for (const auto& t : ts) {
    wmax = std::max(wmax, t.vec.width());
    s += abs_int(t.coeff);
  }
  return wmax + 2 + static_cast<int>(ceil_log2(s));
}

}  // namespace

std::vector<std::optional<SolvedUpdate>> solve_updates(const AffineSpace& hull,
                                                       int nregs, int nmono) {
  std::vector<std::optional<SolvedUpdate>> out(static_cast<size_t>(nregs));
  if (hull.empty()) return out;
  if (hull.nvars() != 2 * nregs + nmono)
    throw std::invalid_argument("hull column count mismatch");
  for (int i = 0; i < nregs; ++i) {
    auto sol = solve_for_output(hull, i);
    if (!sol) continue;
    bool mixes_outputs = false;
    for (int j = 0; j < nregs; ++j)
      if (sol->coeffs[static_cast<size_t>(j)] != 0) mixes_outputs = true;
    if (mixes_outputs) continue;  // tied to an undetermined output
    SolvedUpdate su;
    su.divisor = sol->divisor;
    su.coeffs.assign(sol->coeffs.begin() + nregs, sol->coeffs.end());
    su.constant = sol->constant;
    out[static_cast<size_t>(i)] = std::move(su);
  }
  return out;
}

namespace {

// dir > 0: upper bound of the solved expression; dir < 0: upper bound of
// its negation (the row of the negated unary pattern).
UpdateExpr lift_direction(const SolvedUpdate& su, int n, int dir) {
  UpdateExpr e;
  e.divisor = su.divisor;
  e.constant = dir > 0 ? su.constant : Int(-su.constant);
  for (int j = 0; j < n; ++j) {
    Int a = su.coeffs[static_cast<size_t>(j)];
    if (a == 0) continue;
    if (dir < 0) a = -a;
    if (a > 0)
      e.terms.push_back({a, Sym::PATTERN, j});
    else
      e.terms.push_back({-a, Sym::PATTERN, n + j});
  }
  for (size_t t = static_cast<size_t>(n); t < su.coeffs.size(); ++t) {
    Int a = su.coeffs[t];
    if (a == 0) continue;
    if (dir < 0) a = -a;
    int idx = static_cast<int>(t) - n;
    e.terms.push_back({a, a > 0 ? Sym::AGG_MAX : Sym::AGG_MIN, idx});
  }
  normalize(e);
  return e;
}

UpdateRow make_row(int pattern, UpdateExpr e) {
  UpdateRow r;
  r.pattern = pattern;
  r.kind = e.terms.empty() ? RowKind::CONST : RowKind::AFFINE;
  r.expr = std::move(e);
  return r;
}

}  // namespace

std::vector<UpdateRow> lift_interval(
    const std::vector<std::optional<SolvedUpdate>>& solved, int nregs) {
  std::vector<UpdateRow> rows;
  for (int v = 0; v < nregs; ++v) {
    const auto& su = solved[static_cast<size_t>(v)];
    if (!su) continue;
    rows.push_back(make_row(v, lift_direction(*su, nregs, +1)));
    rows.push_back(make_row(nregs + v, lift_direction(*su, nregs, -1)));
  }
  return rows;
}

std::vector<UpdateRow> lift_octagon_medium(
    const std::vector<std::optional<SolvedUpdate>>& solved, int nregs) {
  std::vector<UpdateRow> rows = lift_interval(solved, nregs);
  std::map<int, UpdateExpr> unary;
  for (const auto& r : rows) unary[r.pattern] = r.expr;
  auto tpl = octagon_template(nregs);
  for (size_t p = static_cast<size_t>(2 * nregs); p < tpl.size(); ++p) {
    auto [c1, v1] = tpl[p].terms[0];
    auto [c2, v2] = tpl[p].terms[1];
    int p1 = c1 > 0 ? v1 : nregs + v1;
    int p2 = c2 > 0 ? v2 : nregs + v2;
    auto i1 = unary.find(p1);
    auto i2 = unary.find(p2);
    if (i1 == unary.end() || i2 == unary.end()) continue;
    rows.push_back(make_row(static_cast<int>(p), add_exprs(i1->second, i2->second)));
  }
  std::sort(rows.begin(), rows.end(),
            [](const UpdateRow& a, const UpdateRow& b) { return a.pattern < b.pattern; });
  return rows;
}

std::optional<UpdateExpr> octagon_candidate(
    const std::vector<std::optional<SolvedUpdate>>& solved, int nregs,
    int pattern) {
  auto tpl = octagon_template(nregs);
  const auto& row = tpl[static_cast<size_t>(pattern)];
  size_t ncols = 0;
  for (const auto& su : solved)
    if (su) ncols = su->coeffs.size();
  for (auto [s, var] : row.terms) {
    (void)s;
    if (!solved[static_cast<size_t>(var)]) return std::nullopt;
  }
  auto f = combine_solved(solved, row, static_cast<int>(ncols));
  if (!f) return std::nullopt;
  if (row.terms.size() == 1) return greedy_upper(*f, nregs, tpl);
  // Pair pattern: passthrough when the expression is itself an input
  // pattern, otherwise the sum of the two unary rows.
  if (f->divisor == 1 && f->constant == 0) {
    bool small = true;
    std::vector<int> signs(static_cast<size_t>(nregs), 0);
    for (int j = 0; j < nregs; ++j) {
      const Int& a = f->coeffs[static_cast<size_t>(j)];
      if (a < -1 || a > 1) small = false;
      signs[static_cast<size_t>(j)] = static_cast<int>(a);
    }
    for (size_t t = static_cast<size_t>(nregs); t < f->coeffs.size(); ++t)
      if (f->coeffs[t] != 0) small = false;
    if (small) {
      int q = find_pattern(tpl, signs);
      if (q >= 0) {
        UpdateExpr e;
        e.terms.push_back({Int(1), Sym::PATTERN, q});
        return e;
      }
    }
  }
  TemplateRow r1{{row.terms[0]}};
  TemplateRow r2{{row.terms[1]}};
  auto f1 = combine_solved(solved, r1, static_cast<int>(ncols));
  auto f2 = combine_solved(solved, r2, static_cast<int>(ncols));
  return add_exprs(greedy_upper(*f1, nregs, tpl), greedy_upper(*f2, nregs, tpl));
}

struct UpdateSession::Impl {
  Block block;
  std::vector<int> regs;
  int width;
  Interp interp;
  ModeVector mv;
  std::vector<Monomial> monomials;
  std::vector<std::vector<int>> mono_pos;  // factor positions per monomial

  Solver slv;
  Circuit ckt;
  BlockCircuit bc;
  std::vector<Lit> base;

  int n;
  int nk;
  std::vector<TemplateRow> templates;
  std::vector<BitVec> in_pat, out_pat;
  std::vector<BitVec> mono_vec;

  std::optional<AffineSpace> hull;
  std::optional<std::vector<std::optional<SolvedUpdate>>> solved;

  bool kappa_built = false;
  std::vector<BitVec> dvec;
  Lit kappa = 0;
  bool agg_built = false;
  std::vector<BitVec> agg_max, agg_min;

  std::vector<std::vector<Int>> points;  // sampled in-mode input vectors
  bool points_exhausted = false;

  UpdateStats stats;

  Impl(const Block& b, const std::vector<int>& rs, int w, Interp ip,
       const ModeVector& modes, const std::vector<Monomial>& monos)
      : block(b),
        regs(rs),
        width(w),
        interp(ip),
        mv(modes),
        monomials(monos),
        ckt(slv),
        bc(ckt, b, w, ip),
        n(static_cast<int>(rs.size())) {
    if (regs.empty()) throw std::invalid_argument("no tracked registers");
    base = bc.mode_assumptions(mv);
    templates = octagon_template(n);
    nk = static_cast<int>(templates.size());
    const bool sgn = interp == Interp::SIGNED;
    for (const auto& row : templates) {
      std::vector<Circuit::LinTerm> ti, to;
      for (auto [c, var] : row.terms) {
        int r = regs[static_cast<size_t>(var)];
        ti.push_back({Int(c), bc.input(r), sgn});
        to.push_back({Int(c), bc.output(r), sgn});
      }
      in_pat.push_back(ckt.linear(ti, width + 2));
      out_pat.push_back(ckt.linear(to, width + 2));
    }
    for (const auto& mono : monomials) {
      if (mono.regs.empty()) throw std::invalid_argument("empty monomial");
      std::vector<int> pos;
      for (int r : mono.regs) {
        auto it = std::find(regs.begin(), regs.end(), r);
        if (it == regs.end())
          throw std::invalid_argument("monomial register not tracked");
        pos.push_back(static_cast<int>(it - regs.begin()));
      }
      mono_pos.push_back(pos);
      int g = static_cast<int>(mono.regs.size());
      int aw = g * width + 2;
      auto ext = [&](const BitVec& v) {
        return sgn ? ckt.sext(v, aw) : ckt.zext(v, aw);
      };
      BitVec acc = ext(bc.input(mono.regs[0]));
      for (size_t i = 1; i < mono.regs.size(); ++i)
        acc = ckt.mul(acc, ext(bc.input(mono.regs[i])));
      mono_vec.push_back(acc);
    }
  }

  bool is_signed() const { return interp == Interp::SIGNED; }
  int nmono() const { return static_cast<int>(monomials.size()); }

  const BitVec& hull_col_vec(int col) const {
    if (col < n) return bc.output(regs[static_cast<size_t>(col)]);
    if (col < 2 * n) return bc.input(regs[static_cast<size_t>(col - n)]);
    return mono_vec[static_cast<size_t>(col - 2 * n)];
  }

  const AffineSpace& hull_get() {
    if (hull) return *hull;
    const int m = nmono();
    const int cols = 2 * n + m;
    AffineSpace sp(cols);
    Lit act = ckt.fresh();
    const bool sgn = is_signed();
    for (int iter = 0; iter <= cols + 2; ++iter) {
      auto assumps = base;
      assumps.push_back(act);
      auto res = slv.solve(assumps);
      ++stats.affine_calls;
      if (res.status == SolveStatus::LIMIT)
        throw std::runtime_error("conflict budget exhausted in hull sampling");
      if (!res.sat()) {
        hull = std::move(sp);
        return *hull;
      }
      std::vector<Int> pt;
      for (int r : regs) pt.push_back(Circuit::vec_value(bc.output(r), res, sgn));
      std::vector<Int> invals;
      for (int r : regs) invals.push_back(Circuit::vec_value(bc.input(r), res, sgn));
      for (const Int& v : invals) pt.push_back(v);
      for (const auto& pos : mono_pos) {
        Int prod(1);
        for (int ppos : pos) prod *= invals[static_cast<size_t>(ppos)];
        pt.push_back(prod);
      }
      sp.add_point(pt);
      // Next model must violate the grown hull.
      std::vector<Lit> clause{-act};
      for (const auto& row : sp.constraints()) {
        std::vector<Circuit::LinTerm> ts;
        for (int c = 0; c < cols; ++c) {
          const Int& a = row.coeffs[static_cast<size_t>(c)];
          if (a == 0) continue;
          ts.push_back({a, hull_col_vec(c), c >= 2 * n ? true : sgn});
        }
        BitVec lv = ckt.linear(ts, lin_width(ts));
        clause.push_back(-ckt.eq_const(lv, row.rhs));
      }
      slv.add_clause(clause);
    }
    throw std::logic_error("hull sampling failed to converge");
  }

  const std::vector<std::optional<SolvedUpdate>>& solved_get() {
    if (!solved) solved = solve_updates(hull_get(), n, nmono());
    return *solved;
  }

  void kappa_build() {
    if (kappa_built) return;
    std::vector<Lit> les;
    for (int k = 0; k < nk; ++k) {
      dvec.push_back(ckt.fresh_vec(width + 2));
      les.push_back(ckt.sle(in_pat[static_cast<size_t>(k)],
                            dvec[static_cast<size_t>(k)]));
    }
    kappa = ckt.land(les);
    kappa_built = true;
  }

  BitVec vmax(const BitVec& a, const BitVec& b) {
    Lit le = ckt.sle(a, b);
    BitVec r;
    for (int i = 0; i < a.width(); ++i)
      r.bits.push_back(ckt.ite(le, b.bits[static_cast<size_t>(i)],
                               a.bits[static_cast<size_t>(i)]));
    return r;
  }

  BitVec vmin(const BitVec& a, const BitVec& b) {
    Lit le = ckt.sle(a, b);
    BitVec r;
    for (int i = 0; i < a.width(); ++i)
      r.bits.push_back(ckt.ite(le, a.bits[static_cast<size_t>(i)],
                               b.bits[static_cast<size_t>(i)]));
    return r;
  }

  void agg_build() {
    if (agg_built) return;
    kappa_build();
    for (const auto& pos : mono_pos) {
      int g = static_cast<int>(pos.size());
      int aw = g * (width + 2) + 2;
      std::vector<BitVec> lo, hi;
      for (int p : pos) {
        hi.push_back(ckt.sext(dvec[static_cast<size_t>(p)], aw));
        lo.push_back(
            ckt.negate(ckt.sext(dvec[static_cast<size_t>(n + p)], aw)));
      }
      std::optional<BitVec> mx, mn;
      for (int mask = 0; mask < (1 << g); ++mask) {
        BitVec acc = (mask & 1) ? hi[0] : lo[0];
        for (int i = 1; i < g; ++i)
          acc = ckt.mul(acc, (mask >> i & 1) ? hi[static_cast<size_t>(i)]
                                             : lo[static_cast<size_t>(i)]);
        mx = mx ? vmax(*mx, acc) : acc;
        mn = mn ? vmin(*mn, acc) : acc;
      }
      agg_max.push_back(*mx);
      agg_min.push_back(*mn);
    }
    agg_built = true;
  }

  // Corner aggregates of the monomials under concrete pattern bounds.
  std::pair<Int, Int> corner_agg(size_t t, const std::vector<Int>& dvals) const {
    const auto& pos = mono_pos[t];
    int g = static_cast<int>(pos.size());
    Int mx, mn;
    for (int mask = 0; mask < (1 << g); ++mask) {
      Int prod(1);
      for (int i = 0; i < g; ++i) {
        int p = pos[static_cast<size_t>(i)];
        prod *= (mask >> i & 1) ? dvals[static_cast<size_t>(p)]
                                : Int(-dvals[static_cast<size_t>(n + p)]);
      }
      if (mask == 0 || prod > mx) mx = prod;
      if (mask == 0 || prod < mn) mn = prod;
    }
    return {mx, mn};
  }

  std::vector<Int> pattern_values(const std::vector<Int>& x) const {
    std::vector<Int> d;
    for (const auto& row : templates) {
      Int v(0);
      for (auto [c, var] : row.terms) v += Int(c) * x[static_cast<size_t>(var)];
      d.push_back(v);
    }
    return d;
  }

  uint64_t to_raw(const Int& v) const {
    Int masked = v & (pow2(static_cast<unsigned>(width)) - 1);
    return masked.convert_to<uint64_t>();
  }

  // Greatest value of an output pattern over the singleton input x within
  // the mode (both carry-ins when the block reads an undriven carry).
  Int exec_mode_max(const std::vector<Int>& x, int pattern) const {
    MachineState st{};
    st.regs.fill(0);
    for (size_t i = 0; i < regs.size(); ++i)
      st.regs[static_cast<size_t>(regs[i])] = to_raw(x[i]);
    std::optional<Int> best;
    int carries = carry_in_free(block) ? 2 : 1;
    for (int c = 0; c < carries; ++c) {
      st.carry = c;
      auto er = execute_concrete(block, static_cast<unsigned>(width), interp, st);
      if (er.modes != mv) continue;
      Int v(0);
      for (auto [cf, var] : templates[static_cast<size_t>(pattern)].terms)
        v += Int(cf) * reg_value(er.out.regs[static_cast<size_t>(
                                     regs[static_cast<size_t>(var)])],
                                 static_cast<unsigned>(width), interp);
      if (!best || v > *best) best = v;
    }
    if (!best) throw std::logic_error("sampled point fell outside its mode");
    return *best;
  }

  void sample_points(size_t want) {
    const bool sgn = is_signed();
    size_t attempts = 0;
    while (points.size() < want && !points_exhausted && attempts < want + 2) {
      ++attempts;
      auto assumps = base;
      for (const auto& p : points) {
        std::vector<Lit> eqs;
        for (size_t i = 0; i < regs.size(); ++i)
          eqs.push_back(ckt.eq_const(bc.input(regs[i]), p[i]));
        assumps.push_back(-ckt.land(eqs));
      }
      auto res = slv.solve(assumps);
      ++stats.row_calls;
      if (!res.sat()) {
        points_exhausted = true;
        break;
      }
      std::vector<Int> x;
      for (int r : regs) x.push_back(Circuit::vec_value(bc.input(r), res, sgn));
      points.push_back(std::move(x));
    }
  }

  Int bound_const(int pattern) {
    GuardStats gs;
    auto r = max_linear(slv, out_pat[static_cast<size_t>(pattern)], base, &gs);
    stats.row_calls += gs.solver_calls;
    if (!r) throw std::logic_error("mode region empty in bound query");
    return *r;
  }

  bool pattern_live(int k) const {
    for (auto [c, var] : templates[static_cast<size_t>(k)].terms) {
      (void)c;
      int r = regs[static_cast<size_t>(var)];
      if (!std::binary_search(block.live_in.begin(), block.live_in.end(), r))
        return false;
    }
    return true;
  }

  UpdateRow relational_row(int pattern) {
    UpdateRow row;
    row.pattern = pattern;
    row.kind = RowKind::MINEXPR;
    const bool sgn = is_signed();
    for (int k = 0; k < nk; ++k) {
      if (!pattern_live(k)) continue;
      std::vector<Circuit::LinTerm> ts;
      for (auto [c, var] : templates[static_cast<size_t>(pattern)].terms)
        ts.push_back({Int(c), bc.output(regs[static_cast<size_t>(var)]), sgn});
      for (auto [c, var] : templates[static_cast<size_t>(k)].terms)
        ts.push_back({Int(-c), bc.input(regs[static_cast<size_t>(var)]), sgn});
      BitVec obj = ckt.linear(ts, width + 3);
      GuardStats gs;
      auto c = max_linear(slv, obj, base, &gs);
      stats.row_calls += gs.solver_calls;
      if (!c) throw std::logic_error("mode region empty in relational query");
      UpdateExpr e;
      e.terms.push_back({Int(1), Sym::PATTERN, k});
      e.constant = *c;
      row.choices.push_back(std::move(e));
    }
    UpdateExpr cst;
    cst.constant = bound_const(pattern);
    row.choices.push_back(std::move(cst));
    return row;
  }

  void seed(AffineSpace& sp, const std::vector<Int>& dvals, const Int& mval) {
    std::vector<Int> pt;
    pt.push_back(mval);
    for (const Int& d : dvals) pt.push_back(d);
    for (size_t t = 0; t < monomials.size(); ++t) {
      auto [mx, mn] = corner_agg(t, dvals);
      pt.push_back(mx);
      pt.push_back(mn);
    }
    sp.add_point(pt);
  }

  std::optional<UpdateRow> exact_row(int pattern) {
    auto cand = octagon_candidate(solved_get(), n, pattern);
    if (!cand) return std::nullopt;
    for (const auto& t : cand->terms)
      if (t.sym != Sym::PATTERN) return std::nullopt;
    kappa_build();
    const int m = nmono();
    if (m > 0) agg_build();
    const int cols = 1 + nk + 2 * m;
    AffineSpace sp(cols);
    sample_points(static_cast<size_t>(n) + 1);
    if (points.empty()) return std::nullopt;
    // Maximal models computed without search: a fully tight bound vector
    // admits only its witness point, and bumping one non-participating
    // bound leaves the participating ones capping the objective.
    std::set<int> parts;
    for (const auto& t : cand->terms) parts.insert(t.index);
    for (const auto& x : points) seed(sp, pattern_values(x), exec_mode_max(x, pattern));
    const auto d0 = pattern_values(points[0]);
    const Int m0 = exec_mode_max(points[0], pattern);
    for (int q = 0; q < nk; ++q) {
      if (parts.count(q)) continue;
      auto dv = d0;
      dv[static_cast<size_t>(q)] += 1;
      seed(sp, dv, m0);
    }
    for (int iter = 0; iter <= cols + 2; ++iter) {
      auto sol = solve_for_output(sp, 0);
      if (!sol) return std::nullopt;
      std::vector<Circuit::LinTerm> ts;
      ts.push_back({sol->divisor, out_pat[static_cast<size_t>(pattern)], true});
      for (int k = 0; k < nk; ++k) {
        const Int& c = sol->coeffs[static_cast<size_t>(1 + k)];
        if (c != 0) ts.push_back({-c, dvec[static_cast<size_t>(k)], true});
      }
      for (int t = 0; t < m; ++t) {
        const Int& cx = sol->coeffs[static_cast<size_t>(1 + nk + 2 * t)];
        const Int& cn = sol->coeffs[static_cast<size_t>(1 + nk + 2 * t + 1)];
        if (cx != 0) ts.push_back({-cx, agg_max[static_cast<size_t>(t)], true});
        if (cn != 0) ts.push_back({-cn, agg_min[static_cast<size_t>(t)], true});
      }
      BitVec lv = ckt.linear(ts, lin_width(ts));
      Lit strict = -ckt.sle_const(lv, sol->constant);
      auto assumps = base;
      assumps.push_back(kappa);
      assumps.push_back(strict);
      auto res = slv.solve(assumps);
      ++stats.row_calls;
      if (!res.sat()) {
        UpdateExpr e;
        e.divisor = sol->divisor;
        for (int k = 0; k < nk; ++k) {
          const Int& c = sol->coeffs[static_cast<size_t>(1 + k)];
          if (c != 0) e.terms.push_back({c, Sym::PATTERN, k});
        }
        for (int t = 0; t < m; ++t) {
          const Int& cx = sol->coeffs[static_cast<size_t>(1 + nk + 2 * t)];
          const Int& cn = sol->coeffs[static_cast<size_t>(1 + nk + 2 * t + 1)];
          if (cx != 0) e.terms.push_back({cx, Sym::AGG_MAX, t});
          if (cn != 0) e.terms.push_back({cn, Sym::AGG_MIN, t});
        }
        e.constant = sol->constant;
        normalize(e);
        return make_row(pattern, std::move(e));
      }
      std::vector<Int> dvals;
      for (int k = 0; k < nk; ++k)
        dvals.push_back(
            Circuit::vec_value(dvec[static_cast<size_t>(k)], res, true));
      auto pinned = base;
      pinned.push_back(kappa);
      for (int k = 0; k < nk; ++k)
        Circuit::pin_const(dvec[static_cast<size_t>(k)],
                           dvals[static_cast<size_t>(k)], pinned);
      GuardStats gs;
      auto mx = max_linear(slv, out_pat[static_cast<size_t>(pattern)], pinned, &gs);
      stats.row_calls += gs.solver_calls;
      if (!mx) throw std::logic_error("pinned bound region lost its witness");
      seed(sp, dvals, *mx);
    }
    return std::nullopt;
  }

  bool verify_row(int pattern, const UpdateExpr& e) {
    kappa_build();
    bool aggs = false;
    for (const auto& t : e.terms)
      if (t.sym != Sym::PATTERN) aggs = true;
    if (aggs) agg_build();
    std::vector<Circuit::LinTerm> ts;
    ts.push_back({e.divisor, out_pat[static_cast<size_t>(pattern)], true});
    for (const auto& t : e.terms) {
      const BitVec& v = t.sym == Sym::PATTERN
                            ? dvec[static_cast<size_t>(t.index)]
                            : (t.sym == Sym::AGG_MAX
                                   ? agg_max[static_cast<size_t>(t.index)]
                                   : agg_min[static_cast<size_t>(t.index)]);
      ts.push_back({-t.coeff, v, true});
    }
    BitVec lv = ckt.linear(ts, lin_width(ts));
    Lit strict = -ckt.sle_const(lv, e.constant);
    auto assumps = base;
    assumps.push_back(kappa);
    assumps.push_back(strict);
    auto res = slv.solve(assumps);
    ++stats.row_calls;
    return !res.sat();
  }
};

UpdateSession::UpdateSession(const Block& b, const std::vector<int>& regs,
                             int width, Interp interp, const ModeVector& mv,
                             const std::vector<Monomial>& monomials)
    : impl_(std::make_unique<Impl>(b, regs, width, interp, mv, monomials)) {}

UpdateSession::~UpdateSession() = default;

const AffineSpace& UpdateSession::hull() { return impl_->hull_get(); }

const std::vector<std::optional<SolvedUpdate>>& UpdateSession::solved() {
  return impl_->solved_get();
}

Int UpdateSession::bound_const(int pattern) {
  return impl_->bound_const(pattern);
}

UpdateRow UpdateSession::relational_row(int pattern) {
  return impl_->relational_row(pattern);
}

std::optional<UpdateRow> UpdateSession::exact_row(int pattern) {
  return impl_->exact_row(pattern);
}

bool UpdateSession::verify_row(int pattern, const UpdateExpr& e) {
  return impl_->verify_row(pattern, e);
}

std::vector<UpdateRow> UpdateSession::interval_rows() {
  return lift_interval(impl_->solved_get(), impl_->n);
}

std::vector<UpdateRow> UpdateSession::medium_rows() {
  return lift_octagon_medium(impl_->solved_get(), impl_->n);
}

std::vector<UpdateRow> UpdateSession::bounds_rows() {
  std::vector<UpdateRow> rows;
  for (int p = 0; p < impl_->nk; ++p) {
    UpdateExpr e;
    e.constant = impl_->bound_const(p);
    rows.push_back(make_row(p, std::move(e)));
  }
  return rows;
}

std::vector<UpdateRow> UpdateSession::octagon_rows() {
  std::vector<UpdateRow> rows;
  for (int p = 0; p < impl_->nk; ++p) {
    auto cand = octagon_candidate(impl_->solved_get(), impl_->n, p);
    if (cand) {
      bool aggs = false;
      for (const auto& t : cand->terms)
        if (t.sym != Sym::PATTERN) aggs = true;
      if (!aggs) {
        auto r = impl_->exact_row(p);
        if (r) {
          rows.push_back(std::move(*r));
          continue;
        }
      } else if (impl_->verify_row(p, *cand)) {
        rows.push_back(make_row(p, std::move(*cand)));
        continue;
      }
    }
    rows.push_back(impl_->relational_row(p));
  }
  return rows;
}

const UpdateStats& UpdateSession::stats() const { return impl_->stats; }

TransferFunction synthesize(const Block& b, const SynthConfig& cfg) {
  TransferFunction tf;
  tf.block = b;
  tf.width = cfg.width;
  tf.interp = cfg.interp;
  tf.domain = cfg.domain;
  tf.monomials = cfg.monomials;
  tf.regs = cfg.regs.empty() ? b.live_in : cfg.regs;
  std::sort(tf.regs.begin(), tf.regs.end());
  tf.regs.erase(std::unique(tf.regs.begin(), tf.regs.end()), tf.regs.end());
  if (tf.regs.empty()) throw std::invalid_argument("no tracked registers");
  for (int r : tf.regs)
    if (!std::binary_search(b.universe.begin(), b.universe.end(), r))
      throw std::invalid_argument("tracked register not in block");

  ModeStats ms;
  auto modes = enumerate_modes(b, cfg.width, cfg.interp, &ms);
  tf.stats.mode_calls = ms.solver_calls;

  const int n = static_cast<int>(tf.regs.size());
  for (const auto& mv : modes) {
    GuardStats gs;
    Guard guard = synth_guard(b, tf.regs, cfg.width, cfg.interp, mv, &gs);
    tf.stats.guard_calls += gs.solver_calls;
    UpdateSession session(b, tf.regs, cfg.width, cfg.interp, mv, cfg.monomials);
    std::vector<UpdateRow> rows;
    switch (cfg.strategy) {
      case Strategy::EXACT:
        rows = cfg.domain == Domain::OCTAGON ? session.octagon_rows()
                                             : session.interval_rows();
        break;
      case Strategy::MEDIUM:
        rows = cfg.domain == Domain::OCTAGON ? session.medium_rows()
                                             : session.interval_rows();
        break;
      case Strategy::BOUNDS:
        rows = session.bounds_rows();
        if (cfg.domain == Domain::INTERVAL) {
          std::vector<UpdateRow> unary;
          for (auto& r : rows)
            if (r.pattern < 2 * n) unary.push_back(std::move(r));
          rows = std::move(unary);
        }
        break;
    }
    tf.stats.affine_calls += session.stats().affine_calls;
    tf.stats.update_calls += session.stats().row_calls;
    tf.pairs.push_back({mv, std::move(guard), std::move(rows)});
  }
  return tf;
}

}  // namespace tfs
