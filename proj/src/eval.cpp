#include "tfs/eval.hpp"

#include <algorithm>
#include <stdexcept>

namespace tfs {

ExtInt eval_expr(const UpdateExpr& e, const std::vector<ExtInt>& bounds,
                 const std::vector<std::pair<ExtInt, ExtInt>>& aggs) {
  Int num(0);
  for (const auto& t : e.terms) {
    const ExtInt* v = nullptr;
    switch (t.sym) {
      case Sym::PATTERN:
        v = &bounds[static_cast<size_t>(t.index)];
        break;
      case Sym::AGG_MAX:
        v = &aggs[static_cast<size_t>(t.index)].first;
        break;
      case Sym::AGG_MIN:
        v = &aggs[static_cast<size_t>(t.index)].second;
        break;
    }
    if (!v->finite()) return ExtInt::plus_inf();
    num += t.coeff * v->value;
  }
  num += e.constant;
  return ExtInt(floor_div(num, e.divisor));
}

namespace {

ExtInt eval_row(const UpdateRow& r, const std::vector<ExtInt>& bounds,
                const std::vector<std::pair<ExtInt, ExtInt>>& aggs) {
  if (r.kind != RowKind::MINEXPR) return eval_expr(r.expr, bounds, aggs);
  ExtInt best = ExtInt::plus_inf();
  for (const auto& e : r.choices) best = min(best, eval_expr(e, bounds, aggs));
  return best;
}

Int pattern_repr_max(const TemplateRow& row, int w, Interp interp) {
  Int s(0);
  for (auto [c, v] : row.terms) {
    (void)v;
    if (interp == Interp::SIGNED)
      s += c > 0 ? pow2(static_cast<unsigned>(w - 1)) - 1
                 : pow2(static_cast<unsigned>(w - 1));
    else
      s += c > 0 ? pow2(static_cast<unsigned>(w)) - 1 : Int(0);
  }
  return s;
}

}  // namespace

ApplyResult apply_pair(const TransferFunction& tf, size_t pair_idx,
                       const Octagon& in) {
  const int n = static_cast<int>(tf.regs.size());
  if (in.nvars() != n)
    throw std::invalid_argument("state has wrong variable count");
  const auto& pair = tf.pairs[pair_idx];
  Octagon met = Octagon::meet(in, pair.guard.octagon());
  if (met.is_bottom()) return {false, Octagon::bottom(n)};

  auto tpl = octagon_template(n);
  std::vector<ExtInt> bounds;
  for (const auto& row : tpl) bounds.push_back(met.row_bound(row));

  std::vector<std::pair<ExtInt, ExtInt>> aggs;
  for (const auto& mono : tf.monomials) {
    std::vector<std::pair<Int, Int>> rng;
    bool inf = false;
    for (int r : mono.regs) {
      auto it = std::find(tf.regs.begin(), tf.regs.end(), r);
      if (it == tf.regs.end())
        throw std::invalid_argument("monomial register not tracked");
      int v = static_cast<int>(it - tf.regs.begin());
      ExtInt lo = met.lower(v), hi = met.upper(v);
      if (!lo.finite() || !hi.finite()) {
        inf = true;
        break;
      }
      rng.push_back({lo.value, hi.value});
    }
    if (inf) {
      aggs.push_back({ExtInt::plus_inf(), ExtInt::minus_inf()});
      continue;
    }
    int g = static_cast<int>(rng.size());
    Int mx, mn;
    for (int mask = 0; mask < (1 << g); ++mask) {
      Int prod(1);
      for (int i = 0; i < g; ++i)
        prod *= (mask >> i & 1) ? rng[static_cast<size_t>(i)].second
                                : rng[static_cast<size_t>(i)].first;
      if (mask == 0 || prod > mx) mx = prod;
      if (mask == 0 || prod < mn) mn = prod;
    }
    aggs.push_back({ExtInt(mx), ExtInt(mn)});
  }

  Octagon out(n);
  for (size_t p = 0; p < tpl.size(); ++p) {
    ExtInt b = ExtInt::plus_inf();
    for (const auto& row : pair.rows)
      if (row.pattern == static_cast<int>(p))
        b = min(b, eval_row(row, bounds, aggs));
    if (!b.finite()) continue;
    Int clamped = std::min(b.value, pattern_repr_max(tpl[p], tf.width, tf.interp));
    out.constrain_row(tpl[p], clamped);
  }
  return {true, out.closed()};
}

Octagon apply_tf(const TransferFunction& tf, const Octagon& in) {
  const int n = static_cast<int>(tf.regs.size());
  Octagon acc = Octagon::bottom(n);
  for (size_t i = 0; i < tf.pairs.size(); ++i) {
    auto r = apply_pair(tf, i, in);
    if (r.applicable) acc = Octagon::join(acc, r.out);
  }
  return acc;
}

}  // namespace tfs
