#include "tfs/octagon.hpp"

#include <stdexcept>

namespace tfs {

std::vector<TemplateRow> octagon_template(int nvars) {
  std::vector<TemplateRow> rows;
  for (int i = 0; i < nvars; ++i) rows.push_back({{{+1, i}}});
  for (int i = 0; i < nvars; ++i) rows.push_back({{{-1, i}}});
  for (int i = 0; i < nvars; ++i) {
    for (int j = i + 1; j < nvars; ++j) {
      rows.push_back({{{+1, i}, {+1, j}}});
      rows.push_back({{{-1, i}, {-1, j}}});
      rows.push_back({{{-1, i}, {+1, j}}});
      rows.push_back({{{+1, i}, {-1, j}}});
    }
  }
  return rows;
}

namespace {

// Node for the +x_v (s=+1) or -x_v (s=-1) copy of a variable.
inline int node(int s, int v) { return 2 * v + (s < 0 ? 1 : 0); }

inline ExtInt half_floor(const ExtInt& e) {
  if (!e.finite()) return e;
  return ExtInt(floor_div(e.value, 2));
}

}  // namespace

Octagon::Octagon(int nvars) : n_(nvars) {
  m_.assign(static_cast<size_t>(2 * n_),
            std::vector<ExtInt>(static_cast<size_t>(2 * n_), ExtInt::plus_inf()));
  for (int i = 0; i < 2 * n_; ++i)
    m_[static_cast<size_t>(i)][static_cast<size_t>(i)] = ExtInt(Int(0));
}

Octagon Octagon::bottom(int nvars) {
  Octagon o(nvars);
  o.bottom_ = true;
  return o;
}

void Octagon::set_edge(int i, int j, const ExtInt& c) {
  auto& a = m_[static_cast<size_t>(i)][static_cast<size_t>(j)];
  a = min(a, c);
  auto& b = m_[static_cast<size_t>(j ^ 1)][static_cast<size_t>(i ^ 1)];
  b = min(b, c);
}

void Octagon::constrain_single(int s, int v, const Int& c) {
  int i = node(s, v);
  set_edge(i, i ^ 1, ExtInt(2 * c));
}

void Octagon::constrain_pair(int s1, int v1, int s2, int v2, const Int& c) {
  if (v1 == v2) throw std::logic_error("pair constraint needs two variables");
  set_edge(node(s1, v1), node(-s2, v2), ExtInt(c));
}

void Octagon::constrain_row(const TemplateRow& row, const Int& c) {
  if (row.terms.size() == 1) {
    constrain_single(row.terms[0].first, row.terms[0].second, c);
  } else if (row.terms.size() == 2) {
    constrain_pair(row.terms[0].first, row.terms[0].second, row.terms[1].first,
                   row.terms[1].second, c);
  } else {
    throw std::logic_error("template rows have one or two terms");
  }
}

Octagon Octagon::closed() const {
  if (bottom_) return *this;
  Octagon o = *this;
  int dim = 2 * n_;
  auto& m = o.m_;
  for (int k = 0; k < dim; ++k) {
    for (int i = 0; i < dim; ++i) {
      const ExtInt& ik = m[static_cast<size_t>(i)][static_cast<size_t>(k)];
      if (ik.is_plus_inf()) continue;
      for (int j = 0; j < dim; ++j) {
        const ExtInt& kj = m[static_cast<size_t>(k)][static_cast<size_t>(j)];
        if (kj.is_plus_inf()) continue;
        ExtInt via = ik + kj;
        auto& e = m[static_cast<size_t>(i)][static_cast<size_t>(j)];
        if (via < e) e = via;
      }
    }
  }
  for (int i = 0; i < dim; ++i) {
    if (m[static_cast<size_t>(i)][static_cast<size_t>(i)] < ExtInt(Int(0)))
      return bottom(n_);
    m[static_cast<size_t>(i)][static_cast<size_t>(i)] = ExtInt(Int(0));
  }
  // Integer tightening: a bound on 2x must be even.
  for (int i = 0; i < dim; ++i) {
    auto& e = m[static_cast<size_t>(i)][static_cast<size_t>(i ^ 1)];
    if (e.finite()) e = ExtInt(2 * floor_div(e.value, 2));
  }
  for (int i = 0; i < dim; ++i) {
    const ExtInt& a = m[static_cast<size_t>(i)][static_cast<size_t>(i ^ 1)];
    const ExtInt& b = m[static_cast<size_t>(i ^ 1)][static_cast<size_t>(i)];
    if (a.finite() && b.finite() && a.value + b.value < 0) return bottom(n_);
  }
  for (int i = 0; i < dim; ++i) {
    for (int j = 0; j < dim; ++j) {
      if (i == j) continue;
      ExtInt cand = half_floor(m[static_cast<size_t>(i)][static_cast<size_t>(i ^ 1)]) +
                    half_floor(m[static_cast<size_t>(j ^ 1)][static_cast<size_t>(j)]);
      auto& e = m[static_cast<size_t>(i)][static_cast<size_t>(j)];
      if (cand < e) e = cand;
    }
  }
  return o;
}

ExtInt Octagon::row_bound(const TemplateRow& row) const {
  if (bottom_) return ExtInt::minus_inf();
  if (row.terms.size() == 1) {
    int i = node(row.terms[0].first, row.terms[0].second);
    return half_floor(m_[static_cast<size_t>(i)][static_cast<size_t>(i ^ 1)]);
  }
  if (row.terms.size() == 2) {
    int a = node(row.terms[0].first, row.terms[0].second);
    int b = node(-row.terms[1].first, row.terms[1].second);
    return m_[static_cast<size_t>(a)][static_cast<size_t>(b)];
  }
  throw std::logic_error("template rows have one or two terms");
}

ExtInt Octagon::upper(int v) const { return row_bound({{{+1, v}}}); }

ExtInt Octagon::lower(int v) const {
  ExtInt neg = row_bound({{{-1, v}}});
  if (!neg.finite()) return neg.is_minus_inf() ? ExtInt::plus_inf()
                                               : ExtInt::minus_inf();
  return ExtInt(-neg.value);
}

Octagon Octagon::join(const Octagon& a, const Octagon& b) {
  if (a.n_ != b.n_) throw std::logic_error("octagon dimension mismatch");
  Octagon ca = a.closed(), cb = b.closed();
  if (ca.bottom_) return cb;
  if (cb.bottom_) return ca;
  Octagon o = ca;
  for (int i = 0; i < 2 * o.n_; ++i)
    for (int j = 0; j < 2 * o.n_; ++j)
      o.m_[static_cast<size_t>(i)][static_cast<size_t>(j)] =
          max(ca.m_[static_cast<size_t>(i)][static_cast<size_t>(j)],
              cb.m_[static_cast<size_t>(i)][static_cast<size_t>(j)]);
  return o;
}

Octagon Octagon::meet(const Octagon& a, const Octagon& b) {
  if (a.n_ != b.n_) throw std::logic_error("octagon dimension mismatch");
  if (a.bottom_ || b.bottom_) return bottom(a.n_);
  Octagon o = a;
  for (int i = 0; i < 2 * o.n_; ++i)
    for (int j = 0; j < 2 * o.n_; ++j)
      o.m_[static_cast<size_t>(i)][static_cast<size_t>(j)] =
          min(a.m_[static_cast<size_t>(i)][static_cast<size_t>(j)],
              b.m_[static_cast<size_t>(i)][static_cast<size_t>(j)]);
  return o.closed();
}

bool Octagon::equal(const Octagon& a, const Octagon& b) {
  if (a.n_ != b.n_) return false;
  Octagon ca = a.closed(), cb = b.closed();
  if (ca.bottom_ || cb.bottom_) return ca.bottom_ == cb.bottom_;
  for (int i = 0; i < 2 * ca.n_; ++i)
    for (int j = 0; j < 2 * ca.n_; ++j)
      if (!(ca.m_[static_cast<size_t>(i)][static_cast<size_t>(j)] ==
            cb.m_[static_cast<size_t>(i)][static_cast<size_t>(j)]))
        return false;
  return true;
}

bool Octagon::includes(const Octagon& a, const Octagon& b) {
  if (a.n_ != b.n_) throw std::logic_error("octagon dimension mismatch");
  Octagon cb = b.closed();
  if (cb.bottom_) return true;
  Octagon ca = a.closed();
  if (ca.bottom_) return false;
  for (int i = 0; i < 2 * ca.n_; ++i)
    for (int j = 0; j < 2 * ca.n_; ++j)
      if (ca.m_[static_cast<size_t>(i)][static_cast<size_t>(j)] <
          cb.m_[static_cast<size_t>(i)][static_cast<size_t>(j)])
        return false;
  return true;
}

}  // namespace tfs
