#include "tfs/affine.hpp"

#include <stdexcept>

namespace tfs {

namespace {

int pivot_col(const std::vector<Rat>& v) {
  for (size_t i = 0; i < v.size(); ++i)
    if (v[i] != 0) return static_cast<int>(i);
  return -1;
}

}  // namespace

AffineSpace::AffineSpace(int nvars) : n_(nvars) {}

int AffineSpace::dim() const {
  if (empty()) return -1;
  return static_cast<int>(basis_.size());
}

void AffineSpace::add_direction(std::vector<Rat> v) {
  for (const auto& b : basis_) {
    int p = pivot_col(b);
    if (v[static_cast<size_t>(p)] != 0) {
      Rat f = v[static_cast<size_t>(p)] / b[static_cast<size_t>(p)];
      for (int i = 0; i < n_; ++i)
        v[static_cast<size_t>(i)] -= f * b[static_cast<size_t>(i)];
    }
  }
  int p = pivot_col(v);
  if (p < 0) return;
  // Keep pivot columns strictly increasing.
  size_t at = 0;
  while (at < basis_.size() && pivot_col(basis_[at]) < p) ++at;
  basis_.insert(basis_.begin() + static_cast<long>(at), std::move(v));
}

void AffineSpace::add_point(const std::vector<Rat>& pt) {
  if (static_cast<int>(pt.size()) != n_)
    throw std::logic_error("point dimension mismatch");
  if (empty()) {
    base_ = pt;
    return;
  }
  std::vector<Rat> v(pt);
  for (int i = 0; i < n_; ++i) v[static_cast<size_t>(i)] -= (*base_)[static_cast<size_t>(i)];
  add_direction(std::move(v));
}

void AffineSpace::add_point(const std::vector<Int>& pt) {
  std::vector<Rat> q;
  q.reserve(pt.size());
  for (const Int& x : pt) q.emplace_back(x);
  add_point(q);
}

AffineSpace AffineSpace::join(const AffineSpace& a, const AffineSpace& b) {
  if (a.n_ != b.n_) throw std::logic_error("space dimension mismatch");
  if (a.empty()) return b;
  if (b.empty()) return a;
  AffineSpace r = a;
  r.add_point(*b.base_);
  for (const auto& d : b.basis_) {
    std::vector<Rat> v = d;
    r.add_direction(std::move(v));
  }
  return r;
}

std::vector<AffineRow> AffineSpace::constraints() const {
  if (empty()) throw std::logic_error("constraints of an empty space");
  // Null space of the basis (as rows): RREF, then one functional per
  // free column.
  std::vector<std::vector<Rat>> r = basis_;
  // Reduce to RREF: eliminate pivot columns upward, normalize pivots.
  for (auto& row : r) {
    int p = pivot_col(row);
    Rat pv = row[static_cast<size_t>(p)];
    for (int i = 0; i < n_; ++i) row[static_cast<size_t>(i)] /= pv;
  }
  for (size_t i = r.size(); i-- > 0;) {
    int p = pivot_col(r[i]);
    for (size_t j = 0; j < i; ++j) {
      Rat f = r[j][static_cast<size_t>(p)];
      if (f == 0) continue;
      for (int k = 0; k < n_; ++k)
        r[j][static_cast<size_t>(k)] -= f * r[i][static_cast<size_t>(k)];
    }
  }
  std::vector<int> pivots;
  for (const auto& row : r) pivots.push_back(pivot_col(row));

  std::vector<std::vector<Rat>> funcs;
  for (int f = 0; f < n_; ++f) {
    bool is_pivot = false;
    for (int p : pivots) is_pivot = is_pivot || p == f;
    if (is_pivot) continue;
    std::vector<Rat> a(static_cast<size_t>(n_), Rat(0));
    a[static_cast<size_t>(f)] = 1;
    for (size_t i = 0; i < r.size(); ++i)
      a[static_cast<size_t>(pivots[i])] = -r[i][static_cast<size_t>(f)];
    funcs.push_back(std::move(a));
  }

  // RREF of the functional system [A | A.base] for a canonical view.
  std::vector<std::vector<Rat>> sys;
  for (auto& a : funcs) {
    Rat rhs = 0;
    for (int i = 0; i < n_; ++i)
      rhs += a[static_cast<size_t>(i)] * (*base_)[static_cast<size_t>(i)];
    a.push_back(rhs);
    sys.push_back(std::move(a));
  }
  size_t rank = 0;
  for (int col = 0; col < n_ && rank < sys.size(); ++col) {
    size_t sel = rank;
    while (sel < sys.size() && sys[sel][static_cast<size_t>(col)] == 0) ++sel;
    if (sel == sys.size()) continue;
    std::swap(sys[rank], sys[sel]);
    Rat pv = sys[rank][static_cast<size_t>(col)];
    for (int k = 0; k <= n_; ++k) sys[rank][static_cast<size_t>(k)] /= pv;
    for (size_t j = 0; j < sys.size(); ++j) {
      if (j == rank) continue;
      Rat f = sys[j][static_cast<size_t>(col)];
      if (f == 0) continue;
      for (int k = 0; k <= n_; ++k)
        sys[j][static_cast<size_t>(k)] -= f * sys[rank][static_cast<size_t>(k)];
    }
    ++rank;
  }
  sys.resize(rank);

  std::vector<AffineRow> out;
  for (const auto& row : sys) {
    Int l = 1;
    for (int k = 0; k <= n_; ++k)
      l = boost::multiprecision::lcm(l, denominator(row[static_cast<size_t>(k)]));
    std::vector<Int> c;
    c.reserve(static_cast<size_t>(n_));
    Int g = 0;
    for (int k = 0; k < n_; ++k) {
      Rat scaled = row[static_cast<size_t>(k)] * l;
      c.push_back(numerator(scaled));
      g = boost::multiprecision::gcd(g, c.back());
    }
    Rat scaled_rhs = row[static_cast<size_t>(n_)] * l;
    Int rhs = numerator(scaled_rhs);
    g = boost::multiprecision::gcd(g, rhs);
    if (g == 0) continue;
    for (auto& x : c) x /= g;
    rhs /= g;
    for (const Int& x : c) {
      if (x == 0) continue;
      if (x < 0) {
        for (auto& y : c) y = -y;
        rhs = -rhs;
      }
      break;
    }
    out.push_back({std::move(c), std::move(rhs)});
  }
  return out;
}

bool AffineSpace::entails(const std::vector<Int>& coeffs, const Int& rhs) const {
  if (empty()) return true;
  Rat v = 0;
  for (int i = 0; i < n_; ++i)
    v += Rat(coeffs[static_cast<size_t>(i)]) * (*base_)[static_cast<size_t>(i)];
  if (v != Rat(rhs)) return false;
  for (const auto& d : basis_) {
    Rat dv = 0;
    for (int i = 0; i < n_; ++i)
      dv += Rat(coeffs[static_cast<size_t>(i)]) * d[static_cast<size_t>(i)];
    if (dv != 0) return false;
  }
  return true;
}

std::optional<OutputSolution> solve_for_output(const AffineSpace& space,
                                               int var) {
  auto rows = space.constraints();
  for (const auto& row : rows) {
    int lead = -1;
    for (size_t i = 0; i < row.coeffs.size(); ++i) {
      if (row.coeffs[i] != 0) {
        lead = static_cast<int>(i);
        break;
      }
    }
    if (lead != var) continue;
    OutputSolution s;
    s.divisor = row.coeffs[static_cast<size_t>(var)];
    s.coeffs.assign(row.coeffs.size(), Int(0));
    for (size_t i = 0; i < row.coeffs.size(); ++i)
      if (static_cast<int>(i) != var) s.coeffs[i] = -row.coeffs[i];
    s.constant = row.rhs;
    return s;
  }
  return std::nullopt;
}

}  // namespace tfs
