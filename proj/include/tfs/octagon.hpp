#pragma once

#include <string>
#include <vector>

#include "tfs/bignum.hpp"

namespace tfs {

// One octagonal template inequality over variable indices: a sum of
// one or two unit terms (coeff, var), coeff in {+1,-1}, compared <= d.
struct TemplateRow {
  std::vector<std::pair<int, int>> terms;

  bool operator==(const TemplateRow&) const = default;
};

// Canonical template over n variables. Unary rows first (+x_0..+x_{n-1},
// then their negations), then for each pair i<j the block
// x_i+x_j, -x_i-x_j, -x_i+x_j, x_i-x_j. Row numbering throughout the
// project (guards, update systems, displays) refers to this order.
std::vector<TemplateRow> octagon_template(int nvars);

// Octagons over integer-valued variables as difference-bound matrices.
// Node 2k stands for +x_k, node 2k+1 for -x_k; m[i][j] bounds
// value(i) - value(j). The tight closure makes every entailed bound
// explicit over integer models.
class Octagon {
 public:
  explicit Octagon(int nvars);  // top
  static Octagon bottom(int nvars);

  int nvars() const { return n_; }
  bool is_bottom() const { return bottom_; }

  // s*x_v <= c with s in {+1,-1}.
  void constrain_single(int s, int v, const Int& c);
  // s1*x_v1 + s2*x_v2 <= c, v1 != v2.
  void constrain_pair(int s1, int v1, int s2, int v2, const Int& c);
  void constrain_row(const TemplateRow& row, const Int& c);

  // Tight closure: shortest paths, unary-bound tightening to even
  // values, strengthening through unary bounds, emptiness detection.
  Octagon closed() const;

  // Reads on a closed octagon (call closed() first; these do not close).
  ExtInt row_bound(const TemplateRow& row) const;
  ExtInt upper(int v) const;  // least known c with x_v <= c
  ExtInt lower(int v) const;  // greatest known c with x_v >= c

  // Lattice operations; arguments need not be closed. Results are closed.
  static Octagon join(const Octagon& a, const Octagon& b);
  static Octagon meet(const Octagon& a, const Octagon& b);
  static bool equal(const Octagon& a, const Octagon& b);
  // True when every model of b is a model of a.
  static bool includes(const Octagon& a, const Octagon& b);

 private:
  void set_edge(int i, int j, const ExtInt& c);

  int n_;
  bool bottom_ = false;
  std::vector<std::vector<ExtInt>> m_;
};

}  // namespace tfs
