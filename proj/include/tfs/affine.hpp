#pragma once

#include <optional>
#include <vector>

#include "tfs/bignum.hpp"

namespace tfs {

// Integerized affine equality: coeffs . x = rhs, gcd of the
// coefficients 1, leading (lowest-index nonzero) coefficient positive.
struct AffineRow {
  std::vector<Int> coeffs;
  Int rhs;

  bool operator==(const AffineRow&) const = default;
};

// Affine subspace of Q^n kept in generator form (base point plus an
// echelon basis of directions). Supports the hull of a point set built
// incrementally and a canonical equality-constraint view.
class AffineSpace {
 public:
  explicit AffineSpace(int nvars);

  int nvars() const { return n_; }
  bool empty() const { return !base_.has_value(); }
  // Dimension of the subspace; -1 when empty.
  int dim() const;

  void add_point(const std::vector<Rat>& pt);
  void add_point(const std::vector<Int>& pt);

  // Smallest affine space containing both arguments.
  static AffineSpace join(const AffineSpace& a, const AffineSpace& b);

  // Canonical equality system: reduced row echelon by variable order
  // 0..n-1, integerized. Full space gives no rows. Undefined on empty
  // spaces (throws).
  std::vector<AffineRow> constraints() const;

  // True when every point satisfies coeffs . x = rhs.
  bool entails(const std::vector<Int>& coeffs, const Int& rhs) const;

 private:
  void add_direction(std::vector<Rat> v);

  int n_;
  std::optional<std::vector<Rat>> base_;
  std::vector<std::vector<Rat>> basis_;  // echelon, pivot columns increasing
};

// var expressed from the canonical constraints as
//   x_var = (coeffs . x + constant) / divisor, divisor >= 1,
// where coeffs is zero at var itself. Empty when the space does not
// determine x_var as an affine function of the other variables.
struct OutputSolution {
  Int divisor;
  std::vector<Int> coeffs;
  Int constant;
};
std::optional<OutputSolution> solve_for_output(const AffineSpace& space,
                                               int var);

}  // namespace tfs
