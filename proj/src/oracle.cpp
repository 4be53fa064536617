#include "tfs/oracle.hpp"

#include <algorithm>
#include <random>
#include <sstream>
#include <stdexcept>
#include <utility>

#include "json.hpp"
#include "tfs/eval.hpp"
#include "tfs/octagon.hpp"

namespace tfs {

namespace {

std::vector<int> merged(std::vector<int> a, const std::vector<int>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

// Every assignment of `regs` (raw w-bit values), crossed with both
// incoming carries when the flag is a block input. Other registers stay
// zero; they are written before being read or irrelevant to the caller.
template <class F>
void sweep(const Block& b, const std::vector<int>& regs, unsigned w, F&& fn) {
  if (regs.size() * w > 26)
    throw std::invalid_argument("input sweep too large for this width");
  const int carries = carry_in_free(b) ? 2 : 1;
  const uint64_t mask = (w == 64) ? ~uint64_t{0} : (uint64_t{1} << w) - 1;
  const uint64_t total = uint64_t{1} << (regs.size() * w);
  for (uint64_t a = 0; a < total; ++a) {
    MachineState st;
    uint64_t rest = a;
    for (size_t i = 0; i < regs.size(); ++i) {
      st.regs[static_cast<size_t>(regs[i])] = rest & mask;
      rest >>= w;
    }
    for (int c = 0; c < carries; ++c) {
      st.carry = c;
      fn(st);
    }
  }
}

Int row_value(const TemplateRow& row, const std::vector<Int>& x) {
  Int v = 0;
  for (auto [coeff, var] : row.terms) v += Int(coeff) * x[static_cast<size_t>(var)];
  return v;
}

std::vector<Int> reg_values(const MachineState& st, const std::vector<int>& regs,
                            unsigned w, Interp interp) {
  std::vector<Int> out;
  out.reserve(regs.size());
  for (int r : regs)
    out.push_back(reg_value(st.regs[static_cast<size_t>(r)], w, interp));
  return out;
}

// Reduced row echelon accumulator over Q^d: pivots strictly increasing,
// leading entries 1, pivot columns cleared everywhere else.
class Rref {
 public:
  explicit Rref(size_t d) : d_(d) {}

  void add(std::vector<Rat> v) {
    for (size_t r = 0; r < rows_.size(); ++r) {
      Rat f = v[piv_[r]];
      if (f == 0) continue;
      for (size_t j = 0; j < d_; ++j) v[j] -= f * rows_[r][j];
    }
    size_t p = 0;
    while (p < d_ && v[p] == 0) ++p;
    if (p == d_) return;
    Rat lead = v[p];
    for (auto& e : v) e /= lead;
    for (size_t r = 0; r < rows_.size(); ++r) {
      Rat f = rows_[r][p];
      if (f == 0) continue;
      for (size_t j = 0; j < d_; ++j) rows_[r][j] -= f * v[j];
    }
    size_t at = 0;
    while (at < piv_.size() && piv_[at] < p) ++at;
    rows_.insert(rows_.begin() + static_cast<ptrdiff_t>(at), std::move(v));
    piv_.insert(piv_.begin() + static_cast<ptrdiff_t>(at), p);
  }

  const std::vector<std::vector<Rat>>& rows() const { return rows_; }
  const std::vector<size_t>& pivots() const { return piv_; }
  size_t dim() const { return d_; }

 private:
  size_t d_;
  std::vector<std::vector<Rat>> rows_;
  std::vector<size_t> piv_;
};

// Basis of { z : r . z = 0 for every accumulated row }, one vector per
// free column.
std::vector<std::vector<Rat>> nullspace(const Rref& R) {
  std::vector<std::vector<Rat>> out;
  std::vector<bool> is_pivot(R.dim(), false);
  for (size_t p : R.pivots()) is_pivot[p] = true;
  for (size_t j = 0; j < R.dim(); ++j) {
    if (is_pivot[j]) continue;
    std::vector<Rat> z(R.dim(), Rat(0));
    z[j] = 1;
    for (size_t r = 0; r < R.rows().size(); ++r)
      z[R.pivots()[r]] = -R.rows()[r][j];
    out.push_back(std::move(z));
  }
  return out;
}

AffineRow integerize(const std::vector<Rat>& row, size_t cols) {
  using boost::multiprecision::denominator;
  using boost::multiprecision::numerator;
  Int l = 1;
  for (const Rat& e : row) l = lcm(l, Int(denominator(e)));
  std::vector<Int> ints;
  ints.reserve(row.size());
  Int g = 0;
  for (const Rat& e : row) {
    Int v = Int(numerator(e)) * (l / Int(denominator(e)));
    g = gcd(g, v);
    ints.push_back(std::move(v));
  }
  if (g != 0)
    for (Int& v : ints) v /= g;
  for (size_t j = 0; j < cols; ++j) {
    if (ints[j] == 0) continue;
    if (ints[j] < 0)
      for (Int& v : ints) v = -v;
    break;
  }
  AffineRow r;
  r.coeffs.assign(ints.begin(), ints.begin() + static_cast<ptrdiff_t>(cols));
  r.rhs = ints[cols];
  return r;
}

}  // namespace

std::set<ModeVector> brute_modes(const Block& b, int width, Interp interp) {
  std::set<ModeVector> seen;
  sweep(b, b.live_in, static_cast<unsigned>(width), [&](const MachineState& st) {
    seen.insert(execute_concrete(b, static_cast<unsigned>(width), interp, st).modes);
  });
  return seen;
}

std::optional<std::vector<Int>> brute_guard_bounds(const Block& b,
                                                   const std::vector<int>& regs,
                                                   int width, Interp interp,
                                                   const ModeVector& mv) {
  const unsigned w = static_cast<unsigned>(width);
  auto tpl = octagon_template(static_cast<int>(regs.size()));
  std::optional<std::vector<Int>> best;
  sweep(b, merged(b.live_in, regs), w, [&](const MachineState& st) {
    if (execute_concrete(b, w, interp, st).modes != mv) return;
    auto x = reg_values(st, regs, w, interp);
    if (!best) {
      best.emplace();
      best->reserve(tpl.size());
      for (const auto& row : tpl) best->push_back(row_value(row, x));
    } else {
      for (size_t k = 0; k < tpl.size(); ++k)
        (*best)[k] = std::max((*best)[k], row_value(tpl[k], x));
    }
  });
  return best;
}

std::optional<std::vector<AffineRow>> brute_hull(
    const Block& b, const std::vector<int>& regs, int width, Interp interp,
    const ModeVector& mv, const std::vector<Monomial>& monomials) {
  const unsigned w = static_cast<unsigned>(width);
  const size_t n = regs.size();
  const size_t cols = 2 * n + monomials.size();
  std::vector<std::vector<size_t>> mono_pos;
  for (const auto& mono : monomials) {
    std::vector<size_t> pos;
    for (int r : mono.regs) {
      auto it = std::lower_bound(regs.begin(), regs.end(), r);
      if (it == regs.end() || *it != r)
        throw std::invalid_argument("monomial register is not tracked");
      pos.push_back(static_cast<size_t>(it - regs.begin()));
    }
    mono_pos.push_back(std::move(pos));
  }
  Rref points(cols + 1);
  bool any = false;
  sweep(b, merged(b.live_in, regs), w, [&](const MachineState& st) {
    auto er = execute_concrete(b, w, interp, st);
    if (er.modes != mv) return;
    any = true;
    auto outs = reg_values(er.out, regs, w, interp);
    auto ins = reg_values(st, regs, w, interp);
    std::vector<Rat> pt;
    pt.reserve(cols + 1);
    for (const Int& v : outs) pt.emplace_back(v);
    for (const Int& v : ins) pt.emplace_back(v);
    for (const auto& pos : mono_pos) {
      Int prod = 1;
      for (size_t p : pos) prod *= ins[p];
      pt.emplace_back(prod);
    }
    pt.emplace_back(1);
    points.add(std::move(pt));
  });
  if (!any) return std::nullopt;
  // Relations z with z . (outs, ins, monos, 1) = 0, re-echeloned by
  // variable order so the row list is canonical.
  Rref cons(cols + 1);
  for (auto& z : nullspace(points)) {
    std::vector<Rat> row(z.begin(), z.begin() + static_cast<ptrdiff_t>(cols));
    row.push_back(-z[cols]);
    cons.add(std::move(row));
  }
  std::vector<AffineRow> out;
  out.reserve(cons.rows().size());
  for (const auto& row : cons.rows()) out.push_back(integerize(row, cols));
  return out;
}

CheckReport check_tf(const TransferFunction& tf, uint64_t samples,
                     uint64_t seed) {
  CheckReport rep;
  const auto& regs = tf.regs;
  const size_t n = regs.size();
  const unsigned w = static_cast<unsigned>(tf.width);
  const Int p2 = pow2(w);
  const Int repr_lo = tf.interp == Interp::SIGNED ? -pow2(w - 1) : Int(0);
  const Int repr_hi =
      tf.interp == Interp::SIGNED ? pow2(w - 1) - 1 : pow2(w) - 1;
  auto tpl = octagon_template(static_cast<int>(n));

  auto note = [&](const std::string& s) {
    if (rep.notes.size() < 8) rep.notes.push_back(s);
  };

  // Guard bounds must be attained, not merely sound.
  for (size_t pi = 0; pi < tf.pairs.size(); ++pi) {
    auto bb = brute_guard_bounds(tf.block, regs, tf.width, tf.interp,
                                 tf.pairs[pi].modes);
    if (!bb) {
      ++rep.attainment_violations;
      note("mode " + mode_string(tf.pairs[pi].modes) +
           ": no input reaches it at this width");
      continue;
    }
    for (size_t k = 0; k < tpl.size(); ++k) {
      if ((*bb)[k] == tf.pairs[pi].guard.bounds[k]) continue;
      ++rep.attainment_violations;
      std::ostringstream os;
      os << "mode " << mode_string(tf.pairs[pi].modes) << ": guard row " << k
         << " is " << tf.pairs[pi].guard.bounds[k].str() << ", sweep gives "
         << (*bb)[k].str();
      note(os.str());
    }
  }

  std::vector<int> extra;
  for (int r : tf.block.live_in)
    if (!std::binary_search(regs.begin(), regs.end(), r)) extra.push_back(r);
  if (extra.size() * w > 20)
    throw std::invalid_argument("untracked live-in sweep too large");
  const uint64_t smax = n <= 3 ? 6 : (n <= 5 ? 2 : 0);
  const int carries = carry_in_free(tf.block) ? 2 : 1;
  const uint64_t mask = (w == 64) ? ~uint64_t{0} : (uint64_t{1} << w) - 1;
  std::mt19937_64 rng(seed);

  auto to_raw = [&](const Int& v) {
    Int t = v % p2;
    if (t < 0) t += p2;
    return t.convert_to<uint64_t>();
  };

  for (uint64_t s = 0; s < samples; ++s) {
    ++rep.samples;
    std::vector<Int> center(n);
    for (size_t i = 0; i < n; ++i)
      center[i] = reg_value(rng() & mask, w, tf.interp);
    Octagon oct(static_cast<int>(n));
    for (const auto& row : tpl)
      oct.constrain_row(row, row_value(row, center) + Int(rng() % (smax + 1)));
    oct = oct.closed();
    Octagon img = apply_tf(tf, oct);

    std::vector<Int> lo(n), hi(n);
    for (size_t i = 0; i < n; ++i) {
      lo[i] = std::max(oct.lower(static_cast<int>(i)).value, repr_lo);
      hi[i] = std::min(oct.upper(static_cast<int>(i)).value, repr_hi);
    }

    std::vector<Int> cur = lo;
    for (;;) {
      bool inside = true;
      for (const auto& row : tpl) {
        if (!(ExtInt(row_value(row, cur)) <= oct.row_bound(row))) {
          inside = false;
          break;
        }
      }
      if (inside) {
        // Sweep the untracked live-in registers and both carries.
        uint64_t etotal = uint64_t{1} << (extra.size() * w);
        for (uint64_t e = 0; e < etotal; ++e) {
          MachineState st;
          for (size_t i = 0; i < n; ++i)
            st.regs[static_cast<size_t>(regs[i])] = to_raw(cur[i]);
          uint64_t rest = e;
          for (size_t i = 0; i < extra.size(); ++i) {
            st.regs[static_cast<size_t>(extra[i])] = rest & mask;
            rest >>= w;
          }
          for (int c = 0; c < carries; ++c) {
            st.carry = c;
            ++rep.points;
            auto er = execute_concrete(tf.block, w, tf.interp, st);
            auto outs = reg_values(er.out, regs, w, tf.interp);
            bool bad = img.is_bottom();
            if (!bad) {
              for (const auto& row : tpl) {
                if (!(ExtInt(row_value(row, outs)) <= img.row_bound(row))) {
                  bad = true;
                  break;
                }
              }
            }
            if (bad) {
              ++rep.soundness_violations;
              std::ostringstream os;
              os << "sample " << s << ": input";
              for (size_t i = 0; i < n; ++i)
                os << " r" << regs[i] << "=" << cur[i].str();
              os << " runs as " << mode_string(er.modes)
                 << " but lands outside the image";
              note(os.str());
            }
          }
        }
      }
      size_t i = 0;
      while (i < n && cur[i] == hi[i]) {
        cur[i] = lo[i];
        ++i;
      }
      if (i == n) break;
      ++cur[i];
    }
  }
  return rep;
}

std::string check_report_json(const CheckReport& r) {
  nlohmann::ordered_json j;
  j["samples"] = r.samples;
  j["points"] = r.points;
  j["soundness_violations"] = r.soundness_violations;
  j["attainment_violations"] = r.attainment_violations;
  j["ok"] = r.ok();
  j["notes"] = r.notes;
  return j.dump(2);
}

}  // namespace tfs
