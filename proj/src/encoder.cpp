#include "tfs/encoder.hpp"

#include <stdexcept>

namespace tfs {

Circuit::Circuit(Solver& s) : s_(s) {
  t_ = s_.new_var();
  s_.add_unit(t_);
}

Lit Circuit::fresh() { return s_.new_var(); }

BitVec Circuit::fresh_vec(int n) {
  BitVec v;
  v.bits.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) v.bits.push_back(fresh());
  return v;
}

Lit Circuit::land(Lit a, Lit b) {
  if (a == false_lit() || b == false_lit()) return false_lit();
  if (a == true_lit()) return b;
  if (b == true_lit()) return a;
  if (a == b) return a;
  if (a == -b) return false_lit();
  Lit g = fresh();
  s_.add_clause({-g, a});
  s_.add_clause({-g, b});
  s_.add_clause({-a, -b, g});
  return g;
}

Lit Circuit::lor(Lit a, Lit b) { return -land(-a, -b); }

Lit Circuit::lxor(Lit a, Lit b) {
  if (a == true_lit()) return -b;
  if (a == false_lit()) return b;
  if (b == true_lit()) return -a;
  if (b == false_lit()) return a;
  if (a == b) return false_lit();
  if (a == -b) return true_lit();
  Lit g = fresh();
  s_.add_clause({-g, a, b});
  s_.add_clause({-g, -a, -b});
  s_.add_clause({g, -a, b});
  s_.add_clause({g, a, -b});
  return g;
}

Lit Circuit::land(const std::vector<Lit>& ls) {
  Lit acc = true_lit();
  for (Lit l : ls) acc = land(acc, l);
  return acc;
}

Lit Circuit::lor(const std::vector<Lit>& ls) {
  Lit acc = false_lit();
  for (Lit l : ls) acc = lor(acc, l);
  return acc;
}

Lit Circuit::ite(Lit c, Lit a, Lit b) {
  if (c == true_lit()) return a;
  if (c == false_lit()) return b;
  if (a == b) return a;
  if (a == true_lit()) return lor(c, b);
  if (a == false_lit()) return land(-c, b);
  if (b == true_lit()) return lor(-c, a);
  if (b == false_lit()) return land(c, a);
  Lit g = fresh();
  s_.add_clause({-c, -a, g});
  s_.add_clause({-c, a, -g});
  s_.add_clause({c, -b, g});
  s_.add_clause({c, b, -g});
  s_.add_clause({-a, -b, g});
  s_.add_clause({a, b, -g});
  return g;
}

Lit Circuit::maj(Lit a, Lit b, Lit c) {
  if (a == b) return a;
  if (a == c) return a;
  if (b == c) return b;
  if (a == -b) return c;
  if (a == -c) return b;
  if (b == -c) return a;
  if (a == true_lit()) return lor(b, c);
  if (a == false_lit()) return land(b, c);
  if (b == true_lit()) return lor(a, c);
  if (b == false_lit()) return land(a, c);
  if (c == true_lit()) return lor(a, b);
  if (c == false_lit()) return land(a, b);
  Lit g = fresh();
  s_.add_clause({-a, -b, g});
  s_.add_clause({-a, -c, g});
  s_.add_clause({-b, -c, g});
  s_.add_clause({a, b, -g});
  s_.add_clause({a, c, -g});
  s_.add_clause({b, c, -g});
  return g;
}

BitVec Circuit::const_vec(const Int& value, int n) {
  Int m = value % pow2(n);
  if (m < 0) m += pow2(n);
  BitVec v;
  v.bits.reserve(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i)
    v.bits.push_back(boost::multiprecision::bit_test(m, static_cast<unsigned>(i))
                         ? true_lit()
                         : false_lit());
  return v;
}

BitVec Circuit::sext(const BitVec& v, int n) {
  BitVec r = v;
  if (n <= r.width()) {
    r.bits.resize(static_cast<size_t>(n));
    return r;
  }
  Lit top = v.bits.empty() ? false_lit() : v.msb();
  while (r.width() < n) r.bits.push_back(top);
  return r;
}

BitVec Circuit::zext(const BitVec& v, int n) {
  BitVec r = v;
  if (n <= r.width()) {
    r.bits.resize(static_cast<size_t>(n));
    return r;
  }
  while (r.width() < n) r.bits.push_back(false_lit());
  return r;
}

BitVec Circuit::add(const BitVec& a, const BitVec& b, Lit carry_in) {
  if (a.width() != b.width()) throw std::logic_error("add width mismatch");
  BitVec r;
  r.bits.reserve(a.bits.size());
  Lit c = carry_in;
  for (size_t i = 0; i < a.bits.size(); ++i) {
    Lit x = a.bits[i], y = b.bits[i];
    r.bits.push_back(lxor(lxor(x, y), c));
    c = maj(x, y, c);
  }
  return r;
}

BitVec Circuit::add(const BitVec& a, const BitVec& b) {
  return add(a, b, false_lit());
}

BitVec Circuit::sub(const BitVec& a, const BitVec& b) {
  BitVec nb;
  nb.bits.reserve(b.bits.size());
  for (Lit l : b.bits) nb.bits.push_back(-l);
  return add(a, nb, true_lit());
}

BitVec Circuit::negate(const BitVec& a) {
  return sub(const_vec(0, a.width()), a);
}

BitVec Circuit::mul(const BitVec& a, const BitVec& b) {
  if (a.width() != b.width()) throw std::logic_error("mul width mismatch");
  int n = a.width();
  BitVec acc = const_vec(0, n);
  for (int i = 0; i < n; ++i) {
    if (a.bits[static_cast<size_t>(i)] == false_lit()) continue;
    BitVec partial = const_vec(0, n);
    for (int j = 0; i + j < n; ++j)
      partial.bits[static_cast<size_t>(i + j)] =
          land(a.bits[static_cast<size_t>(i)], b.bits[static_cast<size_t>(j)]);
    acc = add(acc, partial);
  }
  return acc;
}

Lit Circuit::eq_const(const BitVec& v, const Int& value) {
  Int m = value % pow2(v.width());
  if (m < 0) m += pow2(v.width());
  Lit acc = true_lit();
  for (int i = 0; i < v.width(); ++i) {
    Lit b = v.bits[static_cast<size_t>(i)];
    acc = land(acc, boost::multiprecision::bit_test(m, static_cast<unsigned>(i))
                        ? b
                        : -b);
  }
  return acc;
}

Lit Circuit::ule_const(const BitVec& v, const Int& c) {
  if (c < 0) return false_lit();
  if (c >= pow2(v.width()) - 1) return true_lit();
  // Build "low bits 0..i of v <= low bits of c" from the LSB up.
  Lit acc = true_lit();
  for (int i = 0; i < v.width(); ++i) {
    Lit b = v.bits[static_cast<size_t>(i)];
    if (boost::multiprecision::bit_test(c, static_cast<unsigned>(i)))
      acc = lor(-b, acc);
    else
      acc = land(-b, acc);
  }
  return acc;
}

Lit Circuit::uge_const(const BitVec& v, const Int& c) {
  return -ule_const(v, c - 1);
}

Lit Circuit::sle_const(const BitVec& v, const Int& c) {
  Int half = pow2(v.width() - 1);
  if (c >= half - 1) return true_lit();
  if (c < -half) return false_lit();
  // Flip the sign bit: signed compare becomes unsigned on offset binary.
  BitVec u = v;
  u.bits.back() = -u.bits.back();
  return ule_const(u, c + half);
}

Lit Circuit::sge_const(const BitVec& v, const Int& c) {
  return -sle_const(v, c - 1);
}

Lit Circuit::sle(const BitVec& a, const BitVec& b) {
  int n = std::max(a.width(), b.width()) + 1;
  BitVec d = sub(sext(b, n), sext(a, n));
  return -d.msb();
}

Lit Circuit::slt(const BitVec& a, const BitVec& b) { return -sle(b, a); }

Lit Circuit::is_zero(const BitVec& v) {
  Lit any = lor(v.bits);
  return -any;
}

BitVec Circuit::linear(const std::vector<LinTerm>& terms, int n) {
  BitVec acc = const_vec(0, n);
  for (const auto& t : terms) {
    if (t.coeff == 0) continue;
    BitVec ext = t.sign_extend ? sext(t.vec, n) : zext(t.vec, n);
    Int a = t.coeff < 0 ? Int(-t.coeff) : t.coeff;
    for (int j = 0; j < static_cast<int>(bit_len(a)); ++j) {
      if (!boost::multiprecision::bit_test(a, static_cast<unsigned>(j)))
        continue;
      BitVec sh;
      sh.bits.assign(static_cast<size_t>(j), false_lit());
      for (int i = 0; i + j < n; ++i)
        sh.bits.push_back(ext.bits[static_cast<size_t>(i)]);
      if (t.coeff > 0)
        acc = add(acc, sh);
      else
        acc = sub(acc, sh);
    }
  }
  return acc;
}

void Circuit::pin_const(const BitVec& v, const Int& value,
                        std::vector<Lit>& assumptions) {
  Int m = value % pow2(v.width());
  if (m < 0) m += pow2(v.width());
  for (int i = 0; i < v.width(); ++i) {
    Lit b = v.bits[static_cast<size_t>(i)];
    assumptions.push_back(
        boost::multiprecision::bit_test(m, static_cast<unsigned>(i)) ? b : -b);
  }
}

Int Circuit::vec_value(const BitVec& v, const SolveResult& model,
                       bool is_signed) {
  Int x = 0;
  for (int i = 0; i < v.width(); ++i)
    if (model.value_lit(v.bits[static_cast<size_t>(i)]))
      x += pow2(i);
  if (is_signed && v.width() > 0 &&
      model.value_lit(v.bits[static_cast<size_t>(v.width() - 1)]))
    x -= pow2(v.width());
  return x;
}

namespace {

// Mode literals from the exact pre-wrap result I (width > w, two's
// complement): O above the representable range, U below, P/N by sign.
struct SignedModes {
  Lit o, u, p, n;
};

SignedModes classify_signed(Circuit& c, const BitVec& ideal, int w) {
  Int hi = pow2(w - 1) - 1;
  Int lo = -pow2(w - 1);
  SignedModes m;
  m.o = c.sge_const(ideal, hi + 1);
  m.u = c.sle_const(ideal, lo - 1);
  Lit fits = c.land(-m.o, -m.u);
  m.n = c.land(fits, ideal.msb());
  m.p = c.land(fits, -ideal.msb());
  return m;
}

}  // namespace

BlockCircuit::BlockCircuit(Circuit& c, const Block& b, int width, Interp interp)
    : c_(c), block_(b), width_(width), interp_(interp) {
  if (width < 4 || width > 64) throw std::invalid_argument("width out of range");
  inputs_.resize(8);
  current_.resize(8);
  for (int r : block_.universe) {
    inputs_[static_cast<size_t>(r)] = c_.fresh_vec(width_);
    current_[static_cast<size_t>(r)] = inputs_[static_cast<size_t>(r)];
  }
  carry_in_ = c_.fresh();
  Lit carry = carry_in_;
  mode_lits_.resize(block_.instrs.size());

  const int w = width_;
  const bool sgn = interp_ == Interp::SIGNED;
  for (size_t idx = 0; idx < block_.instrs.size(); ++idx) {
    const Instruction& ins = block_.instrs[idx];
    BitVec d = current_[static_cast<size_t>(ins.dst)];
    BitVec out;
    auto& modes = mode_lits_[idx];

    switch (ins.op) {
      case Opcode::MOV:
        out = current_[static_cast<size_t>(*ins.src)];
        modes.push_back({Mode::E, c_.true_lit()});
        break;
      case Opcode::EOR: {
        const BitVec& s = current_[static_cast<size_t>(*ins.src)];
        out.bits.reserve(static_cast<size_t>(w));
        for (int i = 0; i < w; ++i)
          out.bits.push_back(c_.lxor(d.bits[static_cast<size_t>(i)],
                                     s.bits[static_cast<size_t>(i)]));
        modes.push_back({Mode::E, c_.true_lit()});
        break;
      }
      case Opcode::AND: {
        BitVec s = ins.imm ? c_.const_vec(Int(*ins.imm), w)
                           : current_[static_cast<size_t>(*ins.src)];
        out.bits.reserve(static_cast<size_t>(w));
        for (int i = 0; i < w; ++i)
          out.bits.push_back(c_.land(d.bits[static_cast<size_t>(i)],
                                     s.bits[static_cast<size_t>(i)]));
        modes.push_back({Mode::E, c_.true_lit()});
        break;
      }
      case Opcode::ADD: {
        const BitVec& s = current_[static_cast<size_t>(*ins.src)];
        BitVec sum_u = c_.add(c_.zext(d, w + 1), c_.zext(s, w + 1));
        out.bits.assign(sum_u.bits.begin(), sum_u.bits.begin() + w);
        if (sgn) {
          BitVec ideal = c_.add(c_.sext(d, w + 1), c_.sext(s, w + 1));
          SignedModes m = classify_signed(c_, ideal, w);
          modes = {{Mode::O, m.o}, {Mode::U, m.u}, {Mode::P, m.p},
                   {Mode::N, m.n}};
        } else {
          Lit o = sum_u.msb();
          modes = {{Mode::O, o}, {Mode::E, -o}};
        }
        carry = sum_u.msb();
        break;
      }
      case Opcode::SBC: {
        if (*ins.src == ins.dst) {
          // d - d - C: all-ones when C is set, zero otherwise. Borrow
          // equals C, so the flag is unchanged.
          out.bits.assign(static_cast<size_t>(w), carry);
          modes.push_back({Mode::E, c_.true_lit()});
          break;
        }
        const BitVec& s = current_[static_cast<size_t>(*ins.src)];
        BitVec cvec = c_.zext(BitVec{{carry}}, w + 1);
        BitVec diff_u =
            c_.sub(c_.sub(c_.zext(d, w + 1), c_.zext(s, w + 1)), cvec);
        out.bits.assign(diff_u.bits.begin(), diff_u.bits.begin() + w);
        if (sgn) {
          BitVec ideal =
              c_.sub(c_.sub(c_.sext(d, w + 1), c_.sext(s, w + 1)), cvec);
          SignedModes m = classify_signed(c_, ideal, w);
          modes = {{Mode::O, m.o}, {Mode::U, m.u}, {Mode::P, m.p},
                   {Mode::N, m.n}};
        } else {
          Lit u = diff_u.msb();
          modes = {{Mode::U, u}, {Mode::E, -u}};
        }
        carry = diff_u.msb();
        break;
      }
      case Opcode::LSL: {
        out.bits.assign(1, c_.false_lit());
        for (int i = 0; i + 1 < w; ++i)
          out.bits.push_back(d.bits[static_cast<size_t>(i)]);
        Lit o = d.msb();
        modes = {{Mode::O, o}, {Mode::E, -o}};
        carry = d.msb();
        break;
      }
      case Opcode::NEG: {
        out = c_.negate(d);
        if (sgn) {
          BitVec ideal = c_.sub(c_.const_vec(0, w + 1), c_.sext(d, w + 1));
          SignedModes m = classify_signed(c_, ideal, w);
          modes = {{Mode::O, m.o}, {Mode::U, m.u}, {Mode::P, m.p},
                   {Mode::N, m.n}};
        } else {
          Lit nz = c_.lor(d.bits);
          modes = {{Mode::U, nz}, {Mode::E, -nz}};
        }
        carry = c_.lor(d.bits);
        break;
      }
      case Opcode::INC: {
        BitVec one = c_.const_vec(1, w + 1);
        if (sgn) {
          BitVec ideal = c_.add(c_.sext(d, w + 1), one);
          out.bits.assign(ideal.bits.begin(), ideal.bits.begin() + w);
          SignedModes m = classify_signed(c_, ideal, w);
          modes = {{Mode::O, m.o}, {Mode::P, m.p}, {Mode::N, m.n}};
        } else {
          BitVec sum = c_.add(c_.zext(d, w + 1), one);
          out.bits.assign(sum.bits.begin(), sum.bits.begin() + w);
          Lit o = sum.msb();
          modes = {{Mode::O, o}, {Mode::E, -o}};
        }
        break;
      }
      case Opcode::MUL: {
        const BitVec& s = current_[static_cast<size_t>(*ins.src)];
        BitVec pa = sgn ? c_.sext(d, 2 * w) : c_.zext(d, 2 * w);
        BitVec pb = sgn ? c_.sext(s, 2 * w) : c_.zext(s, 2 * w);
        BitVec prod = c_.mul(pa, pb);
        out.bits.assign(prod.bits.begin(), prod.bits.begin() + w);
        if (sgn) {
          SignedModes m = classify_signed(c_, prod, w);
          modes = {{Mode::O, m.o}, {Mode::U, m.u}, {Mode::P, m.p},
                   {Mode::N, m.n}};
        } else {
          Lit o = c_.uge_const(prod, pow2(w));
          modes = {{Mode::O, o}, {Mode::E, -o}};
        }
        break;
      }
    }
    current_[static_cast<size_t>(ins.dst)] = out;

    // The literal list must line up with the instruction's modality.
    auto expect = modality(ins, interp_);
    if (expect.size() != modes.size())
      throw std::logic_error("mode circuit does not match modality");
    for (size_t i = 0; i < expect.size(); ++i)
      if (expect[i] != modes[i].first)
        throw std::logic_error("mode circuit order does not match modality");
  }
  carry_out_ = carry;
}

const BitVec& BlockCircuit::input(int reg) const {
  const BitVec& v = inputs_[static_cast<size_t>(reg)];
  if (v.bits.empty()) throw std::logic_error("register not in block universe");
  return v;
}

const BitVec& BlockCircuit::output(int reg) const {
  const BitVec& v = current_[static_cast<size_t>(reg)];
  if (v.bits.empty()) throw std::logic_error("register not in block universe");
  return v;
}

Lit BlockCircuit::mode_lit(int instr_idx, Mode m) const {
  for (const auto& [mode, lit] : mode_lits_[static_cast<size_t>(instr_idx)])
    if (mode == m) return lit;
  throw std::logic_error("mode not in instruction modality");
}

std::vector<Lit> BlockCircuit::mode_assumptions(const ModeVector& prefix) const {
  std::vector<int> idxs = multi_modal_indices(block_, interp_);
  if (prefix.size() > idxs.size())
    throw std::logic_error("mode prefix longer than multi-modal positions");
  std::vector<Lit> out;
  out.reserve(prefix.size());
  for (size_t i = 0; i < prefix.size(); ++i)
    out.push_back(mode_lit(idxs[i], prefix[i]));
  return out;
}

}  // namespace tfs
