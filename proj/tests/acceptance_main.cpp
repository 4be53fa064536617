// Acceptance checks for the synthesizer, one [PASS]/[FAIL] line per
// criterion. Criteria 1, 4 and 7 compare against reference constant
// tables whose entries disagree in places with the exhaustively verified
// behaviour of the blocks; those stay [FAIL] and the line spells out the
// measured divergence. The exit status counts outcomes that deviate from
// the expectations recorded below, so a regression, or an unexplained
// flip to green, fails the suite while the documented divergences do not
// hide anything.

#include <stdlib.h>
#include <sys/wait.h>

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "blocks.hpp"
#include "satfuzz.hpp"
#include "tfs/eval.hpp"
#include "tfs/guards.hpp"
#include "tfs/isa.hpp"
#include "tfs/modes.hpp"
#include "tfs/octagon.hpp"
#include "tfs/oracle.hpp"
#include "tfs/serialize.hpp"
#include "tfs/updates.hpp"

using namespace tfs;

namespace {

struct Outcome {
  bool pass = false;
  bool as_analyzed = false;  // matches the recorded expectation
  std::string note;
};

struct Ctx {
  std::string cli;
  std::string dir;
};

ModeVector mv(const char* s) {
  ModeVector out;
  for (const char* p = s; *p; ++p) switch (*p) {
      case 'O': out.push_back(Mode::O); break;
      case 'U': out.push_back(Mode::U); break;
      case 'P': out.push_back(Mode::P); break;
      case 'N': out.push_back(Mode::N); break;
      default: out.push_back(Mode::E); break;
    }
  return out;
}

SymTerm pat(Int c, int k) { return {std::move(c), Sym::PATTERN, k}; }
SymTerm amax(Int c, int i) { return {std::move(c), Sym::AGG_MAX, i}; }
SymTerm amin(Int c, int i) { return {std::move(c), Sym::AGG_MIN, i}; }

UpdateExpr expr(std::vector<SymTerm> ts, Int constant = 0) {
  return {std::move(ts), std::move(constant), 1};
}

UpdateRow row_of(int p, std::vector<SymTerm> ts, Int constant = 0) {
  UpdateRow r;
  r.pattern = p;
  r.kind = ts.empty() ? RowKind::CONST : RowKind::AFFINE;
  r.expr = expr(std::move(ts), std::move(constant));
  return r;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

// Exit status of `cli args` with stdout/stderr captured to files.
int run_cli(const Ctx& c, const std::string& args, const std::string& out,
            const std::string& err) {
  std::string cmd =
      "\"" + c.cli + "\" " + args + " > \"" + out + "\" 2> \"" + err + "\"";
  int rc = std::system(cmd.c_str());
  if (rc == -1 || !WIFEXITED(rc)) return -1;
  return WEXITSTATUS(rc);
}

// Parses "key=value" out of the stats line on stderr.
long long stat_value(const std::string& text, const std::string& key) {
  size_t at = text.find(key + "=");
  if (at == std::string::npos) return -1;
  return std::stoll(text.substr(at + key.size() + 1));
}

size_t pair_index(const TransferFunction& tf, const ModeVector& m) {
  for (size_t i = 0; i < tf.pairs.size(); ++i)
    if (tf.pairs[i].modes == m) return i;
  return tf.pairs.size();
}

std::string join_ints(const std::vector<int>& xs) {
  std::string s;
  for (int x : xs) s += (s.empty() ? "" : ",") + std::to_string(x);
  return s;
}

// 1. Mode census of the sign-fixup block at width 32 against the
// reference set of nine vectors. The census also reaches PON: inputs
// with r0+r1 == 0 and r1 < 0 run the masked negation (witness r0 = 5,
// r1 = -5), so ten vectors are feasible and the criterion stays red.
Outcome criterion1(const Ctx& c) {
  std::string out = c.dir + "/c1.out", err = c.dir + "/c1.err";
  if (run_cli(c, "modes " + c.dir + "/fixup.blk --width 32 --signed", out,
              err) != 0)
    return {false, false, "modes command failed"};
  std::set<std::string> got;
  std::istringstream is(slurp(out));
  std::string line;
  while (std::getline(is, line) && line.rfind("total", 0) != 0)
    got.insert(line);
  const std::set<std::string> expected = {"OOU", "OON", "UOP", "UON", "PEP",
                                          "POP", "NEN", "NOU", "NON"};
  std::vector<std::string> extra, missing;
  for (const auto& m : got)
    if (!expected.count(m)) extra.push_back(m);
  for (const auto& m : expected)
    if (!got.count(m)) missing.push_back(m);
  Outcome o;
  o.pass = extra.empty() && missing.empty();
  o.as_analyzed = !o.pass && missing.empty() && extra.size() == 1 &&
                  extra[0] == "PON";
  if (o.pass)
    o.note = "nine vectors";
  else if (o.as_analyzed)
    o.note = "ten vectors: the expected nine plus PON, reached by r0+r1 == 0 "
             "with r1 < 0 (witness r0=5, r1=-5)";
  else {
    o.note = "unexpected census:";
    for (const auto& m : extra) o.note += " +" + m;
    for (const auto& m : missing) o.note += " -" + m;
  }
  return o;
}

// 2. Increment guards at width 32 unsigned: O pins r0 to 2^32-1, E keeps
// [0, 2^32-2], and the guard phase spends exactly 32 probes per bound
// (128 for the block).
Outcome criterion2(const Ctx& c) {
  std::string out = c.dir + "/c2.out", err = c.dir + "/c2.err";
  if (run_cli(c,
              "synth " + c.dir + "/inc.blk --width 32 --unsigned "
                                 "--domain interval --stats",
              out, err) != 0)
    return {false, false, "synth command failed"};
  TransferFunction tf = from_text(slurp(out));
  long long calls = stat_value(slurp(err), "guard_calls");
  const Int top = pow2(32) - 1;
  bool shape = tf.pairs.size() == 2 && tf.pairs[0].modes == mv("O") &&
               tf.pairs[1].modes == mv("E");
  bool bounds = shape &&
                tf.pairs[0].guard.bounds == std::vector<Int>{top, -top} &&
                tf.pairs[1].guard.bounds == std::vector<Int>{top - 1, 0};
  Outcome o;
  o.pass = bounds && calls == 128;
  o.as_analyzed = o.pass;
  o.note = o.pass ? "O = [4294967295, 4294967295], E = [0, 4294967294], "
                    "128 probes"
                  : "bounds or probe count off (guard_calls=" +
                        std::to_string(calls) + ")";
  return o;
}

// 3. One full octagonal guard at width 32 costs 4 rows at 33 probes plus
// 4 rows at 34, 268 solver calls. The masked-add block has a single mode
// so the stats line isolates one guard.
Outcome criterion3(const Ctx& c) {
  std::string out = c.dir + "/c3.out", err = c.dir + "/c3.err";
  if (run_cli(c,
              "synth " + c.dir + "/masked.blk --width 32 --signed "
                                 "--strategy bounds --stats",
              out, err) != 0)
    return {false, false, "synth command failed"};
  std::string stats = slurp(err);
  long long calls = stat_value(stats, "guard_calls");
  long long pairs = stat_value(stats, "pairs");
  Outcome o;
  o.pass = calls == 268 && pairs == 1;
  o.as_analyzed = o.pass;
  o.note = "guard_calls=" + std::to_string(calls) +
           " pairs=" + std::to_string(pairs);
  return o;
}

// 4. Sign-fixup guard constants at width 32. Each reference system is
// closed together with the representable range and compared per pattern
// against the synthesized (exhaustively confirmed at small widths)
// bounds. Three regions diverge: POP and NEN close one off the true
// optima on a few rows (NEN excludes the r0+r1 == -2^31 corner, which
// does execute), and the NOU entry transposes the two registers; 14 of
// the 72 bounds differ, so the criterion stays red.
Outcome criterion4(const Ctx&) {
  const Int W = pow2(31), M = pow2(31) - 1;
  struct Printed {
    const char* mode;
    std::vector<std::pair<int, Int>> rows;
  };
  const std::vector<Printed> printed = {
      {"OOU", {{4, W}, {5, -W}, {0, M}, {2, -1}, {1, M}, {3, -1}}},
      {"OON",
       {{4, 2 * W - 2}, {5, -(W + 1)}, {0, M}, {2, 0}, {1, M}, {3, 0}}},
      {"UOP",
       {{4, -W - 1}, {5, 2 * W - 1}, {0, -1}, {2, W}, {1, -1}, {3, W}}},
      {"UON", {{0, -W}, {2, W}, {1, -W}, {3, W}}},
      {"PEP", {{4, M}, {5, 0}, {1, M}, {3, 0}}},
      {"POP", {{4, M}, {5, 0}, {1, -1}, {3, W}}},
      {"NEN", {{4, -1}, {5, W - 1}, {1, -1}, {3, W}}},
      {"NOU", {{0, 0}, {2, 0}, {1, -W}, {3, W}}},
      {"NON", {{4, -1}, {5, W - 1}, {1, M}, {3, 0}}},
  };
  Block b = parse_block(corpus::kAddFixup);
  const auto tmpl = octagon_template(2);
  std::map<std::string, std::vector<int>> diffs;
  int compared = 0;
  for (const auto& p : printed) {
    Octagon oct(2);
    for (const auto& [row, bound] : p.rows) oct.constrain_row(tmpl[row], bound);
    oct.constrain_single(1, 0, M);
    oct.constrain_single(-1, 0, W);
    oct.constrain_single(1, 1, M);
    oct.constrain_single(-1, 1, W);
    Octagon closed = oct.closed();
    if (closed.is_bottom()) return {false, false, std::string(p.mode) + " closed to bottom"};
    Guard g = synth_guard(b, {0, 1}, 32, Interp::SIGNED, mv(p.mode));
    for (int k = 0; k < 8; ++k) {
      ++compared;
      ExtInt rb = closed.row_bound(tmpl[k]);
      if (!rb.finite() || rb.value != g.bounds[k]) diffs[p.mode].push_back(k);
    }
  }
  const std::map<std::string, std::vector<int>> known = {
      {"POP", {2, 3, 5, 6, 7}},
      {"NEN", {2, 5, 6}},
      {"NOU", {0, 1, 2, 3, 6, 7}},
  };
  Outcome o;
  o.pass = diffs.empty();
  o.as_analyzed = !o.pass && diffs == known;
  if (o.pass)
    o.note = "all 72 bounds match";
  else {
    int n = 0;
    for (const auto& [m, ks] : diffs) n += static_cast<int>(ks.size());
    o.note = std::to_string(compared - n) + "/72 bounds match; diverging:";
    for (const auto& [m, ks] : diffs)
      o.note += " " + m + "{" + join_ints(ks) + "}";
    if (o.as_analyzed)
      o.note += " (POP/NEN close one off the optimum, NOU swaps r0 and r1)";
  }
  return o;
}

// 5. Interval update systems of the sign-fixup block at width 32: per
// region, the r0' rows are the reference formulas (wrap constants plus
// or minus 2^32, the four constant regions, the four pass-through sums)
// and r1' is the identity, rows ordered upper/lower per output. The
// image of the UOP region on a narrow band is then checked end to end
// through the command line.
Outcome criterion5(const Ctx& c) {
  const Int W = pow2(31), F = pow2(32);
  Block b = parse_block(corpus::kAddFixup);
  SynthConfig cfg;
  cfg.width = 32;
  cfg.domain = Domain::INTERVAL;
  TransferFunction tf = synthesize(b, cfg);

  const UpdateRow id1 = row_of(1, {pat(1, 1)});
  const UpdateRow id3 = row_of(3, {pat(1, 3)});
  auto sum02 = [&](Int k) {
    return row_of(0, {pat(1, 0), pat(1, 1)}, std::move(k));
  };
  auto sum20 = [&](Int k) {
    return row_of(0, {pat(1, 2), pat(1, 3)}, std::move(k));
  };
  auto neg02 = [&](Int k) {
    return row_of(2, {pat(1, 0), pat(1, 1)}, std::move(k));
  };
  auto neg20 = [&](Int k) {
    return row_of(2, {pat(1, 2), pat(1, 3)}, std::move(k));
  };
  struct Sys {
    const char* mode;
    std::vector<UpdateRow> rows;
  };
  const std::vector<Sys> systems = {
      {"OOU", {row_of(0, {}, -W), row_of(2, {}, W), id1, id3}},
      {"OON", {sum20(F), neg02(-F), id1, id3}},
      {"UOP", {sum20(-F), neg02(F), id1, id3}},
      {"UON", {row_of(0, {}, 0), row_of(2, {}, 0), id1, id3}},
      {"PEP", {sum02(0), neg20(0), id1, id3}},
      {"POP", {sum20(0), neg02(0), id1, id3}},
      {"NEN", {sum02(0), neg20(0), id1, id3}},
      {"NOU", {row_of(0, {}, -W), row_of(2, {}, W), id1, id3}},
      {"NON", {sum20(0), neg02(0), id1, id3}},
  };
  std::vector<std::string> bad;
  for (const auto& sys : systems) {
    size_t i = pair_index(tf, mv(sys.mode));
    if (i == tf.pairs.size() || tf.pairs[i].rows != sys.rows)
      bad.push_back(sys.mode);
  }
  if (!bad.empty()) {
    Outcome o;
    o.note = "update rows differ:";
    for (const auto& m : bad) o.note += " " + m;
    return o;
  }

  spit(c.dir + "/fixup-interval.tf", to_text(tf));
  std::string out = c.dir + "/c5.out", err = c.dir + "/c5.err";
  if (run_cli(c,
              "apply " + c.dir + "/fixup-interval.tf --state "
              "'-2147483647 <= r0 <= -2147483644, -20 <= r1 <= -10'",
              out, err) != 0)
    return {false, false, "apply command failed"};
  const std::string want =
      "r0 in [-2147483642, -2147483629]\n"
      "r1 in [-20, -10]\n"
      "r0+r1 <= -2147483639\n"
      "-r0-r1 <= 2147483662\n"
      "-r0+r1 <= 2147483632\n"
      "r0-r1 <= -2147483609\n";
  std::string got = slurp(out);
  Outcome o;
  o.pass = got == want;
  o.as_analyzed = o.pass;
  o.note = o.pass ? "nine systems exact; UOP image [-2147483642, -2147483629]"
                  : "image mismatch: " + got.substr(0, 60);
  return o;
}

// 6. Exact octagonal rows of the add-then-double block in its wrap-free
// mode at width 32: all eight pattern rows decompose over the sum
// patterns, and the r0'+r1' row evaluates to 9 on the worked bounds
// where the summed unary form gives 11.
Outcome criterion6(const Ctx&) {
  Block b = parse_block(corpus::kAddShift);
  UpdateSession s(b, {0, 1}, 32, Interp::UNSIGNED, mv("EE"));
  const std::vector<UpdateRow> want = {
      row_of(0, {pat(2, 4)}),           row_of(1, {pat(1, 1)}),
      row_of(2, {pat(2, 5)}),           row_of(3, {pat(1, 3)}),
      row_of(4, {pat(1, 1), pat(2, 4)}), row_of(5, {pat(1, 3), pat(2, 5)}),
      row_of(6, {pat(1, 1), pat(2, 5)}), row_of(7, {pat(1, 3), pat(2, 4)}),
  };
  std::vector<UpdateRow> got = s.octagon_rows();
  if (got != want) return {false, false, "pair decomposition differs"};
  std::vector<ExtInt> d = {Int(4), Int(1), Int(0), Int(0),
                           Int(4), ExtInt::plus_inf(), ExtInt::plus_inf(),
                           ExtInt::plus_inf()};
  ExtInt tight = eval_expr(got[4].expr, d, {});
  ExtInt medium = eval_expr(s.medium_rows()[4].expr, d, {});
  Outcome o;
  o.pass = tight == ExtInt(Int(9)) && medium == ExtInt(Int(11));
  o.as_analyzed = o.pass;
  o.note = "r0'+r1' bound " + tight.str() + ", medium " + medium.str();
  return o;
}

// 7. The worked small blocks. The masked-add constant table and the
// product-block solved row check out, as does the cube evaluation. Two
// reference rows of the round-up table carry a +15 the block cannot
// produce (both sides collapse to a pure input pattern with offset 0),
// and five pair rows of the product block print the least corner with a
// positive sign where soundness requires the negative one; those keep
// the criterion red.
Outcome criterion7(const Ctx&) {
  std::vector<std::string> wrong;

  // masked add: every pattern bound is a constant
  {
    Block b = parse_block(corpus::kMaskedAdd);
    SynthConfig cfg;
    cfg.width = 32;
    cfg.strategy = Strategy::BOUNDS;
    TransferFunction tf = synthesize(b, cfg);
    const std::vector<Int> want = {30, 15, 0, 0, 45, 0, 0, 15};
    bool ok = tf.pairs.size() == 1 && tf.pairs[0].modes == mv("P") &&
              tf.pairs[0].rows.size() == 8;
    for (int k = 0; ok && k < 8; ++k) {
      const UpdateRow& r = tf.pairs[0].rows[k];
      ok = r.pattern == k && r.kind == RowKind::CONST &&
           r.expr.constant == want[k];
    }
    if (!ok) wrong.push_back("masked-add constants");
  }

  // round-up block: reference entry present among the row's choices
  int roundup_diffs = 0;
  std::vector<int> roundup_at;
  {
    Block b = parse_block(corpus::kAlign16);
    UpdateSession s(b, {0, 1}, 32, Interp::SIGNED, mv("NP"));
    const std::vector<UpdateExpr> printed = {
        expr({pat(1, 0)}, 15), expr({}, 15),          expr({pat(1, 2)}, 0),
        expr({}, 0),           expr({pat(1, 0)}, 30), expr({pat(1, 2)}, 0),
        expr({pat(1, 2)}, 15), expr({pat(1, 0)}, 15),
    };
    std::vector<UpdateRow> rows = s.octagon_rows();
    for (int k = 0; k < 8; ++k) {
      bool found = false;
      if (rows[k].kind == RowKind::MINEXPR) {
        for (const auto& ch : rows[k].choices)
          if (ch == printed[k]) found = true;
      } else {
        found = rows[k].expr == printed[k];
      }
      if (!found) {
        ++roundup_diffs;
        roundup_at.push_back(k);
      }
    }
  }

  // product block: solved row, pair rows, cube evaluation
  int product_diffs = 0;
  std::vector<int> product_at;
  {
    Block b = parse_block(corpus::kMulAcc);
    UpdateSession s(b, {0, 1, 2}, 32, Interp::SIGNED, mv("PP"),
                    {Monomial{{0, 2}}});
    if (!(s.solved().size() == 3 && s.solved()[0] &&
          *s.solved()[0] == SolvedUpdate{1, {0, 1, 0, 1}, 0} &&
          s.solved()[1] &&
          *s.solved()[1] == SolvedUpdate{1, {0, 1, 0, 0}, 0} &&
          s.solved()[2] &&
          *s.solved()[2] == SolvedUpdate{1, {0, 0, 1, 0}, 0}))
      wrong.push_back("product solved rows");

    std::vector<UpdateRow> derived = {
        row_of(0, {pat(1, 1), amax(1, 0)}),
        row_of(1, {pat(1, 1)}),
        row_of(2, {pat(1, 2)}),
        row_of(3, {pat(1, 4), amin(-1, 0)}),
        row_of(4, {pat(1, 4)}),
        row_of(5, {pat(1, 5)}),
        row_of(6, {pat(2, 1), amax(1, 0)}),
        row_of(7, {pat(2, 4), amin(-1, 0)}),
        row_of(8, {pat(1, 1), pat(1, 4), amin(-1, 0)}),
        row_of(9, {pat(1, 1), pat(1, 4), amax(1, 0)}),
        row_of(10, {pat(1, 1), pat(1, 2), amax(1, 0)}),
        row_of(11, {pat(1, 4), pat(1, 5), amin(-1, 0)}),
        row_of(12, {pat(1, 2), pat(1, 4), amin(-1, 0)}),
        row_of(13, {pat(1, 1), pat(1, 5), amax(1, 0)}),
        row_of(14, {pat(1, 14)}),
        row_of(15, {pat(1, 15)}),
        row_of(16, {pat(1, 16)}),
        row_of(17, {pat(1, 17)}),
    };
    std::vector<UpdateRow> rows = s.octagon_rows();
    if (rows != derived) {
      wrong.push_back("product pair rows differ from the derived system");
    } else {
      std::vector<UpdateRow> reference = derived;
      for (int k : {3, 7, 8, 11, 12})
        for (auto& t : reference[k].expr.terms)
          if (t.sym == Sym::AGG_MIN) t.coeff = 1;
      for (int k = 0; k < 18; ++k)
        if (rows[k] != reference[k]) {
          ++product_diffs;
          product_at.push_back(k);
        }
    }

    // cube: r0, r2 in [2,3] so the corner products span [4,9]
    std::vector<ExtInt> d(18, ExtInt::plus_inf());
    d[0] = Int(3); d[1] = Int(3); d[2] = Int(3);
    d[3] = Int(-2); d[4] = Int(-2); d[5] = Int(-2);
    ExtInt r0p = eval_expr(rows[0].expr, d, {{Int(9), Int(4)}});
    if (r0p != ExtInt(Int(12)))
      wrong.push_back("cube bound " + r0p.str());
  }

  Outcome o;
  o.pass = wrong.empty() && roundup_diffs == 0 && product_diffs == 0;
  o.as_analyzed = wrong.empty() && roundup_at == std::vector<int>{6, 7} &&
                  product_at == std::vector<int>{3, 7, 8, 11, 12};
  if (o.pass) {
    o.note = "all reference rows match";
  } else {
    o.note = "constants, solved row and cube bound check out" +
             std::string(wrong.empty() ? "" : " except:");
    for (const auto& w : wrong) o.note += " " + w + ";";
    o.note += "; round-up rows differ at {" + join_ints(roundup_at) +
              "}, product rows at {" + join_ints(product_at) + "}";
    if (o.as_analyzed)
      o.note += " (the known +15 and least-corner sign divergences)";
  }
  return o;
}

// 8. Exhaustive cross-checks at widths 4..6 for the whole corpus, both
// interpretations: census, every guard bound, and every affine hull
// against the sweeping oracles, then randomized image soundness at
// width 6 with 1000 octagons per block.
Outcome criterion8(const Ctx&) {
  std::vector<std::string> bad;
  uint64_t points = 0;
  for (const auto& nb : corpus::kAll) {
    Block b = parse_block(nb.text);
    for (Interp interp : {Interp::SIGNED, Interp::UNSIGNED}) {
      const char* iname = interp == Interp::SIGNED ? "signed" : "unsigned";
      for (int w : {4, 5, 6}) {
        auto vecs = enumerate_modes(b, w, interp);
        std::set<ModeVector> got(vecs.begin(), vecs.end());
        std::set<ModeVector> want = brute_modes(b, w, interp);
        if (got != want) {
          bad.push_back(std::string(nb.name) + " w=" + std::to_string(w) +
                        " " + iname + " census");
          continue;
        }
        for (const auto& m : got) {
          auto bg = brute_guard_bounds(b, b.live_in, w, interp, m);
          Guard g = synth_guard(b, b.live_in, w, interp, m);
          if (!bg || g.bounds != *bg)
            bad.push_back(std::string(nb.name) + " w=" + std::to_string(w) +
                          " " + iname + " guard " +
                          (m.empty() ? "-" : mode_string(m)));
          UpdateSession s(b, b.live_in, w, interp, m);
          auto bh = brute_hull(b, b.live_in, w, interp, m);
          if (!bh || s.hull().constraints() != *bh)
            bad.push_back(std::string(nb.name) + " w=" + std::to_string(w) +
                          " " + iname + " hull " +
                          (m.empty() ? "-" : mode_string(m)));
        }
      }
      SynthConfig cfg;
      cfg.width = 6;
      cfg.interp = interp;
      TransferFunction tf = synthesize(b, cfg);
      CheckReport rep = check_tf(tf, 1000, 7);
      points += rep.points;
      if (!rep.ok() || rep.samples != 1000)
        bad.push_back(std::string(nb.name) + " " + iname + " image check: " +
                      (rep.notes.empty() ? "violations" : rep.notes[0]));
    }
  }
  Outcome o;
  o.pass = bad.empty();
  o.as_analyzed = o.pass;
  if (o.pass) {
    o.note = "census, guards and hulls agree at widths 4..6; 16 image "
             "checks clean over " + std::to_string(points) + " states";
  } else {
    o.note = std::to_string(bad.size()) + " disagreements:";
    for (size_t i = 0; i < bad.size() && i < 4; ++i) o.note += " " + bad[i] + ";";
  }
  return o;
}

// 9. Solver against the bit-parallel truth table on 10,000 random
// formulas of up to 20 variables.
Outcome criterion9(const Ctx&) {
  satfuzz::FuzzReport rep = satfuzz::run_sat_fuzz(10000, 0xC0FFEE);
  Outcome o;
  o.pass = rep.formulas == 10000 && rep.disagreements == 0 &&
           rep.bad_models == 0;
  o.as_analyzed = o.pass;
  o.note = std::to_string(rep.formulas) + " formulas, " +
           std::to_string(rep.sat_count) + " satisfiable, " +
           std::to_string(rep.disagreements) + " disagreements, " +
           std::to_string(rep.bad_models) + " bad models";
  if (!o.pass && !rep.first_failure.empty())
    o.note += "; first: " + rep.first_failure;
  return o;
}

// 10. Two consecutive synthesis runs print byte-identical JSON, once for
// the sign-fixup interval system and once for the add-then-double
// octagon system.
Outcome criterion10(const Ctx& c) {
  struct Job {
    const char* name;
    std::string args;
  };
  const std::vector<Job> jobs = {
      {"fixup", "synth " + c.dir + "/fixup.blk --width 32 --signed "
                                   "--domain interval --format json"},
      {"addshift", "synth " + c.dir + "/addshift.blk --width 32 --unsigned "
                                      "--domain octagon --format json"},
  };
  for (const auto& j : jobs) {
    std::string a = c.dir + "/c10-" + j.name + "-a.out";
    std::string b = c.dir + "/c10-" + j.name + "-b.out";
    std::string err = c.dir + "/c10.err";
    if (run_cli(c, j.args, a, err) != 0 || run_cli(c, j.args, b, err) != 0)
      return {false, false, std::string(j.name) + " synth failed"};
    std::string ja = slurp(a);
    if (ja.empty() || ja[0] != '{' || ja != slurp(b))
      return {false, false, std::string(j.name) + " runs differ"};
  }
  return {true, true, "both blocks byte-identical across runs"};
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--cli" && i + 1 < argc) cli = argv[++i];
  }
  if (cli.empty()) {
    std::cerr << "usage: acceptance_tests --cli PATH\n";
    return 64;
  }
  char tmpl[] = "/tmp/tfsynth-accept-XXXXXX";
  if (!mkdtemp(tmpl)) {
    std::cerr << "cannot create work directory\n";
    return 64;
  }
  Ctx ctx{cli, tmpl};
  spit(ctx.dir + "/fixup.blk", corpus::kAddFixup);
  spit(ctx.dir + "/inc.blk", corpus::kInc);
  spit(ctx.dir + "/masked.blk", corpus::kMaskedAdd);
  spit(ctx.dir + "/addshift.blk", corpus::kAddShift);

  struct Criterion {
    int id;
    const char* title;
    double limit;  // seconds, 0 = none stated
    std::function<Outcome(const Ctx&)> fn;
  };
  const std::vector<Criterion> criteria = {
      {1, "mode census of the sign-fixup block at width 32", 60, criterion1},
      {2, "increment guards and probe count at width 32", 10, criterion2},
      {3, "octagonal guard probe budget at width 32", 0, criterion3},
      {4, "sign-fixup guard constants at width 32", 300, criterion4},
      {5, "interval update systems and the UOP image", 0, criterion5},
      {6, "exact octagonal rows of the add-then-double block", 0, criterion6},
      {7, "constant, round-up and product block updates", 0, criterion7},
      {8, "small-width exhaustive cross-checks", 900, criterion8},
      {9, "solver agreement with a truth table", 0, criterion9},
      {10, "byte-identical repeated synthesis", 0, criterion10},
  };

  int passed = 0, unexpected = 0;
  std::vector<int> failed;
  for (const auto& cr : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = cr.fn(ctx);
    } catch (const std::exception& e) {
      o = {false, false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    if (cr.limit > 0 && secs > cr.limit) {
      o.pass = false;
      o.as_analyzed = false;
      o.note += "; over the " + std::to_string(static_cast<int>(cr.limit)) +
                "s limit";
    }
    char timing[32];
    std::snprintf(timing, sizeof timing, "%.1fs", secs);
    std::cout << (o.pass ? "[PASS]" : "[FAIL]") << " criterion " << cr.id
              << ": " << cr.title << " (" << timing << ")"
              << (o.note.empty() ? "" : ": " + o.note) << "\n";
    if (o.pass) ++passed;
    else failed.push_back(cr.id);
    if (!o.as_analyzed) ++unexpected;
  }
  std::cout << "acceptance: " << passed << " of " << criteria.size()
            << " criteria pass";
  if (!failed.empty()) {
    std::cout << "; red:";
    for (int id : failed) std::cout << " " << id;
    std::cout << (unexpected == 0
                      ? " (every red line matches its recorded divergence)"
                      : "");
  }
  if (unexpected > 0)
    std::cout << "; " << unexpected << " outcome(s) deviate from the "
              << "recorded expectations";
  std::cout << "\n";
  return unexpected;
}
