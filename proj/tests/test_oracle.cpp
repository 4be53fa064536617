#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "blocks.hpp"
#include "doctest.h"
#include "tfs/oracle.hpp"

using namespace tfs;

namespace {

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

}  // namespace

TEST_CASE("exhaustive mode census") {
  CHECK(brute_modes(parse_block("ADD R0 R1\n"), 4, Interp::SIGNED) ==
        std::set<ModeVector>{mv("O"), mv("U"), mv("P"), mv("N")});
  CHECK(brute_modes(parse_block(corpus::kInc), 4, Interp::UNSIGNED) ==
        std::set<ModeVector>{mv("O"), mv("E")});
  CHECK(brute_modes(parse_block(corpus::kXorSwap), 4, Interp::SIGNED) ==
        std::set<ModeVector>{ModeVector{}});
  CHECK(brute_modes(parse_block(corpus::kMaskedAdd), 8, Interp::SIGNED) ==
        std::set<ModeVector>{mv("P")});
  CHECK(brute_modes(parse_block(corpus::kAddShift), 4, Interp::SIGNED) ==
        std::set<ModeVector>{mv("OO"), mv("UE"), mv("PE"), mv("NO")});
}

TEST_CASE("exhaustive guard bounds on the fixup block") {
  Block b = parse_block(corpus::kAddFixup);
  auto oou = brute_guard_bounds(b, {0, 1}, 4, Interp::SIGNED, mv("OOU"));
  REQUIRE(oou);
  CHECK(*oou == std::vector<Int>{7, 7, -1, -1, 8, -8, 6, 6});

  auto pon = brute_guard_bounds(b, {0, 1}, 4, Interp::SIGNED, mv("PON"));
  REQUIRE(pon);
  CHECK(*pon == std::vector<Int>{7, -1, -1, 7, 0, 0, -2, 14});

  auto nou = brute_guard_bounds(b, {0, 1}, 4, Interp::SIGNED, mv("NOU"));
  REQUIRE(nou);
  CHECK(*nou == std::vector<Int>{-8, 0, 8, 0, -8, 8, 8, -8});

  CHECK(!brute_guard_bounds(b, {0, 1}, 4, Interp::SIGNED, mv("PPP")));
}

TEST_CASE("exhaustive affine hulls") {
  auto h = brute_hull(parse_block(corpus::kAddShift), {0, 1}, 4,
                      Interp::UNSIGNED, mv("EE"));
  REQUIRE(h);
  CHECK(*h == std::vector<AffineRow>{AffineRow{{1, 0, -2, -2}, Int(0)},
                                     AffineRow{{0, 1, 0, -1}, Int(0)}});

  auto m = brute_hull(parse_block(corpus::kMulAcc), {0, 1, 2}, 4,
                      Interp::SIGNED, mv("PP"), {Monomial{{0, 2}}});
  REQUIRE(m);
  REQUIRE(m->size() == 3);
  CHECK((*m)[0] == AffineRow{{1, 0, 0, 0, -1, 0, -1}, Int(0)});
  CHECK((*m)[1] == AffineRow{{0, 1, 0, 0, -1, 0, 0}, Int(0)});
  CHECK((*m)[2] == AffineRow{{0, 0, 1, 0, 0, -1, 0}, Int(0)});

  CHECK(!brute_hull(parse_block(corpus::kAddShift), {0, 1}, 4, Interp::SIGNED,
                    mv("PP")));
}

TEST_CASE("randomized image check accepts a sound function, flags tampering") {
  Block b = parse_block(corpus::kInc);
  SynthConfig cfg;
  cfg.width = 6;
  cfg.interp = Interp::UNSIGNED;
  cfg.domain = Domain::INTERVAL;
  TransferFunction tf = synthesize(b, cfg);
  REQUIRE(tf.pairs.size() == 2);

  auto rep = check_tf(tf, 200, 17);
  CHECK(rep.ok());
  CHECK(rep.samples == 200);
  CHECK(rep.points > 0);

  TransferFunction loose = tf;
  loose.pairs[1].guard.bounds[0] += 1;
  auto lr = check_tf(loose, 20, 17);
  CHECK(!lr.ok());
  CHECK(lr.attainment_violations > 0);
  CHECK(!lr.notes.empty());

  TransferFunction tight = tf;
  tight.pairs[1].rows[0].expr.constant -= 1;
  auto tr = check_tf(tight, 200, 17);
  CHECK(!tr.ok());
  CHECK(tr.soundness_violations > 0);
}

TEST_CASE("untracked live-in sweeps are size-capped") {
  TransferFunction tf;
  tf.block = parse_block(corpus::kMulAcc);
  tf.width = 32;
  tf.interp = Interp::SIGNED;
  tf.regs = {0, 1};
  CHECK_THROWS_AS(check_tf(tf, 1, 0), std::invalid_argument);
}

TEST_CASE("check report serializes") {
  CheckReport r;
  r.samples = 3;
  r.points = 12;
  r.notes.push_back("mode E: guard row 0 is 5, sweep gives 4");
  std::string j = check_report_json(r);
  CHECK(j.find("\"samples\": 3") != std::string::npos);
  CHECK(j.find("\"ok\": true") != std::string::npos);
  CHECK(j.find("sweep gives 4") != std::string::npos);

  r.soundness_violations = 1;
  CHECK(check_report_json(r).find("\"ok\": false") != std::string::npos);
}
