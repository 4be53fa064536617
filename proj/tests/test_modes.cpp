#include <set>

#include "blocks.hpp"
#include "doctest.h"
#include "tfs/modes.hpp"
#include "tfs/oracle.hpp"

using namespace tfs;

namespace {

std::set<ModeVector> as_set(const std::vector<ModeVector>& v) {
  return {v.begin(), v.end()};
}

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

TEST_CASE("fixup block census is ten vectors") {
  Block b = parse_block(corpus::kAddFixup);
  std::vector<ModeVector> expect = {
      mv("OOU"), mv("OON"), mv("UOP"), mv("UON"), mv("POP"),
      mv("PON"), mv("PEP"), mv("NOU"), mv("NON"), mv("NEN"),
  };

  for (int w : {4, 5, 32}) {
    CAPTURE(w);
    ModeStats st;
    std::vector<ModeVector> got = enumerate_modes(b, w, Interp::SIGNED, &st);
    CHECK(got == expect);
    // 4 roots + 8 second-level probes + 24 leaf probes.
    CHECK(st.solver_calls == 36);
    CHECK(st.conflicts > 0);
  }

  CHECK(as_set(enumerate_modes(b, 4, Interp::SIGNED)) ==
        brute_modes(b, 4, Interp::SIGNED));
  CHECK(as_set(enumerate_modes(b, 6, Interp::SIGNED)) ==
        brute_modes(b, 6, Interp::SIGNED));
}

TEST_CASE("flat enumeration agrees with the tree") {
  Block b = parse_block(corpus::kAddFixup);
  ModeStats tree_st, flat_st;
  auto tree = enumerate_modes(b, 5, Interp::SIGNED, &tree_st);
  auto flat = enumerate_modes_flat(b, 5, Interp::SIGNED, &flat_st);
  CHECK(tree == flat);
  CHECK(flat_st.solver_calls == 32);  // 4 * 2 * 4 full vectors
  CHECK(tree_st.solver_calls == 36);
}

TEST_CASE("shifted sum splits by interpretation") {
  Block b = parse_block(corpus::kAddShift);
  auto sg = enumerate_modes(b, 4, Interp::SIGNED);
  CHECK(sg == std::vector<ModeVector>{mv("OO"), mv("UE"), mv("PE"), mv("NO")});
  CHECK(as_set(sg) == brute_modes(b, 4, Interp::SIGNED));

  auto us = enumerate_modes(b, 4, Interp::UNSIGNED);
  CHECK(as_set(us) == brute_modes(b, 4, Interp::UNSIGNED));
  // Doubling a wrapped sum can stay in range or wrap again; all four occur.
  CHECK(us == std::vector<ModeVector>{mv("OO"), mv("OE"), mv("EO"), mv("EE")});
}

TEST_CASE("increment census") {
  Block b = parse_block(corpus::kInc);
  CHECK(enumerate_modes(b, 8, Interp::SIGNED) ==
        std::vector<ModeVector>{mv("O"), mv("P"), mv("N")});
  ModeStats st;
  CHECK(enumerate_modes(b, 8, Interp::UNSIGNED, &st) ==
        std::vector<ModeVector>{mv("O"), mv("E")});
  CHECK(st.solver_calls == 2);
}

TEST_CASE("masked add saturates below the sign bit") {
  Block b = parse_block(corpus::kMaskedAdd);
  CHECK(enumerate_modes(b, 8, Interp::SIGNED) ==
        std::vector<ModeVector>{mv("P")});
  // At width 5 the masked sum can pass 15, so overflow appears.
  CHECK(enumerate_modes(b, 5, Interp::SIGNED) ==
        std::vector<ModeVector>{mv("O"), mv("P")});
}

TEST_CASE("blocks without multi-modal instructions have one empty vector") {
  Block b = parse_block(corpus::kXorSwap);
  ModeStats st;
  auto got = enumerate_modes(b, 8, Interp::SIGNED, &st);
  REQUIRE(got.size() == 1);
  CHECK(got[0].empty());
  CHECK(st.solver_calls == 0);
  CHECK(brute_modes(b, 4, Interp::SIGNED) == as_set(got));
}

TEST_CASE("pruned prefixes cost one probe each") {
  // Unsigned ADD has modes O and E only; INC of the masked value cannot
  // overflow, so the probe count stays at the prefix level.
  Block b = parse_block("AND R0 3\nINC R0");
  ModeStats st;
  auto got = enumerate_modes(b, 8, Interp::UNSIGNED, &st);
  CHECK(got == std::vector<ModeVector>{mv("E")});
  CHECK(st.solver_calls == 2);  // O probe fails, E probe succeeds
}
