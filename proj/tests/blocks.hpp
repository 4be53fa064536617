#pragma once

// Shared corpus of basic blocks used across the tests. Kept as source
// text so every test exercises the parser on its way in.

namespace corpus {

// Signed-magnitude fixup: r0' = |r0+r1| sign-adjusted through a masked
// negation; three multi-modal instructions (ADD, LSL, ADD).
inline constexpr const char* kAddFixup =
    "ADD R0 R1\n"
    "MOV R2 R0\n"
    "EOR R2 R1\n"
    "LSL R2\n"
    "SBC R2 R2\n"
    "ADD R0 R2\n"
    "EOR R0 R2\n";

inline constexpr const char* kInc = "INC R0\n";

inline constexpr const char* kAddShift =
    "ADD R0 R1\n"
    "LSL R0\n";

inline constexpr const char* kMaskedAdd =
    "AND R0 15\n"
    "AND R1 15\n"
    "XOR R0 R1\n"
    "ADD R0 R1\n";

// Round r0 up to the next multiple of 16; r1 receives the pad count.
inline constexpr const char* kAlign16 =
    "MOV R1 R0\n"
    "NEG R1\n"
    "AND R1 15\n"
    "ADD R0 R1\n";

inline constexpr const char* kMulAcc =
    "MUL R0 R2\n"
    "ADD R0 R1\n";

inline constexpr const char* kXorSwap =
    "EOR R0 R1\n"
    "EOR R1 R0\n"
    "EOR R0 R1\n";

inline constexpr const char* kIncShift =
    "INC R0\n"
    "LSL R0\n";

struct NamedBlock {
  const char* name;
  const char* text;
};

inline constexpr NamedBlock kAll[] = {
    {"add_fixup", kAddFixup}, {"inc", kInc},
    {"add_shift", kAddShift}, {"masked_add", kMaskedAdd},
    {"align16", kAlign16},    {"mul_acc", kMulAcc},
    {"xor_swap", kXorSwap},   {"inc_shift", kIncShift},
};

}  // namespace corpus
