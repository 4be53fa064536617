#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tfs/bignum.hpp"

namespace tfs {

enum class Opcode { ADD, SBC, MOV, EOR, AND, LSL, NEG, INC, MUL };

enum class Interp { SIGNED, UNSIGNED };

// Operating modes of an instruction run. O/U are the wrap-around modes,
// P/N the exact modes split on the result sign, E the unsplit exact mode.
enum class Mode : uint8_t { O, U, P, N, E };

char mode_char(Mode m);
std::string mode_string(const std::vector<Mode>& mv);

struct Instruction {
  Opcode op;
  int dst = 0;
  std::optional<int> src;        // source register
  std::optional<uint64_t> imm;   // immediate (AND only), truncated at use
  int line = 0;
};

struct Block {
  std::vector<Instruction> instrs;
  std::vector<int> universe;  // referenced registers, ascending
  std::vector<int> live_in;   // registers read before being written, ascending
};

struct ParseError : std::runtime_error {
  int line;
  ParseError(int line_, const std::string& what_)
      : std::runtime_error("line " + std::to_string(line_) + ": " + what_),
        line(line_) {}
};

// Newline- or ';'-separated instructions, '#' comments, case-insensitive
// mnemonics and registers R0..R7, decimal or 0x immediates (AND only).
// XOR is accepted as an alias of EOR. Throws ParseError.
Block parse_block(const std::string& text);

std::string opcode_name(Opcode op);

// The ordered mode alphabet of one instruction under the given
// interpretation. Uni-modal instructions have a single-letter alphabet.
// SBC with equal registers is uni-modal: the result is 0 or -1 regardless
// of operands, so no wrap or sign split can occur.
std::vector<Mode> modality(const Instruction& ins, Interp interp);

inline bool multi_modal(const Instruction& ins, Interp interp) {
  return modality(ins, interp).size() > 1;
}

// Indices of the multi-modal instructions, in block order. A mode vector
// assigns one mode per entry of this list.
std::vector<int> multi_modal_indices(const Block& b, Interp interp);

using ModeVector = std::vector<Mode>;

struct MachineState {
  std::array<uint64_t, 8> regs{};
  int carry = 0;  // 1 = borrow for SBC
};

struct ExecResult {
  MachineState out;
  std::vector<Mode> instr_modes;  // one per instruction
  ModeVector modes;               // multi-modal instructions only
};

// True when some SBC reads the carry flag before any instruction in the
// block has written it; the incoming flag is then a free block input.
bool carry_in_free(const Block& b);

// Wrap-around (mod 2^w) execution with per-instruction mode
// classification from the ideal integer result. Throws std::invalid_argument
// for widths outside [4, 64].
ExecResult execute_concrete(const Block& b, unsigned w, Interp interp,
                            const MachineState& in);

// Signed/unsigned reading of a w-bit value.
Int reg_value(uint64_t raw, unsigned w, Interp interp);

// Low w bits of v.
uint64_t truncate_to_width(uint64_t v, unsigned w);

}  // namespace tfs
