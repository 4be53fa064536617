#include "tfs/isa.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace tfs {

char mode_char(Mode m) {
  switch (m) {
    case Mode::O: return 'O';
    case Mode::U: return 'U';
    case Mode::P: return 'P';
    case Mode::N: return 'N';
    case Mode::E: return 'E';
  }
  return '?';
}

std::string mode_string(const std::vector<Mode>& mv) {
  std::string s;
  for (Mode m : mv) s.push_back(mode_char(m));
  return s;
}

std::string opcode_name(Opcode op) {
  switch (op) {
    case Opcode::ADD: return "ADD";
    case Opcode::SBC: return "SBC";
    case Opcode::MOV: return "MOV";
    case Opcode::EOR: return "EOR";
    case Opcode::AND: return "AND";
    case Opcode::LSL: return "LSL";
    case Opcode::NEG: return "NEG";
    case Opcode::INC: return "INC";
    case Opcode::MUL: return "MUL";
  }
  return "?";
}

namespace {

struct OpInfo {
  Opcode op;
  bool has_src;    // takes a source operand
  bool allow_imm;  // source may be an immediate
};

std::optional<OpInfo> lookup_op(const std::string& upper) {
  if (upper == "ADD") return OpInfo{Opcode::ADD, true, false};
  if (upper == "SBC") return OpInfo{Opcode::SBC, true, false};
  if (upper == "MOV") return OpInfo{Opcode::MOV, true, false};
  if (upper == "EOR" || upper == "XOR") return OpInfo{Opcode::EOR, true, false};
  if (upper == "AND") return OpInfo{Opcode::AND, true, true};
  if (upper == "LSL") return OpInfo{Opcode::LSL, false, false};
  if (upper == "NEG") return OpInfo{Opcode::NEG, false, false};
  if (upper == "INC") return OpInfo{Opcode::INC, false, false};
  if (upper == "MUL") return OpInfo{Opcode::MUL, true, false};
  return std::nullopt;
}

std::optional<int> parse_reg(const std::string& tok) {
  if (tok.size() != 2) return std::nullopt;
  if (tok[0] != 'r' && tok[0] != 'R') return std::nullopt;
  if (tok[1] < '0' || tok[1] > '9') return std::nullopt;
  int n = tok[1] - '0';
  if (n > 7) return std::nullopt;
  return n;
}

std::optional<uint64_t> parse_literal(const std::string& tok) {
  if (tok.empty()) return std::nullopt;
  uint64_t v = 0;
  if (tok.size() > 2 && tok[0] == '0' && (tok[1] == 'x' || tok[1] == 'X')) {
    for (size_t i = 2; i < tok.size(); ++i) {
      char c = static_cast<char>(std::tolower(tok[i]));
      int d;
      if (c >= '0' && c <= '9') d = c - '0';
      else if (c >= 'a' && c <= 'f') d = c - 'a' + 10;
      else return std::nullopt;
      if (v >> 60) return std::nullopt;  // overflow guard
      v = v * 16 + static_cast<uint64_t>(d);
    }
    return v;
  }
  for (char c : tok) {
    if (c < '0' || c > '9') return std::nullopt;
    if (v > (UINT64_MAX - 9) / 10) return std::nullopt;
    v = v * 10 + static_cast<uint64_t>(c - '0');
  }
  return v;
}

// Registers read by an instruction, before its write takes effect.
std::vector<int> reads_of(const Instruction& ins) {
  switch (ins.op) {
    case Opcode::ADD:
    case Opcode::SBC:
    case Opcode::EOR:
    case Opcode::MUL:
      return {ins.dst, *ins.src};
    case Opcode::AND:
      if (ins.src) return {ins.dst, *ins.src};
      return {ins.dst};
    case Opcode::MOV:
      return {*ins.src};
    case Opcode::LSL:
    case Opcode::NEG:
    case Opcode::INC:
      return {ins.dst};
  }
  return {};
}

bool writes_carry(Opcode op) {
  return op == Opcode::ADD || op == Opcode::SBC || op == Opcode::LSL ||
         op == Opcode::NEG;
}

}  // namespace

Block parse_block(const std::string& text) {
  Block block;
  std::set<int> universe, live, written;
  int line_no = 0;
  std::istringstream lines(text);
  std::string line;
  while (std::getline(lines, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos)
      line = line.substr(0, hash);
    std::istringstream stmts(line);
    std::string stmt;
    while (std::getline(stmts, stmt, ';')) {
      std::vector<std::string> toks;
      std::string tok;
      for (char c : stmt) {
        if (std::isspace(static_cast<unsigned char>(c)) || c == ',') {
          if (!tok.empty()) toks.push_back(tok), tok.clear();
        } else {
          tok.push_back(c);
        }
      }
      if (!tok.empty()) toks.push_back(tok);
      if (toks.empty()) continue;

      std::string upper = toks[0];
      std::transform(upper.begin(), upper.end(), upper.begin(),
                     [](unsigned char c) { return std::toupper(c); });
      auto info = lookup_op(upper);
      if (!info) throw ParseError(line_no, "unknown opcode '" + toks[0] + "'");

      Instruction ins;
      ins.op = info->op;
      ins.line = line_no;
      size_t want = info->has_src ? 3 : 2;
      if (toks.size() < want)
        throw ParseError(line_no, upper + ": missing operand");
      if (toks.size() > want)
        throw ParseError(line_no, upper + ": too many operands");

      auto dst = parse_reg(toks[1]);
      if (!dst)
        throw ParseError(line_no, upper + ": bad destination register '" +
                                      toks[1] + "'");
      ins.dst = *dst;

      if (info->has_src) {
        if (auto r = parse_reg(toks[2])) {
          ins.src = *r;
        } else if (auto lit = parse_literal(toks[2])) {
          if (!info->allow_imm)
            throw ParseError(line_no,
                             upper + ": immediate operand not allowed");
          ins.imm = *lit;
        } else {
          throw ParseError(line_no,
                           upper + ": bad source operand '" + toks[2] + "'");
        }
      }

      universe.insert(ins.dst);
      if (ins.src) universe.insert(*ins.src);
      for (int r : reads_of(ins))
        if (!written.count(r)) live.insert(r);
      written.insert(ins.dst);
      block.instrs.push_back(ins);
    }
  }
  if (block.instrs.empty()) throw ParseError(line_no, "empty block");
  block.universe.assign(universe.begin(), universe.end());
  block.live_in.assign(live.begin(), live.end());
  return block;
}

std::vector<Mode> modality(const Instruction& ins, Interp interp) {
  bool sig = interp == Interp::SIGNED;
  switch (ins.op) {
    case Opcode::MOV:
    case Opcode::EOR:
    case Opcode::AND:
      return {Mode::E};
    case Opcode::LSL:
      return {Mode::O, Mode::E};
    case Opcode::INC:
      return sig ? std::vector<Mode>{Mode::O, Mode::P, Mode::N}
                 : std::vector<Mode>{Mode::O, Mode::E};
    case Opcode::SBC:
      if (ins.src && *ins.src == ins.dst) return {Mode::E};
      return sig ? std::vector<Mode>{Mode::O, Mode::U, Mode::P, Mode::N}
                 : std::vector<Mode>{Mode::U, Mode::E};
    case Opcode::NEG:
      return sig ? std::vector<Mode>{Mode::O, Mode::U, Mode::P, Mode::N}
                 : std::vector<Mode>{Mode::U, Mode::E};
    case Opcode::ADD:
    case Opcode::MUL:
      return sig ? std::vector<Mode>{Mode::O, Mode::U, Mode::P, Mode::N}
                 : std::vector<Mode>{Mode::O, Mode::E};
  }
  return {Mode::E};
}

std::vector<int> multi_modal_indices(const Block& b, Interp interp) {
  std::vector<int> out;
  for (size_t i = 0; i < b.instrs.size(); ++i)
    if (multi_modal(b.instrs[i], interp)) out.push_back(static_cast<int>(i));
  return out;
}

bool carry_in_free(const Block& b) {
  for (const auto& ins : b.instrs) {
    if (ins.op == Opcode::SBC) return true;
    if (writes_carry(ins.op)) return false;
  }
  return false;
}

uint64_t truncate_to_width(uint64_t v, unsigned w) {
  return w >= 64 ? v : (v & ((uint64_t(1) << w) - 1));
}

Int reg_value(uint64_t raw, unsigned w, Interp interp) {
  Int v = raw;
  if (interp == Interp::SIGNED && ((raw >> (w - 1)) & 1)) v -= pow2(w);
  return v;
}

namespace {

// Classification of one ideal result against the representable range.
// Signed interpretations split the exact case on the stored result's sign
// bit; unsigned ones do not.
Mode classify(const Int& ideal, uint64_t stored, unsigned w, Interp interp) {
  if (interp == Interp::SIGNED) {
    Int lo = -pow2(w - 1), hi = pow2(w - 1) - 1;
    if (ideal > hi) return Mode::O;
    if (ideal < lo) return Mode::U;
    return ((stored >> (w - 1)) & 1) ? Mode::N : Mode::P;
  }
  if (ideal > pow2(w) - 1) return Mode::O;
  if (ideal < 0) return Mode::U;
  return Mode::E;
}

}  // namespace

ExecResult execute_concrete(const Block& b, unsigned w, Interp interp,
                            const MachineState& in) {
  if (w < 4 || w > 64)
    throw std::invalid_argument("width must be in [4, 64]");
  ExecResult res;
  MachineState st = in;
  for (int r = 0; r < 8; ++r) st.regs[r] = truncate_to_width(st.regs[r], w);

  for (const auto& ins : b.instrs) {
    uint64_t d = st.regs[ins.dst];
    uint64_t s = 0;
    if (ins.src) s = st.regs[*ins.src];
    if (ins.imm) s = truncate_to_width(*ins.imm, w);
    Int dv = reg_value(d, w, interp);
    Int sv = ins.src || ins.imm ? reg_value(s, w, interp) : Int(0);

    Int ideal = 0;
    uint64_t out = 0;
    Mode mode = Mode::E;
    bool classify_by_ideal = true;

    switch (ins.op) {
      case Opcode::ADD: {
        ideal = dv + sv;
        uint64_t sum = d + s;  // wraps only at w = 64
        out = truncate_to_width(sum, w);
        st.carry = w == 64 ? (sum < d ? 1 : 0)
                           : static_cast<int>((sum >> w) & 1);
        break;
      }
      case Opcode::SBC: {
        ideal = dv - sv - st.carry;
        out = truncate_to_width(d - s - static_cast<uint64_t>(st.carry), w);
        // Borrow out: unsigned d < s + carry.
        Int borrow = Int(d) - Int(s) - st.carry;
        int new_carry = borrow < 0 ? 1 : 0;
        if (ins.src && *ins.src == ins.dst) {
          mode = Mode::E;
          classify_by_ideal = false;
        }
        st.carry = new_carry;
        break;
      }
      case Opcode::MOV:
        out = s;
        classify_by_ideal = false;
        break;
      case Opcode::EOR:
        out = d ^ s;
        classify_by_ideal = false;
        break;
      case Opcode::AND:
        out = d & s;
        classify_by_ideal = false;
        break;
      case Opcode::LSL:
        out = truncate_to_width(d << 1, w);
        mode = ((d >> (w - 1)) & 1) ? Mode::O : Mode::E;
        classify_by_ideal = false;
        st.carry = (d >> (w - 1)) & 1;
        break;
      case Opcode::NEG:
        ideal = -dv;
        out = truncate_to_width(~d + 1, w);
        st.carry = d != 0 ? 1 : 0;
        break;
      case Opcode::INC:
        ideal = dv + 1;
        out = truncate_to_width(d + 1, w);
        break;
      case Opcode::MUL: {
        ideal = dv * sv;
        Int wrapped = ideal % pow2(w);
        if (wrapped < 0) wrapped += pow2(w);
        out = wrapped.convert_to<uint64_t>();
        break;
      }
    }

    if (classify_by_ideal) mode = classify(ideal, out, w, interp);
    st.regs[ins.dst] = out;
    res.instr_modes.push_back(mode);
    if (multi_modal(ins, interp)) res.modes.push_back(mode);
  }
  res.out = st;
  return res;
}

}  // namespace tfs
