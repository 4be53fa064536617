#include "tfs/serialize.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace tfs {

namespace {

[[noreturn]] void err(const std::string& what) {
  throw std::runtime_error("transfer function parse: " + what);
}

std::string trim(const std::string& s) {
  size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::string reg_name(int r) { return "r" + std::to_string(r); }

int reg_from_name(const std::string& tok) {
  if (tok.size() != 2 || (tok[0] != 'r' && tok[0] != 'R') || tok[1] < '0' ||
      tok[1] > '7')
    err("bad register name '" + tok + "'");
  return tok[1] - '0';
}

Int parse_int(const std::string& s) {
  std::string t = trim(s);
  if (t.empty()) err("expected an integer");
  size_t i = t[0] == '-' ? 1 : 0;
  if (i == t.size()) err("expected an integer");
  for (; i < t.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(t[i])))
      err("bad integer '" + t + "'");
  return Int(t);
}

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  size_t i = s[0] == '-' ? 1 : 0;
  if (i == s.size()) return false;
  for (; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

size_t find_close(const std::string& s, size_t open) {
  int depth = 0;
  for (size_t i = open; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')' && --depth == 0) return i;
  }
  err("unbalanced parentheses in '" + s + "'");
}

std::vector<std::string> split_top(const std::string& s, char sep) {
  std::vector<std::string> out;
  int depth = 0;
  size_t start = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (s[i] == sep && depth == 0) {
      out.push_back(s.substr(start, i - start));
      start = i + 1;
    }
  }
  out.push_back(s.substr(start));
  return out;
}

Mode mode_from_char(char c) {
  switch (std::toupper(static_cast<unsigned char>(c))) {
    case 'O': return Mode::O;
    case 'U': return Mode::U;
    case 'P': return Mode::P;
    case 'N': return Mode::N;
    case 'E': return Mode::E;
  }
  err(std::string("bad mode letter '") + c + "'");
}

ModeVector parse_modes(const std::string& s) {
  ModeVector mv;
  if (s == "-") return mv;
  for (char c : s) mv.push_back(mode_from_char(c));
  return mv;
}

// Sum of signed register tokens, primes and spaces ignored. Terms come
// back sorted by variable so they can be matched against the template.
TemplateRow parse_pattern(const std::string& text,
                          const std::vector<int>& regs) {
  std::string t;
  for (char c : text)
    if (c != ' ' && c != '\'') t += c;
  TemplateRow row;
  size_t i = 0;
  bool first = true;
  while (i < t.size()) {
    int sign = 1;
    if (t[i] == '+') {
      ++i;
    } else if (t[i] == '-') {
      sign = -1;
      ++i;
    } else if (!first) {
      err("expected sign in pattern '" + text + "'");
    }
    size_t st = i;
    while (i < t.size() && t[i] != '+' && t[i] != '-') ++i;
    int r = reg_from_name(t.substr(st, i - st));
    auto it = std::lower_bound(regs.begin(), regs.end(), r);
    if (it == regs.end() || *it != r)
      err("register " + reg_name(r) + " is not tracked");
    row.terms.emplace_back(sign, static_cast<int>(it - regs.begin()));
    first = false;
  }
  if (row.terms.empty() || row.terms.size() > 2)
    err("pattern '" + text + "' must have one or two terms");
  std::sort(row.terms.begin(), row.terms.end(),
            [](auto& a, auto& b) { return a.second < b.second; });
  return row;
}

size_t pattern_index(const std::string& text,
                     const std::vector<TemplateRow>& tpl,
                     const std::vector<int>& regs) {
  TemplateRow row = parse_pattern(text, regs);
  for (size_t k = 0; k < tpl.size(); ++k)
    if (tpl[k] == row) return k;
  err("'" + text + "' is not a template pattern");
}

Monomial parse_monomial(const std::string& text) {
  Monomial m;
  for (const auto& part : split_top(text, '*')) m.regs.push_back(reg_from_name(trim(part)));
  if (m.regs.size() < 2) err("monomial '" + text + "' needs two factors");
  return m;
}

size_t monomial_index(const std::string& text,
                      const std::vector<Monomial>& monomials) {
  Monomial m = parse_monomial(text);
  for (size_t i = 0; i < monomials.size(); ++i)
    if (monomials[i].regs == m.regs) return i;
  err("monomial '" + text + "' is not declared");
}

UpdateExpr parse_expr(const std::string& input,
                      const std::vector<TemplateRow>& tpl,
                      const std::vector<int>& regs,
                      const std::vector<Monomial>& monomials) {
  UpdateExpr e;
  std::string s = trim(input);
  if (!s.empty() && s[0] == '(') {
    size_t close = find_close(s, 0);
    std::string rest = trim(s.substr(close + 1));
    if (rest.empty() || rest[0] != '/')
      err("expected '/ divisor' after '(...)' in '" + input + "'");
    e.divisor = parse_int(rest.substr(1));
    if (e.divisor <= 0) err("divisor must be positive");
    s = trim(s.substr(1, close - 1));
  }
  size_t i = 0;
  bool first = true;
  while (i < s.size()) {
    while (i < s.size() && s[i] == ' ') ++i;
    if (i == s.size()) break;
    int sign = 1;
    if (s[i] == '+') {
      ++i;
    } else if (s[i] == '-') {
      sign = -1;
      ++i;
    } else if (!first) {
      err("expected sign between terms in '" + input + "'");
    }
    while (i < s.size() && s[i] == ' ') ++i;
    size_t st = i;
    int depth = 0;
    while (i < s.size() && (depth > 0 || (s[i] != '+' && s[i] != '-'))) {
      if (s[i] == '(') ++depth;
      if (s[i] == ')') --depth;
      ++i;
    }
    std::string tok = trim(s.substr(st, i - st));
    first = false;
    if (tok.empty()) err("empty term in '" + input + "'");
    if (all_digits(tok)) {
      e.constant += Int(sign) * parse_int(tok);
      continue;
    }
    Int coeff = 1;
    size_t star = tok.find('*');
    size_t par = tok.find('(');
    if (star != std::string::npos &&
        (par == std::string::npos || star < par)) {
      coeff = parse_int(tok.substr(0, star));
      tok = trim(tok.substr(star + 1));
      par = tok.find('(');
    }
    if (par == std::string::npos || tok.back() != ')' ||
        find_close(tok, par) != tok.size() - 1)
      err("bad term '" + tok + "'");
    std::string fn = tok.substr(0, par);
    std::string inner = tok.substr(par + 1, tok.size() - par - 2);
    SymTerm term;
    term.coeff = Int(sign) * coeff;
    if (fn == "max") {
      term.sym = Sym::PATTERN;
      term.index = static_cast<int>(pattern_index(inner, tpl, regs));
    } else if (fn == "cmax") {
      term.sym = Sym::AGG_MAX;
      term.index = static_cast<int>(monomial_index(inner, monomials));
    } else if (fn == "cmin") {
      term.sym = Sym::AGG_MIN;
      term.index = static_cast<int>(monomial_index(inner, monomials));
    } else {
      err("unknown function '" + fn + "'");
    }
    e.terms.push_back(std::move(term));
  }
  return e;
}

std::string sym_text(const SymTerm& t, const std::vector<TemplateRow>& tpl,
                     const std::vector<int>& regs,
                     const std::vector<Monomial>& monomials) {
  switch (t.sym) {
    case Sym::PATTERN:
      return "max(" +
             pattern_text(tpl[static_cast<size_t>(t.index)], regs) + ")";
    case Sym::AGG_MAX:
      return "cmax(" +
             monomial_text(monomials[static_cast<size_t>(t.index)]) + ")";
    case Sym::AGG_MIN:
      return "cmin(" +
             monomial_text(monomials[static_cast<size_t>(t.index)]) + ")";
  }
  return {};
}

std::string sum_text(const UpdateExpr& e, const std::vector<TemplateRow>& tpl,
                     const std::vector<int>& regs,
                     const std::vector<Monomial>& monomials) {
  std::string out;
  bool first = true;
  auto emit = [&](bool neg, const std::string& body) {
    if (first) {
      if (neg) out += "-";
      first = false;
    } else {
      out += neg ? " - " : " + ";
    }
    out += body;
  };
  for (const auto& t : e.terms) {
    Int mag = abs(t.coeff);
    std::string body = sym_text(t, tpl, regs, monomials);
    if (mag != 1) body = mag.str() + "*" + body;
    emit(t.coeff < 0, body);
  }
  if (e.constant != 0 || e.terms.empty()) {
    Int mag = abs(e.constant);
    emit(e.constant < 0, mag.str());
  }
  return out;
}

void parse_rhs(const std::string& rhs, UpdateRow& row,
               const std::vector<TemplateRow>& tpl,
               const std::vector<int>& regs,
               const std::vector<Monomial>& monomials) {
  std::string t = trim(rhs);
  if (t.rfind("min(", 0) == 0 && find_close(t, 3) == t.size() - 1) {
    row.kind = RowKind::MINEXPR;
    for (const auto& part : split_top(t.substr(4, t.size() - 5), ','))
      row.choices.push_back(parse_expr(part, tpl, regs, monomials));
    if (row.choices.empty()) err("empty min(...)");
    return;
  }
  row.expr = parse_expr(t, tpl, regs, monomials);
  row.kind = row.expr.terms.empty() ? RowKind::CONST : RowKind::AFFINE;
}

std::string rhs_text(const UpdateRow& row, const std::vector<int>& regs,
                     const std::vector<Monomial>& monomials) {
  if (row.kind == RowKind::MINEXPR) {
    std::string out = "min(";
    for (size_t i = 0; i < row.choices.size(); ++i) {
      if (i) out += ", ";
      out += expr_text(row.choices[i], regs, monomials);
    }
    return out + ")";
  }
  return expr_text(row.expr, regs, monomials);
}

nlohmann::ordered_json expr_json(const UpdateExpr& e,
                                 const std::vector<TemplateRow>& tpl,
                                 const std::vector<int>& regs,
                                 const std::vector<Monomial>& monomials) {
  nlohmann::ordered_json j;
  j["terms"] = nlohmann::ordered_json::array();
  for (const auto& t : e.terms) {
    nlohmann::ordered_json jt;
    jt["coeff"] = t.coeff.str();
    switch (t.sym) {
      case Sym::PATTERN:
        jt["sym"] = "bound";
        jt["ref"] = pattern_text(tpl[static_cast<size_t>(t.index)], regs);
        break;
      case Sym::AGG_MAX:
        jt["sym"] = "corner_max";
        jt["ref"] = monomial_text(monomials[static_cast<size_t>(t.index)]);
        break;
      case Sym::AGG_MIN:
        jt["sym"] = "corner_min";
        jt["ref"] = monomial_text(monomials[static_cast<size_t>(t.index)]);
        break;
    }
    j["terms"].push_back(std::move(jt));
  }
  j["constant"] = e.constant.str();
  j["divisor"] = e.divisor.str();
  return j;
}

UpdateExpr expr_from_json(const nlohmann::json& j,
                          const std::vector<TemplateRow>& tpl,
                          const std::vector<int>& regs,
                          const std::vector<Monomial>& monomials) {
  UpdateExpr e;
  for (const auto& jt : j.at("terms")) {
    SymTerm t;
    t.coeff = parse_int(jt.at("coeff").get<std::string>());
    std::string sym = jt.at("sym").get<std::string>();
    std::string ref = jt.at("ref").get<std::string>();
    if (sym == "bound") {
      t.sym = Sym::PATTERN;
      t.index = static_cast<int>(pattern_index(ref, tpl, regs));
    } else if (sym == "corner_max") {
      t.sym = Sym::AGG_MAX;
      t.index = static_cast<int>(monomial_index(ref, monomials));
    } else if (sym == "corner_min") {
      t.sym = Sym::AGG_MIN;
      t.index = static_cast<int>(monomial_index(ref, monomials));
    } else {
      err("unknown term sym '" + sym + "'");
    }
    e.terms.push_back(std::move(t));
  }
  e.constant = parse_int(j.at("constant").get<std::string>());
  e.divisor = parse_int(j.at("divisor").get<std::string>());
  return e;
}

}  // namespace

std::string instr_text(const Instruction& ins) {
  std::string s = opcode_name(ins.op) + " R" + std::to_string(ins.dst);
  if (ins.src) s += " R" + std::to_string(*ins.src);
  if (ins.imm) s += " " + std::to_string(*ins.imm);
  return s;
}

std::string block_text(const Block& b) {
  std::string out;
  for (size_t i = 0; i < b.instrs.size(); ++i) {
    if (i) out += "\n";
    out += instr_text(b.instrs[i]);
  }
  return out;
}

std::string pattern_text(const TemplateRow& row, const std::vector<int>& regs,
                         bool primed) {
  std::string out;
  bool first = true;
  for (auto [coeff, var] : row.terms) {
    if (coeff < 0)
      out += "-";
    else if (!first)
      out += "+";
    out += reg_name(regs[static_cast<size_t>(var)]);
    if (primed) out += "'";
    first = false;
  }
  return out;
}

std::string monomial_text(const Monomial& m) {
  std::string out;
  for (size_t i = 0; i < m.regs.size(); ++i) {
    if (i) out += "*";
    out += reg_name(m.regs[i]);
  }
  return out;
}

std::string expr_text(const UpdateExpr& e, const std::vector<int>& regs,
                      const std::vector<Monomial>& monomials) {
  auto tpl = octagon_template(static_cast<int>(regs.size()));
  std::string sum = sum_text(e, tpl, regs, monomials);
  if (e.divisor == 1) return sum;
  return "(" + sum + ") / " + e.divisor.str();
}

std::string to_text(const TransferFunction& tf) {
  std::ostringstream os;
  os << "width " << tf.width << "\n";
  os << "interp " << (tf.interp == Interp::SIGNED ? "signed" : "unsigned")
     << "\n";
  os << "domain "
     << (tf.domain == Domain::OCTAGON ? "octagon" : "interval") << "\n";
  os << "regs";
  for (int r : tf.regs) os << " " << reg_name(r);
  os << "\n";
  for (const auto& m : tf.monomials) os << "monomial " << monomial_text(m) << "\n";
  for (const auto& ins : tf.block.instrs) os << "instr " << instr_text(ins) << "\n";
  auto tpl = octagon_template(static_cast<int>(tf.regs.size()));
  for (const auto& p : tf.pairs) {
    os << "pair " << (p.modes.empty() ? "-" : mode_string(p.modes)) << "\n";
    for (size_t k = 0; k < tpl.size(); ++k)
      os << "guard " << pattern_text(tpl[k], tf.regs) << " <= "
         << p.guard.bounds[k].str() << "\n";
    for (const auto& row : p.rows)
      os << "update max("
         << pattern_text(tpl[static_cast<size_t>(row.pattern)], tf.regs, true)
         << ") <= " << rhs_text(row, tf.regs, tf.monomials) << "\n";
  }
  return os.str();
}

TransferFunction from_text(const std::string& s) {
  TransferFunction tf;
  tf.width = 0;
  std::vector<std::string> instr_lines;
  std::vector<TemplateRow> tpl;
  std::vector<std::optional<Int>> gbounds;
  bool in_pairs = false;
  bool have_regs = false;

  auto finish_pair = [&]() {
    if (tf.pairs.empty()) return;
    auto& g = tf.pairs.back().guard;
    g.regs = tf.regs;
    for (size_t k = 0; k < gbounds.size(); ++k) {
      if (!gbounds[k]) err("missing guard row " + std::to_string(k));
      g.bounds.push_back(*gbounds[k]);
    }
  };

  std::istringstream in(s);
  std::string raw;
  while (std::getline(in, raw)) {
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    size_t sp = line.find(' ');
    std::string key = line.substr(0, sp);
    std::string rest = sp == std::string::npos ? "" : trim(line.substr(sp + 1));
    if (key == "width") {
      tf.width = static_cast<int>(parse_int(rest).convert_to<long>());
    } else if (key == "interp") {
      if (rest == "signed")
        tf.interp = Interp::SIGNED;
      else if (rest == "unsigned")
        tf.interp = Interp::UNSIGNED;
      else
        err("bad interp '" + rest + "'");
    } else if (key == "domain") {
      if (rest == "octagon")
        tf.domain = Domain::OCTAGON;
      else if (rest == "interval")
        tf.domain = Domain::INTERVAL;
      else
        err("bad domain '" + rest + "'");
    } else if (key == "regs") {
      std::istringstream rs(rest);
      std::string tok;
      while (rs >> tok) tf.regs.push_back(reg_from_name(tok));
      if (tf.regs.empty() || !std::is_sorted(tf.regs.begin(), tf.regs.end()))
        err("regs must be nonempty and ascending");
      have_regs = true;
    } else if (key == "monomial") {
      tf.monomials.push_back(parse_monomial(rest));
    } else if (key == "instr") {
      if (in_pairs) err("instr after pairs");
      instr_lines.push_back(rest);
    } else if (key == "pair") {
      if (!have_regs) err("regs must precede pairs");
      if (!in_pairs) {
        tpl = octagon_template(static_cast<int>(tf.regs.size()));
        in_pairs = true;
      }
      finish_pair();
      tf.pairs.push_back({parse_modes(rest), Guard{}, {}});
      gbounds.assign(tpl.size(), std::nullopt);
    } else if (key == "guard") {
      if (tf.pairs.empty()) err("guard outside a pair");
      size_t le = rest.find("<=");
      if (le == std::string::npos) err("guard needs '<='");
      size_t k = pattern_index(trim(rest.substr(0, le)), tpl, tf.regs);
      if (gbounds[k]) err("duplicate guard row");
      gbounds[k] = parse_int(rest.substr(le + 2));
    } else if (key == "update") {
      if (tf.pairs.empty()) err("update outside a pair");
      if (rest.rfind("max(", 0) != 0) err("update must bound max(...)");
      size_t close = find_close(rest, 3);
      UpdateRow row;
      row.pattern =
          static_cast<int>(pattern_index(rest.substr(4, close - 4), tpl, tf.regs));
      std::string tail = trim(rest.substr(close + 1));
      if (tail.rfind("<=", 0) != 0) err("update needs '<='");
      parse_rhs(tail.substr(2), row, tpl, tf.regs, tf.monomials);
      tf.pairs.back().rows.push_back(std::move(row));
    } else {
      err("unknown line '" + line + "'");
    }
  }
  finish_pair();
  if (instr_lines.empty()) err("no instructions");
  if (tf.width == 0) err("missing width");
  if (!have_regs) err("missing regs");
  std::string joined;
  for (const auto& l : instr_lines) joined += l + "\n";
  tf.block = parse_block(joined);
  return tf;
}

std::string to_json(const TransferFunction& tf) {
  nlohmann::ordered_json j;
  j["block"] = nlohmann::ordered_json::array();
  for (const auto& ins : tf.block.instrs) j["block"].push_back(instr_text(ins));
  j["width"] = tf.width;
  j["interpretation"] = tf.interp == Interp::SIGNED ? "signed" : "unsigned";
  j["domain"] = tf.domain == Domain::OCTAGON ? "octagon" : "interval";
  j["regs"] = nlohmann::ordered_json::array();
  for (int r : tf.regs) j["regs"].push_back(reg_name(r));
  j["monomials"] = nlohmann::ordered_json::array();
  for (const auto& m : tf.monomials) j["monomials"].push_back(monomial_text(m));
  auto tpl = octagon_template(static_cast<int>(tf.regs.size()));
  j["templates"] = nlohmann::ordered_json::array();
  for (const auto& row : tpl) j["templates"].push_back(pattern_text(row, tf.regs));
  j["pairs"] = nlohmann::ordered_json::array();
  for (const auto& p : tf.pairs) {
    nlohmann::ordered_json jp;
    jp["modes"] = p.modes.empty() ? "-" : mode_string(p.modes);
    jp["guard"] = nlohmann::ordered_json::array();
    for (size_t k = 0; k < tpl.size(); ++k) {
      nlohmann::ordered_json jg;
      jg["pattern"] = pattern_text(tpl[k], tf.regs);
      jg["bound"] = p.guard.bounds[k].str();
      jp["guard"].push_back(std::move(jg));
    }
    jp["update"] = nlohmann::ordered_json::array();
    for (const auto& row : p.rows) {
      nlohmann::ordered_json ju;
      ju["target"] =
          pattern_text(tpl[static_cast<size_t>(row.pattern)], tf.regs, true);
      switch (row.kind) {
        case RowKind::CONST:
          ju["kind"] = "const";
          ju["constant"] = row.expr.constant.str();
          break;
        case RowKind::AFFINE: {
          ju["kind"] = "affine";
          auto je = expr_json(row.expr, tpl, tf.regs, tf.monomials);
          ju["terms"] = je["terms"];
          ju["constant"] = je["constant"];
          ju["divisor"] = je["divisor"];
          break;
        }
        case RowKind::MINEXPR:
          ju["kind"] = "min";
          ju["choices"] = nlohmann::ordered_json::array();
          for (const auto& c : row.choices)
            ju["choices"].push_back(expr_json(c, tpl, tf.regs, tf.monomials));
          break;
      }
      jp["update"].push_back(std::move(ju));
    }
    j["pairs"].push_back(std::move(jp));
  }
  return j.dump(2) + "\n";
}

TransferFunction from_json(const std::string& s) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(s);
  } catch (const nlohmann::json::exception& e) {
    err(e.what());
  }
  try {
    TransferFunction tf;
    std::string joined;
    for (const auto& line : j.at("block"))
      joined += line.get<std::string>() + "\n";
    tf.block = parse_block(joined);
    tf.width = j.at("width").get<int>();
    std::string interp = j.at("interpretation").get<std::string>();
    if (interp == "signed")
      tf.interp = Interp::SIGNED;
    else if (interp == "unsigned")
      tf.interp = Interp::UNSIGNED;
    else
      err("bad interpretation '" + interp + "'");
    std::string domain = j.at("domain").get<std::string>();
    if (domain == "octagon")
      tf.domain = Domain::OCTAGON;
    else if (domain == "interval")
      tf.domain = Domain::INTERVAL;
    else
      err("bad domain '" + domain + "'");
    for (const auto& r : j.at("regs"))
      tf.regs.push_back(reg_from_name(r.get<std::string>()));
    if (tf.regs.empty() || !std::is_sorted(tf.regs.begin(), tf.regs.end()))
      err("regs must be nonempty and ascending");
    for (const auto& m : j.at("monomials"))
      tf.monomials.push_back(parse_monomial(m.get<std::string>()));
    auto tpl = octagon_template(static_cast<int>(tf.regs.size()));
    for (const auto& jp : j.at("pairs")) {
      GuardedUpdate gu;
      gu.modes = parse_modes(jp.at("modes").get<std::string>());
      gu.guard.regs = tf.regs;
      std::vector<std::optional<Int>> bounds(tpl.size());
      for (const auto& jg : jp.at("guard")) {
        size_t k = pattern_index(jg.at("pattern").get<std::string>(), tpl,
                                 tf.regs);
        if (bounds[k]) err("duplicate guard row");
        bounds[k] = parse_int(jg.at("bound").get<std::string>());
      }
      for (size_t k = 0; k < bounds.size(); ++k) {
        if (!bounds[k]) err("missing guard row " + std::to_string(k));
        gu.guard.bounds.push_back(*bounds[k]);
      }
      for (const auto& ju : jp.at("update")) {
        UpdateRow row;
        row.pattern = static_cast<int>(
            pattern_index(ju.at("target").get<std::string>(), tpl, tf.regs));
        std::string kind = ju.at("kind").get<std::string>();
        if (kind == "const") {
          row.kind = RowKind::CONST;
          row.expr.constant = parse_int(ju.at("constant").get<std::string>());
        } else if (kind == "affine") {
          row.kind = RowKind::AFFINE;
          row.expr = expr_from_json(ju, tpl, tf.regs, tf.monomials);
          if (row.expr.terms.empty()) err("affine row without terms");
        } else if (kind == "min") {
          row.kind = RowKind::MINEXPR;
          for (const auto& jc : ju.at("choices"))
            row.choices.push_back(
                expr_from_json(jc, tpl, tf.regs, tf.monomials));
          if (row.choices.empty()) err("empty min row");
        } else {
          err("unknown row kind '" + kind + "'");
        }
        gu.rows.push_back(std::move(row));
      }
      tf.pairs.push_back(std::move(gu));
    }
    return tf;
  } catch (const nlohmann::json::exception& e) {
    err(e.what());
  }
}

Octagon parse_state(const std::string& s, const std::vector<int>& regs) {
  Octagon o(static_cast<int>(regs.size()));
  auto tpl = octagon_template(static_cast<int>(regs.size()));
  auto negated = [](TemplateRow row) {
    for (auto& t : row.terms) t.first = -t.first;
    return row;
  };
  for (const auto& part : split_top(s, ',')) {
    std::string t = trim(part);
    if (t.empty()) continue;
    size_t le1 = t.find("<=");
    size_t ge = t.find(">=");
    if (le1 != std::string::npos) {
      size_t le2 = t.find("<=", le1 + 2);
      if (le2 != std::string::npos) {
        // lo <= pattern <= hi
        Int lo = parse_int(t.substr(0, le1));
        TemplateRow row =
            parse_pattern(trim(t.substr(le1 + 2, le2 - le1 - 2)), regs);
        Int hi = parse_int(t.substr(le2 + 2));
        o.constrain_row(row, hi);
        o.constrain_row(negated(row), -lo);
      } else {
        TemplateRow row = parse_pattern(trim(t.substr(0, le1)), regs);
        o.constrain_row(row, parse_int(t.substr(le1 + 2)));
      }
    } else if (ge != std::string::npos) {
      TemplateRow row = parse_pattern(trim(t.substr(0, ge)), regs);
      o.constrain_row(negated(row), -parse_int(t.substr(ge + 2)));
    } else {
      size_t eq = t.find('=');
      if (eq == std::string::npos) err("bad state row '" + t + "'");
      TemplateRow row = parse_pattern(trim(t.substr(0, eq)), regs);
      Int v = parse_int(t.substr(eq + 1));
      o.constrain_row(row, v);
      o.constrain_row(negated(row), -v);
    }
  }
  return o;
}

std::string state_text(const Octagon& o, const std::vector<int>& regs) {
  if (o.is_bottom()) return "false";
  std::ostringstream os;
  const int n = static_cast<int>(regs.size());
  for (int v = 0; v < n; ++v) {
    ExtInt u = o.upper(v);
    ExtInt l = o.lower(v);
    os << reg_name(regs[static_cast<size_t>(v)]) << " in ["
       << (l.finite() ? l.value.str() : "-inf") << ", " << u.str() << "]\n";
  }
  auto tpl = octagon_template(n);
  for (size_t k = static_cast<size_t>(2 * n); k < tpl.size(); ++k) {
    ExtInt b = o.row_bound(tpl[k]);
    if (!b.finite()) continue;
    os << pattern_text(tpl[k], regs) << " <= " << b.value.str() << "\n";
  }
  return os.str();
}

}  // namespace tfs
