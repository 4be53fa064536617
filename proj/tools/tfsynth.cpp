#include <cctype>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tfs/eval.hpp"
#include "tfs/isa.hpp"
#include "tfs/modes.hpp"
#include "tfs/oracle.hpp"
#include "tfs/sat.hpp"
#include "tfs/serialize.hpp"
#include "tfs/updates.hpp"

namespace {

std::string read_input(const std::string& path) {
  std::ostringstream os;
  if (path == "-") {
    os << std::cin.rdbuf();
  } else {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot open " + path);
    os << in.rdbuf();
  }
  return os.str();
}

int reg_num(const std::string& tok) {
  if (tok.size() == 2 && (tok[0] == 'r' || tok[0] == 'R') && tok[1] >= '0' &&
      tok[1] <= '7')
    return tok[1] - '0';
  throw std::invalid_argument("bad register '" + tok + "'");
}

std::vector<std::string> split_any(const std::string& s, const char* seps) {
  std::vector<std::string> out;
  size_t start = 0;
  while (start <= s.size()) {
    size_t end = s.find_first_of(seps, start);
    if (end == std::string::npos) end = s.size();
    if (end > start) out.push_back(s.substr(start, end - start));
    start = end + 1;
  }
  return out;
}

std::vector<int> parse_reg_list(const std::string& s) {
  std::vector<int> out;
  for (const auto& tok : split_any(s, ", ")) out.push_back(reg_num(tok));
  return out;
}

std::vector<tfs::Monomial> parse_monomial_list(const std::string& s) {
  std::vector<tfs::Monomial> out;
  for (const auto& tok : split_any(s, ", ")) {
    tfs::Monomial m;
    for (const auto& f : split_any(tok, "*")) m.regs.push_back(reg_num(f));
    if (m.regs.size() < 2)
      throw std::invalid_argument("monomial '" + tok + "' needs two factors");
    out.push_back(std::move(m));
  }
  return out;
}

bool looks_json(const std::string& s) {
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    return c == '{';
  }
  return false;
}

tfs::TransferFunction load_tf(const std::string& path) {
  std::string text = read_input(path);
  return looks_json(text) ? tfs::from_json(text) : tfs::from_text(text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Octagonal transfer functions for machine-code blocks"};
  app.require_subcommand(1);

  std::string m_file;
  int m_width = 32;
  bool m_stats = false;
  auto* cmd_modes =
      app.add_subcommand("modes", "Enumerate the feasible mode vectors");
  cmd_modes->add_option("blockfile", m_file, "block file, '-' for stdin")
      ->required();
  cmd_modes->add_option("--width", m_width, "bit width")
      ->check(CLI::Range(4, 64));
  auto* m_signed = cmd_modes->add_flag("--signed", "signed interpretation");
  auto* m_unsigned =
      cmd_modes->add_flag("--unsigned", "unsigned interpretation");
  m_unsigned->excludes(m_signed);
  cmd_modes->add_flag("--stats", m_stats, "solver counters on stderr");

  std::string s_file, s_domain = "octagon", s_strategy = "exact";
  std::string s_regs, s_monomials, s_format = "text";
  int s_width = 32;
  bool s_stats = false;
  auto* cmd_synth =
      app.add_subcommand("synth", "Synthesize a transfer function");
  cmd_synth->add_option("blockfile", s_file, "block file, '-' for stdin")
      ->required();
  cmd_synth->add_option("--width", s_width, "bit width")
      ->check(CLI::Range(4, 64));
  auto* s_signed = cmd_synth->add_flag("--signed", "signed interpretation");
  auto* s_unsigned =
      cmd_synth->add_flag("--unsigned", "unsigned interpretation");
  s_unsigned->excludes(s_signed);
  cmd_synth->add_option("--domain", s_domain, "octagon or interval")
      ->check(CLI::IsMember({"octagon", "interval"}));
  cmd_synth
      ->add_option("--strategy", s_strategy, "exact, medium or bounds")
      ->check(CLI::IsMember({"exact", "medium", "bounds"}));
  cmd_synth->add_option("--regs", s_regs,
                        "tracked registers, e.g. r0,r1 (default: live-in)");
  cmd_synth->add_option("--monomials", s_monomials,
                        "tracked products, e.g. r0*r2");
  cmd_synth->add_option("--format", s_format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  cmd_synth->add_flag("--stats", s_stats, "phase counters on stderr");

  std::string a_file, a_state;
  auto* cmd_apply =
      app.add_subcommand("apply", "Evaluate a transfer function on a state");
  cmd_apply->add_option("tffile", a_file, "transfer function (text or json)")
      ->required();
  cmd_apply
      ->add_option("--state", a_state,
                   "input rows, e.g. 'r0+r1 <= 10, r0 >= 2'")
      ->required();

  std::string v_file;
  uint64_t v_samples = 200, v_seed = 1;
  bool v_json = false;
  auto* cmd_verify = app.add_subcommand(
      "verify", "Cross-check a transfer function against direct execution");
  cmd_verify->add_option("tffile", v_file, "transfer function (text or json)")
      ->required();
  cmd_verify->add_option("--samples", v_samples, "random octagons to draw");
  cmd_verify->add_option("--seed", v_seed, "random seed");
  cmd_verify->add_flag("--json", v_json, "JSON report");

  std::string d_file, d_external;
  auto* cmd_dimacs =
      app.add_subcommand("solve-dimacs", "Solve a DIMACS CNF file");
  cmd_dimacs->add_option("cnffile", d_file, "CNF file, '-' for stdin")
      ->required();
  cmd_dimacs
      ->add_option("--external", d_external,
                   "also run `CMD <file>` and compare answers")
      ->envname("TFSYNTH_EXTERNAL_SOLVER");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (cmd_modes->parsed()) {
      tfs::Block b = tfs::parse_block(read_input(m_file));
      tfs::Interp interp =
          m_unsigned->count() ? tfs::Interp::UNSIGNED : tfs::Interp::SIGNED;
      tfs::ModeStats st;
      auto vecs = tfs::enumerate_modes(b, m_width, interp, &st);
      for (const auto& mv : vecs)
        std::cout << (mv.empty() ? "-" : tfs::mode_string(mv)) << "\n";
      std::cout << "total " << vecs.size() << "\n";
      if (m_stats)
        std::cerr << "stats solver_calls=" << st.solver_calls
                  << " conflicts=" << st.conflicts << "\n";
      return 0;
    }

    if (cmd_synth->parsed()) {
      tfs::Block b = tfs::parse_block(read_input(s_file));
      tfs::SynthConfig cfg;
      cfg.width = s_width;
      cfg.interp =
          s_unsigned->count() ? tfs::Interp::UNSIGNED : tfs::Interp::SIGNED;
      cfg.domain = s_domain == "interval" ? tfs::Domain::INTERVAL
                                          : tfs::Domain::OCTAGON;
      cfg.strategy = s_strategy == "medium"
                         ? tfs::Strategy::MEDIUM
                         : (s_strategy == "bounds" ? tfs::Strategy::BOUNDS
                                                   : tfs::Strategy::EXACT);
      if (!s_regs.empty()) cfg.regs = parse_reg_list(s_regs);
      if (!s_monomials.empty()) cfg.monomials = parse_monomial_list(s_monomials);
      tfs::TransferFunction tf = tfs::synthesize(b, cfg);
      std::cout << (s_format == "json" ? tfs::to_json(tf) : tfs::to_text(tf));
      if (s_stats)
        std::cerr << "stats mode_calls=" << tf.stats.mode_calls
                  << " guard_calls=" << tf.stats.guard_calls
                  << " affine_calls=" << tf.stats.affine_calls
                  << " update_calls=" << tf.stats.update_calls
                  << " pairs=" << tf.pairs.size() << "\n";
      return 0;
    }

    if (cmd_apply->parsed()) {
      tfs::TransferFunction tf = load_tf(a_file);
      tfs::Octagon in = tfs::parse_state(a_state, tf.regs);
      tfs::Octagon img = tfs::apply_tf(tf, in);
      std::cout << tfs::state_text(img, tf.regs);
      return 0;
    }

    if (cmd_verify->parsed()) {
      tfs::TransferFunction tf = load_tf(v_file);
      tfs::CheckReport rep = tfs::check_tf(tf, v_samples, v_seed);
      if (v_json) {
        std::cout << tfs::check_report_json(rep) << "\n";
      } else {
        std::cout << "samples " << rep.samples << "\n"
                  << "points " << rep.points << "\n"
                  << "soundness violations " << rep.soundness_violations
                  << "\n"
                  << "attainment violations " << rep.attainment_violations
                  << "\n";
        for (const auto& n : rep.notes) std::cout << "note: " << n << "\n";
        std::cout << (rep.ok() ? "ok" : "FAILED") << "\n";
      }
      return rep.ok() ? 0 : 1;
    }

    if (cmd_dimacs->parsed()) {
      tfs::DimacsFile df = tfs::parse_dimacs(read_input(d_file));
      tfs::Solver s;
      for (int v = 0; v < df.num_vars; ++v) s.new_var();
      for (const auto& c : df.clauses) s.add_clause(c);
      tfs::SolveResult res = s.solve();
      if (res.status == tfs::SolveStatus::LIMIT) {
        std::cerr << "error: solver budget exhausted\n";
        return 3;
      }
      if (res.sat()) {
        std::cout << "s SATISFIABLE\nv ";
        for (int v = 1; v <= df.num_vars; ++v)
          std::cout << (res.value(v) ? v : -v) << " ";
        std::cout << "0\n";
      } else {
        std::cout << "s UNSATISFIABLE\n";
      }
      if (!d_external.empty()) {
        tfs::SolveResult ext = tfs::external_solve(d_external, s);
        bool agree = ext.sat() == res.sat();
        std::cerr << (agree ? "external solver agrees\n"
                            : "external solver DISAGREES\n");
        if (!agree) return 1;
      }
      return 0;
    }
  } catch (const tfs::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    std::string w = e.what();
    std::cerr << "error: " << w << "\n";
    if (w.find("exceeds cap") != std::string::npos ||
        w.find("budget exhausted") != std::string::npos)
      return 3;
    if (w.rfind("transfer function parse", 0) == 0) return 2;
    return 1;
  }
  return 2;
}
