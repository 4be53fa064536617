#include <unistd.h>

#include <cctype>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "tfs/sat.hpp"

namespace tfs {

std::string export_dimacs(const Solver& s) {
  const auto& cls = s.original_clauses();
  std::ostringstream out;
  out << "p cnf " << s.num_vars() << ' ' << cls.size() << '\n';
  for (const auto& c : cls) {
    for (Lit l : c) out << l << ' ';
    out << "0\n";
  }
  return out.str();
}

DimacsFile parse_dimacs(const std::string& text) {
  DimacsFile f;
  std::istringstream in(text);
  std::string line;
  bool have_header = false;
  int declared_clauses = 0;
  std::vector<Lit> cur;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == 'c' || line[0] == '%') continue;
    if (line[0] == 'p') {
      std::istringstream hs(line);
      std::string p, cnf;
      hs >> p >> cnf >> f.num_vars >> declared_clauses;
      if (cnf != "cnf" || f.num_vars < 0 || declared_clauses < 0 || hs.fail())
        throw std::runtime_error("bad DIMACS header: " + line);
      have_header = true;
      continue;
    }
    if (!have_header) throw std::runtime_error("DIMACS clause before header");
    std::istringstream ls(line);
    long v;
    while (ls >> v) {
      if (v == 0) {
        f.clauses.push_back(cur);
        cur.clear();
      } else {
        if (v < -f.num_vars || v > f.num_vars)
          throw std::runtime_error("DIMACS literal out of range: " +
                                   std::to_string(v));
        cur.push_back(static_cast<Lit>(v));
      }
    }
  }
  if (!have_header) throw std::runtime_error("missing DIMACS header");
  if (!cur.empty()) throw std::runtime_error("unterminated DIMACS clause");
  return f;
}

namespace {

std::string run_and_capture(const std::string& command) {
  std::string out;
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) throw std::runtime_error("failed to run: " + command);
  char buf[4096];
  size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  pclose(pipe);
  return out;
}

}  // namespace

SolveResult external_solve(const std::string& command, const Solver& s) {
  namespace fs = std::filesystem;
  static int counter = 0;
  fs::path path = fs::temp_directory_path() /
                  ("tfsynth-" + std::to_string(getpid()) + "-" +
                   std::to_string(counter++) + ".cnf");
  {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    f << export_dimacs(s);
  }
  std::string output =
      run_and_capture(command + " '" + path.string() + "' 2>/dev/null");
  std::error_code ec;
  fs::remove(path, ec);

  SolveResult res;
  bool got_status = false;
  bool want_model = false;
  std::vector<Lit> model_lits;
  std::istringstream in(output);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok == "s" || tok == "S") {
      if (!(ls >> tok)) continue;
    }
    if (tok == "SATISFIABLE" || tok == "SAT") {
      res.status = SolveStatus::SAT;
      got_status = true;
      want_model = true;
      long v;
      while (ls >> v)
        if (v != 0) model_lits.push_back(static_cast<Lit>(v));
      continue;
    }
    if (tok == "UNSATISFIABLE" || tok == "UNSAT") {
      res.status = SolveStatus::UNSAT;
      got_status = true;
      continue;
    }
    if (tok == "v" || tok == "V") {
      long v;
      while (ls >> v)
        if (v != 0) model_lits.push_back(static_cast<Lit>(v));
      continue;
    }
    if (want_model && (tok[0] == '-' || isdigit(static_cast<unsigned char>(tok[0])))) {
      long v = atol(tok.c_str());
      if (v != 0) model_lits.push_back(static_cast<Lit>(v));
      while (ls >> v)
        if (v != 0) model_lits.push_back(static_cast<Lit>(v));
    }
  }
  if (!got_status)
    throw std::runtime_error("external solver output not understood");
  if (res.status == SolveStatus::SAT) {
    if (model_lits.empty())
      throw std::runtime_error("external solver reported SAT without a model");
    res.model.assign(static_cast<size_t>(s.num_vars()) + 1, -1);
    for (Lit l : model_lits) {
      int v = l > 0 ? l : -l;
      if (v <= s.num_vars())
        res.model[static_cast<size_t>(v)] = l > 0 ? 1 : -1;
    }
  }
  return res;
}

}  // namespace tfs
