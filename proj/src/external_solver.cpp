#include "tbn/external_solver.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace tbn::sat {

namespace {

namespace fs = std::filesystem;

struct TempFile {
  fs::path path;
  explicit TempFile(const std::string& suffix) {
    static std::atomic<uint64_t> counter{0};
    auto stamp = std::chrono::steady_clock::now().time_since_epoch().count();
    path = fs::temp_directory_path() /
           ("tbn-" + std::to_string(::getpid()) + "-" +
            std::to_string(counter++) + "-" + std::to_string(stamp) + suffix);
  }
  ~TempFile() {
    std::error_code ec;
    fs::remove(path, ec);
  }
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

std::string replace_placeholder(const std::string& tmpl, const std::string& value) {
  const std::string key = "{file}";
  size_t at = tmpl.find(key);
  if (at == std::string::npos)
    throw ExternalSolverError("solver command template lacks a {file} placeholder: '" + tmpl + "'", "");
  std::string out = tmpl;
  do {
    out.replace(at, key.size(), value);
    at = out.find(key, at + value.size());
  } while (at != std::string::npos);
  return out;
}

}  // namespace

RawExternalResult run_dimacs_solver(const std::string& command_template,
                                    const std::string& dimacs) {
  TempFile cnf_file(".cnf"), out_file(".out"), err_file(".err");
  {
    std::ofstream out(cnf_file.path, std::ios::binary);
    out << dimacs;
    if (!out) throw ExternalSolverError("failed to write DIMACS temp file", "");
  }

  std::string command = replace_placeholder(command_template, cnf_file.path.string()) +
                        " > " + out_file.path.string() + " 2> " + err_file.path.string();
  int status = std::system(command.c_str());

  RawExternalResult result;
  result.output = read_file(out_file.path);
  std::string err = read_file(err_file.path);
  std::string captured = result.output + (err.empty() ? "" : "\n[stderr]\n" + err);

  if (status == -1)
    throw ExternalSolverError("failed to launch external solver: " + command, captured);
  if (WIFEXITED(status))
    result.exit_code = WEXITSTATUS(status);
  else
    throw ExternalSolverError("external solver terminated abnormally", captured);

  std::istringstream lines(result.output);
  std::string line;
  bool saw_status = false;
  while (std::getline(lines, line)) {
    if (line.rfind("s ", 0) == 0) {
      std::string verdict = line.substr(2);
      while (!verdict.empty() && (verdict.back() == '\r' || verdict.back() == ' '))
        verdict.pop_back();
      if (verdict == "SATISFIABLE") {
        result.verdict = Verdict::Sat;
        saw_status = true;
      } else if (verdict == "UNSATISFIABLE") {
        result.verdict = Verdict::Unsat;
        saw_status = true;
      } else if (verdict == "UNKNOWN") {
        result.verdict = Verdict::Unknown;
        saw_status = true;
      }
    } else if (line.rfind("v", 0) == 0 &&
               (line.size() == 1 || line[1] == ' ' || line[1] == '\t')) {
      std::istringstream vals(line.substr(1));
      int lit;
      while (vals >> lit)
        if (lit != 0) result.model_literals.push_back(lit);
    }
  }

  if (!saw_status)
    throw ExternalSolverError("external solver output has no status line", captured);
  if (result.exit_code != 0 && result.exit_code != 10 && result.exit_code != 20)
    throw ExternalSolverError(
        "external solver exited with unexpected code " + std::to_string(result.exit_code),
        captured);
  return result;
}

Outcome solve_external(const CnfInstance& cnf, const std::string& command_template) {
  RawExternalResult raw = run_dimacs_solver(command_template, to_dimacs(cnf));
  Outcome out;
  out.verdict = raw.verdict;
  if (raw.verdict != Verdict::Sat) return out;

  out.model.assign(cnf.variable_count() + 1, false);
  for (int lit : raw.model_literals) {
    int v = std::abs(lit);
    if (v >= 1 && v <= cnf.variable_count()) out.model[v] = lit > 0;
  }
  for (const std::vector<int>& clause : cnf.clauses()) {
    bool satisfied = false;
    for (int lit : clause)
      if (out.model[std::abs(lit)] == (lit > 0)) {
        satisfied = true;
        break;
      }
    if (!satisfied)
      throw ExternalSolverError("external solver model fails local verification",
                                raw.output);
  }
  return out;
}

}  // namespace tbn::sat
