#pragma once

#include <stdexcept>
#include <string>

#include "tbn/encoder.hpp"
#include "tbn/solver.hpp"

namespace tbn::sat {

struct ExternalSolverError : std::runtime_error {
  ExternalSolverError(const std::string& message, std::string captured)
      : std::runtime_error(message + (captured.empty() ? "" : "\n--- captured output ---\n" + captured)),
        captured_output(std::move(captured)) {}
  std::string captured_output;
};

// Raw run of a DIMACS solver command. `command_template` must contain a
// `{file}` placeholder for the instance path. Understands SAT-competition
// output ("s SATISFIABLE" / "s UNSATISFIABLE", "v " value lines) and
// tolerates exit codes 10 (SAT) and 20 (UNSAT).
struct RawExternalResult {
  Verdict verdict = Verdict::Unknown;
  std::vector<int> model_literals;  // from "v" lines, without the closing 0
  int exit_code = 0;
  std::string output;
};

RawExternalResult run_dimacs_solver(const std::string& command_template,
                                    const std::string& dimacs);

// Solves an encoded instance with an external solver and re-verifies any
// model locally before returning it; a bogus model is an error, never SAT.
Outcome solve_external(const CnfInstance& cnf, const std::string& command_template);

}  // namespace tbn::sat
