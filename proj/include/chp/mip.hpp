#pragma once

#include <string>
#include <vector>

#include "chp/lp.hpp"

namespace chp {

struct MipProblem {
  lp::LinearProgram lp;
  std::vector<int> integer_vars;  // each bounded within [0, 1]
};

struct MipOptions {
  double int_tol = 1e-6;
  double gap_tol = 1e-6;  // absolute
  long node_limit = 1000000;
  lp::SolverOptions lp_options;
};

enum class MipStatus { kOptimal, kInfeasible, kNodeLimit };

std::string to_string(MipStatus status);

struct MipSolution {
  MipStatus status = MipStatus::kInfeasible;
  std::vector<double> incumbent;
  double objective = 0.0;
  double bound = 0.0;
  double root_bound = 0.0;
  double gap = 0.0;
  long node_count = 0;
  bool has_incumbent = false;
};

// Best-first branch and bound with a depth-first dive until the first
// incumbent. Branches on the most fractional variable (lowest index on ties).
MipSolution solve_mip(const MipProblem& problem, const MipOptions& options = {});

}  // namespace chp
