#pragma once

#include <iosfwd>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace chp::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { kLessEqual, kEqual, kGreaterEqual };

struct Term {
  int var = 0;
  double coef = 0.0;
};

struct Row {
  std::vector<Term> terms;
  Sense sense = Sense::kLessEqual;
  double rhs = 0.0;
};

// Minimization LP over bounded columns. Columns and rows carry labels so the
// matrix can be audited after a dump.
struct LinearProgram {
  std::vector<double> objective;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<std::string> var_labels;
  std::vector<Row> rows;
  std::vector<std::string> row_labels;

  int num_vars() const { return static_cast<int>(objective.size()); }
  int num_rows() const { return static_cast<int>(rows.size()); }

  int add_var(std::string label, double lo, double hi, double cost = 0.0);
  int add_row(std::string label, std::vector<Term> terms, Sense sense, double rhs);

  // Invariant violations (bad indices, lo > hi); empty when well formed.
  std::vector<std::string> check() const;
};

enum class Status { kOptimal, kInfeasible, kUnbounded };

std::string to_string(Status status);

struct LpSolution {
  Status status = Status::kInfeasible;
  std::vector<double> primal;
  // Row multipliers y with reduced costs d = c - A^T y. For a minimization,
  // <= rows have y <= 0, >= rows y >= 0, = rows are free.
  std::vector<double> duals;
  std::vector<double> reduced_costs;
  double objective = 0.0;
  int iterations = 0;
};

struct SolverOptions {
  double pivot_tol = 1e-9;
  double feas_tol = 1e-7;
  double opt_tol = 1e-7;
  int degenerate_before_bland = 1000;
  int refactor_every = 100;
  std::optional<int> iteration_cap;  // default 50 * (n_vars + n_rows)
};

// Thrown when the pivoting stalls past the iteration cap.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

LpSolution solve_lp(const LinearProgram& lp, const SolverOptions& options = {});

struct DualityReport {
  double primal_residual = 0.0;     // worst row or bound violation
  double dual_residual = 0.0;       // worst sign violation of y or d
  double complementarity = 0.0;     // worst |y_i * slack_i| or |d_j * (x_j - bound)|
  double objective_gap = 0.0;       // |c.x - (b.y + bound terms)| / (1 + |c.x|)
  bool pass = false;
};

DualityReport verify_duality(const LinearProgram& lp, const LpSolution& sol, double tol = 1e-6);

// Free-format MPS with the LP's labels as row and column names.
void write_mps(const LinearProgram& lp, std::ostream& out, const std::string& name = "CHP");
void dump_lp(const LinearProgram& lp, const std::string& path);

}  // namespace chp::lp
