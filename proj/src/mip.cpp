#include "chp/mip.hpp"

#include <cmath>
#include <queue>
#include <stdexcept>

namespace chp {

std::string to_string(MipStatus status) {
  switch (status) {
    case MipStatus::kOptimal: return "optimal";
    case MipStatus::kInfeasible: return "infeasible";
    case MipStatus::kNodeLimit: return "node-limit";
  }
  return "unknown";
}

namespace {

struct BoundChange {
  int var;
  double lo;
  double hi;
};

struct Node {
  std::vector<BoundChange> changes;
  double bound;  // parent relaxation value
  long id;
};

struct WorseNode {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

}  // namespace

MipSolution solve_mip(const MipProblem& problem, const MipOptions& options) {
  for (int j : problem.integer_vars) {
    if (problem.lp.lower[j] < 0.0 || problem.lp.upper[j] > 1.0) {
      throw std::invalid_argument("integer column " + std::to_string(j) + " is not within [0, 1]");
    }
  }
  MipSolution out;
  lp::LinearProgram work = problem.lp;
  const auto& base_lo = problem.lp.lower;
  const auto& base_hi = problem.lp.upper;
  double incumbent = lp::kInf;

  auto apply = [&](const std::vector<BoundChange>& changes) {
    work.lower = base_lo;
    work.upper = base_hi;
    for (const auto& c : changes) {
      work.lower[c.var] = c.lo;
      work.upper[c.var] = c.hi;
    }
  };
  auto most_fractional = [&](const std::vector<double>& x) {
    int best = -1;
    double best_frac = 0.0;
    for (int j : problem.integer_vars) {
      const double f = std::abs(x[j] - std::round(x[j]));
      if (f <= options.int_tol) continue;
      if (best < 0 || f > best_frac + 1e-12 || (f >= best_frac - 1e-12 && j < best)) {
        best = j;
        best_frac = f;
      }
    }
    return best;
  };
  // Integer columns within int_tol of a bound can still leak continuous mass;
  // re-solve with them pinned so the incumbent is exactly integral.
  auto polish = [&](std::vector<double>& x, double& obj) {
    bool exact = true;
    for (int j : problem.integer_vars) exact = exact && x[j] == std::round(x[j]);
    if (exact) return;
    lp::LinearProgram fixed = problem.lp;
    for (int j : problem.integer_vars) fixed.lower[j] = fixed.upper[j] = std::round(x[j]);
    const auto sol = lp::solve_lp(fixed, options.lp_options);
    if (sol.status != lp::Status::kOptimal) return;
    x = sol.primal;
    obj = sol.objective;
  };
  auto accept = [&](std::vector<double> x, double obj) {
    if (obj < incumbent) {
      polish(x, obj);
      incumbent = obj;
      out.incumbent = std::move(x);
      for (int j : problem.integer_vars) out.incumbent[j] = std::round(out.incumbent[j]);
      out.has_incumbent = true;
    }
  };

  std::priority_queue<Node, std::vector<Node>, WorseNode> open;
  long next_id = 0;
  std::vector<Node> dive{{{}, -lp::kInf, next_id++}};
  bool diving = true;
  bool root = true;

  while (true) {
    Node node;
    if (diving && !dive.empty()) {
      node = std::move(dive.back());
      dive.pop_back();
    } else {
      diving = false;
      if (open.empty()) break;
      if (open.top().bound >= incumbent - options.gap_tol) break;
      node = open.top();
      open.pop();
    }
    if (node.bound >= incumbent - options.gap_tol) continue;
    if (out.node_count >= options.node_limit) {
      open.push(std::move(node));
      out.status = MipStatus::kNodeLimit;
      break;
    }
    ++out.node_count;
    apply(node.changes);
    const auto sol = lp::solve_lp(work, options.lp_options);
    if (sol.status == lp::Status::kUnbounded) {
      if (root) throw std::runtime_error("MIP relaxation is unbounded");
      continue;
    }
    if (sol.status == lp::Status::kInfeasible) {
      root = false;
      continue;
    }
    if (root) {
      out.root_bound = sol.objective;
      root = false;
    }
    if (sol.objective >= incumbent - options.gap_tol) continue;
    const int j = most_fractional(sol.primal);
    if (j < 0) {
      accept(sol.primal, sol.objective);
      if (diving) {
        for (auto& n : dive) open.push(std::move(n));
        dive.clear();
        diving = false;
      }
      continue;
    }
    Node down{node.changes, sol.objective, next_id++};
    down.changes.push_back({j, 0.0, 0.0});
    Node up{node.changes, sol.objective, next_id++};
    up.changes.push_back({j, 1.0, 1.0});
    if (diving) {
      // Explore the rounding direction first.
      const bool up_first = sol.primal[j] >= 0.5;
      open.push(up_first ? std::move(down) : std::move(up));
      dive.push_back(up_first ? std::move(up) : std::move(down));
    } else {
      open.push(std::move(down));
      open.push(std::move(up));
    }
  }

  if (!out.has_incumbent) {
    out.status = out.status == MipStatus::kNodeLimit ? MipStatus::kNodeLimit : MipStatus::kInfeasible;
    out.bound = open.empty() ? lp::kInf : open.top().bound;
    return out;
  }
  out.objective = incumbent;
  double bound = incumbent;
  if (!open.empty()) bound = std::min(bound, open.top().bound);
  out.bound = bound;
  out.gap = out.objective - out.bound;
  if (out.status != MipStatus::kNodeLimit) out.status = MipStatus::kOptimal;
  return out;
}

}  // namespace chp
