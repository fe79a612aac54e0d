#include "oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace chp::testing {

std::string example_path(const std::string& name) { return std::string(CHP_EXAMPLES_DIR) + "/" + name; }
std::string data_path(const std::string& name) { return std::string(CHP_TEST_DATA_DIR) + "/" + name; }

std::vector<std::vector<int>> feasible_commitments(const GeneratorSpec& gen) {
  const int T = gen.horizon();
  if (T > 16) throw std::invalid_argument("horizon too long to enumerate");
  std::vector<std::vector<int>> out;
  for (unsigned mask = 0; mask < (1u << T); ++mask) {
    std::vector<int> u(T);
    for (int t = 0; t < T; ++t) u[t] = (mask >> t) & 1u;
    if (commitment_cost(gen, u)) out.push_back(std::move(u));
  }
  return out;
}

double dispatch_cost(const SystemInstance& instance, const std::vector<std::vector<int>>& u) {
  const int T = instance.horizon;
  lp::LinearProgram lp;
  std::vector<std::vector<lp::Term>> balance(T);
  double fixed = 0.0;
  for (std::size_t j = 0; j < instance.generators.size(); ++j) {
    const auto& g = instance.generators[j];
    fixed += *commitment_cost(g, u[j]);
    std::vector<int> x(T, -1);
    for (const auto& iv : on_intervals(u[j])) {
      for (int s = iv.first; s <= iv.last; ++s) {
        double hi = g.c_max;
        if (s == iv.first && start_ramp_applies(g, iv)) hi = std::min(hi, g.start_ramp);
        if (s == iv.last && shutdown_ramp_applies(g, iv, T)) hi = std::min(hi, g.start_ramp);
        if (hi < g.c_min) return std::numeric_limits<double>::infinity();
        x[s - 1] = lp.add_var("x", g.c_min, hi);
        const int phi = lp.add_var("phi", -lp::kInf, lp::kInf, 1.0);
        for (const auto& p : g.cost[s - 1].pieces) {
          lp.add_row("cost", {{phi, 1.0}, {x[s - 1], -p.slope}}, lp::Sense::kGreaterEqual, p.intercept);
        }
        if (s > iv.first) {
          lp.add_row("up", {{x[s - 1], 1.0}, {x[s - 2], -1.0}}, lp::Sense::kLessEqual, g.ramp);
          lp.add_row("dn", {{x[s - 2], 1.0}, {x[s - 1], -1.0}}, lp::Sense::kLessEqual, g.ramp);
        }
        balance[s - 1].push_back({x[s - 1], 1.0});
      }
    }
  }
  for (int t = 0; t < T; ++t) {
    if (balance[t].empty()) {
      if (std::abs(instance.demand[t]) > 1e-9) return std::numeric_limits<double>::infinity();
      continue;
    }
    lp.add_row("balance", balance[t], lp::Sense::kEqual, instance.demand[t]);
  }
  if (lp.num_vars() == 0) return fixed;
  const auto sol = lp::solve_lp(lp);
  if (sol.status != lp::Status::kOptimal) return std::numeric_limits<double>::infinity();
  return fixed + sol.objective;
}

EnumerationResult enumerate_system(const SystemInstance& instance) {
  const int T = instance.horizon;
  const std::size_t n = instance.generators.size();
  std::vector<std::vector<std::vector<int>>> options(n);
  for (std::size_t j = 0; j < n; ++j) options[j] = feasible_commitments(instance.generators[j]);

  EnumerationResult best;
  std::vector<std::size_t> pick(n, 0);
  std::vector<std::vector<int>> u(n);
  for (const auto& o : options) {
    if (o.empty()) return best;
  }
  while (true) {
    for (std::size_t j = 0; j < n; ++j) u[j] = options[j][pick[j]];
    bool capacity_ok = true;
    for (int t = 0; t < T && capacity_ok; ++t) {
      double lo = 0.0, hi = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (u[j][t]) {
          lo += instance.generators[j].c_min;
          hi += instance.generators[j].c_max;
        }
      }
      capacity_ok = lo <= instance.demand[t] + 1e-9 && instance.demand[t] <= hi + 1e-9;
    }
    if (capacity_ok) {
      ++best.commitments;
      const double c = dispatch_cost(instance, u);
      if (c < best.objective) {
        best.objective = c;
        best.u = u;
      }
    }
    std::size_t j = 0;
    while (j < n && ++pick[j] == options[j].size()) pick[j++] = 0;
    if (j == n) break;
  }
  return best;
}

lp::LinearProgram random_feasible_lp(Rng& rng, std::vector<double>* point) {
  std::uniform_int_distribution<int> small(-5, 5);
  std::uniform_int_distribution<int> coin(0, 5);
  const int n = std::uniform_int_distribution<int>(2, 14)(rng);
  const int m = std::uniform_int_distribution<int>(1, 12)(rng);
  lp::LinearProgram lp;
  std::vector<double> x0(n);
  for (int j = 0; j < n; ++j) {
    x0[j] = small(rng) * 0.5;
    double lo = x0[j] - coin(rng);
    double hi = x0[j] + coin(rng);
    double c = small(rng);
    switch (coin(rng)) {
      case 0: hi = lp::kInf; c = std::abs(c); break;
      case 1: lo = -lp::kInf; c = -std::abs(c); break;
      default: break;
    }
    lp.add_var("x" + std::to_string(j), lo, hi, c);
  }
  for (int i = 0; i < m; ++i) {
    std::vector<lp::Term> terms;
    double ax = 0.0;
    for (int j = 0; j < n; ++j) {
      if (coin(rng) < 2) {
        const double a = small(rng);
        if (a == 0.0) continue;
        terms.push_back({j, a});
        ax += a * x0[j];
      }
    }
    const double slack = coin(rng);
    switch (coin(rng) % 3) {
      case 0: lp.add_row("r" + std::to_string(i), terms, lp::Sense::kLessEqual, ax + slack); break;
      case 1: lp.add_row("r" + std::to_string(i), terms, lp::Sense::kGreaterEqual, ax - slack); break;
      default: lp.add_row("r" + std::to_string(i), terms, lp::Sense::kEqual, ax); break;
    }
  }
  if (point) *point = x0;
  return lp;
}

}  // namespace chp::testing
