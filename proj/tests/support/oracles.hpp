#pragma once

#include <limits>
#include <string>
#include <vector>

#include "chp/lp.hpp"
#include "chp/model.hpp"
#include "chp/random_instance.hpp"

namespace chp::testing {

std::string example_path(const std::string& name);
std::string data_path(const std::string& name);

// Every on/off string of one generator that respects its initial state,
// min-up and min-down.
std::vector<std::vector<int>> feasible_commitments(const GeneratorSpec& gen);

// Joint dispatch LP for a fixed commitment of every generator. Returns
// +inf when the commitment cannot meet demand.
double dispatch_cost(const SystemInstance& instance, const std::vector<std::vector<int>>& u);

struct EnumerationResult {
  double objective = std::numeric_limits<double>::infinity();
  std::vector<std::vector<int>> u;
  long commitments = 0;  // joint commitments handed to the dispatch LP
};

// Exhaustive search over joint commitments. Small systems only.
EnumerationResult enumerate_system(const SystemInstance& instance);

// Random LP with a known feasible point: bounds and rows are built around
// the point, and unbounded columns carry a nonnegative cost so the optimum
// is finite.
lp::LinearProgram random_feasible_lp(Rng& rng, std::vector<double>* point = nullptr);

}  // namespace chp::testing
