#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "chp/mip.hpp"
#include "chp/model.hpp"

namespace chp {

using Rng = std::mt19937_64;

struct RandomGenOptions {
  int max_min_up = 3;
  int max_min_down = 3;
  int max_pieces = 3;
  double initially_off_share = 0.3;
};

// Valid generator with convex costs and nondecreasing start-up costs.
GeneratorSpec random_generator(Rng& rng, int horizon, const std::string& id, const RandomGenOptions& options = {});

PriceVector random_prices(Rng& rng, int horizon, double lo = 0.0, double hi = 12.0);

// Demand is the sum of self-scheduled dispatches at random prices, so the
// system always has a feasible commitment.
SystemInstance random_system(Rng& rng, int generators, int horizon, const RandomGenOptions& options = {});

struct FuzzCheck {
  int trial = 0;
  std::string name;
  bool pass = false;
  std::string detail;
};

// Pricing invariants on one system: CHP uplift equals the duality gap, CHP
// never pays more uplift than TLMP, uplifts are non-negative, and the
// Lagrangian at the CHP prices attains the relaxation optimum.
std::vector<FuzzCheck> check_system_invariants(const SystemInstance& instance, int trial,
                                               const MipOptions& options = {}, double tol = 1e-6);

}  // namespace chp
