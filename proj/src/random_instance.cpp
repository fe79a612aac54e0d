#include "chp/random_instance.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "chp/pricing.hpp"
#include "chp/uc_dp.hpp"

namespace chp {

namespace {

int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

double uniform_real(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(10);
  os << v;
  return os.str();
}

}  // namespace

GeneratorSpec random_generator(Rng& rng, int horizon, const std::string& id, const RandomGenOptions& options) {
  GeneratorSpec g;
  g.id = id;
  g.min_up = uniform_int(rng, 1, options.max_min_up);
  g.min_down = uniform_int(rng, 1, options.max_min_down);
  g.c_max = uniform_int(rng, 4, 20) * 5.0;
  g.c_min = std::floor(g.c_max * uniform_real(rng, 0.0, 0.5));
  g.start_ramp = g.c_min + std::floor((g.c_max - g.c_min) * uniform_real(rng, 0.0, 1.0));
  g.ramp = std::max(1.0, std::floor(g.c_max * uniform_real(rng, 0.05, 0.8)));

  const int nsu = uniform_int(rng, 1, 3);
  g.startup_cost.values.clear();
  double su = uniform_int(rng, 0, 60);
  for (int i = 0; i < nsu; ++i) {
    g.startup_cost.values.push_back(su);
    su += uniform_int(rng, 0, 40);
  }
  const int nsd = uniform_int(rng, 1, 2);
  g.shutdown_cost.values.clear();
  for (int i = 0; i < nsd; ++i) g.shutdown_cost.values.push_back(uniform_int(rng, 0, 30));

  // Convex pieces meeting at increasing breakpoints inside [c_min, c_max].
  int pieces = uniform_int(rng, 1, options.max_pieces);
  if (g.c_max - g.c_min < 2.0) pieces = 1;
  std::vector<double> breaks;
  for (int j = 1; j < pieces; ++j) breaks.push_back(g.c_min + (g.c_max - g.c_min) * j / pieces);
  PeriodCost base;
  double slope = uniform_int(rng, 1, 6);
  double intercept = uniform_int(rng, -20, 40);
  base.pieces.push_back({slope, intercept});
  for (double p : breaks) {
    const double next = slope + uniform_int(rng, 1, 3);
    intercept = slope * p + intercept - next * p;
    slope = next;
    base.pieces.push_back({slope, intercept});
  }
  for (int s = 0; s < horizon; ++s) {
    PeriodCost pc = base;
    const double shift = uniform_int(rng, 0, 2);
    for (auto& piece : pc.pieces) piece.slope += shift;
    g.cost.push_back(pc);
  }

  const int periods = uniform_int(rng, 1, 4);
  g.initial = uniform_real(rng, 0.0, 1.0) < options.initially_off_share ? InitialState::OffFor(periods)
                                                                        : InitialState::OnFor(periods);
  return g;
}

PriceVector random_prices(Rng& rng, int horizon, double lo, double hi) {
  PriceVector pi;
  for (int t = 0; t < horizon; ++t) pi.pi.push_back(std::round(uniform_real(rng, lo, hi) * 100.0) / 100.0);
  return pi;
}

SystemInstance random_system(Rng& rng, int generators, int horizon, const RandomGenOptions& options) {
  SystemInstance inst;
  inst.horizon = horizon;
  inst.demand.assign(horizon, 0.0);
  for (int j = 0; j < generators; ++j) {
    inst.generators.push_back(random_generator(rng, horizon, "G" + std::to_string(j + 1), options));
  }
  for (const auto& gen : inst.generators) {
    const auto best = profit_max(gen, random_prices(rng, horizon, 4.0, 16.0));
    for (int t = 0; t < horizon; ++t) inst.demand[t] += best.schedule.x[t];
  }
  for (double& d : inst.demand) d = std::round(d * 1e6) / 1e6;
  return inst;
}

std::vector<FuzzCheck> check_system_invariants(const SystemInstance& instance, int trial,
                                               const MipOptions& options, double tol) {
  std::vector<FuzzCheck> out;
  auto add = [&](std::string name, bool pass, std::string detail) {
    out.push_back({trial, std::move(name), pass, std::move(detail)});
  };
  const auto cmp = compare(instance, options);
  const auto& tlmp = cmp.reports[0];
  const auto& chp = cmp.reports[1];
  const double gap = chp.z_qip - chp.relaxation_objective;
  add("chp_uplift_equals_duality_gap", std::abs(chp.total_uplift - gap) <= tol,
      "U_CHP=" + fmt(chp.total_uplift) + " gap=" + fmt(gap));
  add("chp_uplift_not_above_tlmp", chp.total_uplift <= tlmp.total_uplift + tol,
      "U_CHP=" + fmt(chp.total_uplift) + " U_TLMP=" + fmt(tlmp.total_uplift));
  double worst = 0.0;
  for (const auto& r : cmp.reports) {
    for (const auto& g : r.per_gen) worst = std::min(worst, g.uplift);
  }
  add("uplift_nonnegative", worst >= -tol, "min=" + fmt(worst));
  add("relaxation_below_mip", chp.relaxation_objective <= chp.z_qip + tol,
      "Z_QP=" + fmt(chp.relaxation_objective) + " Z_QIP=" + fmt(chp.z_qip));
  const double lag = lagrangian_value(instance, chp.prices);
  add("lagrangian_at_chp_prices", std::abs(lag - chp.relaxation_objective) <= tol * (1.0 + std::abs(lag)),
      "L=" + fmt(lag) + " Z_QP=" + fmt(chp.relaxation_objective));
  return out;
}

}  // namespace chp
