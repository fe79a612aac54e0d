#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "chp/formulations.hpp"
#include "chp/lp.hpp"
#include "chp/mip.hpp"
#include "chp/model.hpp"

namespace chp {

enum class PricingMethod { kTlmp, kChp };

std::string to_string(PricingMethod method);

// System optimum found by solving the interval formulation as a MIP.
struct SystemSolution {
  Schedule schedule;
  double z_qip = 0.0;
  MipSolution mip;
};

SystemSolution solve_system(const SystemInstance& instance, const MipOptions& options = {});

struct TlmpResult {
  PriceVector prices;
  Schedule schedule;
  double z_qip = 0.0;
  double fixed_lp_objective = 0.0;   // 2-Bin LP with u, v fixed
  double relaxation_objective = 0.0;  // 2-Bin LP relaxation
  lp::DualityReport duality;          // of the fixed-commitment LP
};

TlmpResult price_tlmp(const SystemInstance& instance, const MipOptions& options = {});
// Same, reusing an already computed system optimum.
TlmpResult price_tlmp(const SystemInstance& instance, const SystemSolution& system);

struct ChpResult {
  PriceVector prices;
  double relaxation_objective = 0.0;
  lp::DualityReport duality;
};

ChpResult price_chp(const SystemInstance& instance);

// Objective and load-balance duals of the 2-Bin system LP relaxation.
struct RelaxationResult {
  PriceVector prices;
  double objective = 0.0;
};

RelaxationResult relax_2bin(const SystemInstance& instance);

struct GeneratorUplift {
  std::string id;
  double v_j = 0.0;         // best self-scheduled profit
  double iso_profit = 0.0;  // profit following the ISO schedule
  double uplift = 0.0;
  UnitSchedule self_schedule;
};

std::vector<GeneratorUplift> uplift(const SystemInstance& instance, const PriceVector& pi,
                                    const Schedule& iso_schedule);

double total_uplift(const std::vector<GeneratorUplift>& rows);

// sum_j -v_j(pi) + pi.d; equals the relaxation optimum at convex hull prices.
double lagrangian_value(const SystemInstance& instance, const PriceVector& pi);

struct PricingReport {
  PricingMethod method = PricingMethod::kChp;
  PriceVector prices;
  double z_qip = 0.0;
  double relaxation_objective = 0.0;
  std::vector<GeneratorUplift> per_gen;
  double total_uplift = 0.0;
};

struct Comparison {
  Schedule schedule;
  std::vector<PricingReport> reports;  // TLMP then CHP
  double gap_tm = 0.0;                 // (U_TLMP - U_CHP) / U_TLMP, 0 when U_TLMP = 0
};

Comparison compare(const SystemInstance& instance, const MipOptions& options = {});

PricingReport make_report(const SystemInstance& instance, PricingMethod method, const PriceVector& pi,
                          const Schedule& schedule, double z_qip, double relaxation_objective);

std::string format_number(double v);

void write_prices_csv(std::ostream& out, const std::vector<PricingReport>& reports);
void write_uplift_csv(std::ostream& out, const std::vector<PricingReport>& reports);
void write_summary_csv(std::ostream& out, const std::vector<PricingReport>& reports, double gap_tm);

}  // namespace chp
