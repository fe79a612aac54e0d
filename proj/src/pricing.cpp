#include "chp/pricing.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include "chp/uc_dp.hpp"

namespace chp {

std::string to_string(PricingMethod method) { return method == PricingMethod::kTlmp ? "tlmp" : "chp"; }

namespace {

PriceVector row_duals(const lp::LpSolution& sol, const std::vector<int>& rows) {
  PriceVector pi;
  for (int r : rows) pi.pi.push_back(sol.duals[r]);
  return pi;
}

lp::LpSolution solve_or_throw(const lp::LinearProgram& lp, const std::string& what) {
  auto sol = lp::solve_lp(lp);
  if (sol.status != lp::Status::kOptimal) throw Infeasible(what + " is " + lp::to_string(sol.status));
  return sol;
}

}  // namespace

SystemSolution solve_system(const SystemInstance& instance, const MipOptions& options) {
  const auto meuc = assemble_meuc(instance);
  MipProblem problem{meuc.lp, meuc.binary_columns()};
  SystemSolution out;
  out.mip = solve_mip(problem, options);
  if (!out.mip.has_incumbent) throw Infeasible("system unit commitment is " + to_string(out.mip.status));
  out.z_qip = out.mip.objective;
  for (std::size_t j = 0; j < instance.generators.size(); ++j) {
    out.schedule.units.push_back(map_to_schedule(instance.generators[j], meuc.blocks[j], out.mip.incumbent));
  }
  return out;
}

TlmpResult price_tlmp(const SystemInstance& instance, const SystemSolution& system) {
  TlmpResult out;
  out.schedule = system.schedule;
  out.z_qip = system.z_qip;
  auto sys = build_2bin_system(instance);
  const auto relaxed = solve_or_throw(sys.lp, "2-Bin relaxation");
  out.relaxation_objective = relaxed.objective;
  fix_commitment(sys, system.schedule);
  const auto fixed = solve_or_throw(sys.lp, "fixed-commitment dispatch");
  out.fixed_lp_objective = fixed.objective;
  out.prices = row_duals(fixed, sys.load_balance_rows);
  out.duality = lp::verify_duality(sys.lp, fixed);
  return out;
}

TlmpResult price_tlmp(const SystemInstance& instance, const MipOptions& options) {
  return price_tlmp(instance, solve_system(instance, options));
}

ChpResult price_chp(const SystemInstance& instance) {
  const auto meuc = assemble_meuc(instance);
  const auto sol = solve_or_throw(meuc.lp, "convex hull LP");
  ChpResult out;
  out.relaxation_objective = sol.objective;
  out.prices = row_duals(sol, meuc.load_balance_rows);
  out.duality = lp::verify_duality(meuc.lp, sol);
  return out;
}

RelaxationResult relax_2bin(const SystemInstance& instance) {
  const auto sys = build_2bin_system(instance);
  const auto sol = solve_or_throw(sys.lp, "2-Bin relaxation");
  return {row_duals(sol, sys.load_balance_rows), sol.objective};
}

std::vector<GeneratorUplift> uplift(const SystemInstance& instance, const PriceVector& pi,
                                    const Schedule& iso_schedule) {
  std::vector<GeneratorUplift> out;
  for (std::size_t j = 0; j < instance.generators.size(); ++j) {
    const auto& gen = instance.generators[j];
    const auto& iso = iso_schedule.units.at(j);
    GeneratorUplift row;
    row.id = gen.id;
    double revenue = 0.0;
    for (std::size_t t = 0; t < iso.x.size(); ++t) revenue += pi[t] * iso.x[t];
    row.iso_profit = revenue - schedule_cost(gen, iso);
    auto best = profit_max(gen, pi);
    row.v_j = best.profit;
    row.self_schedule = std::move(best.schedule);
    row.uplift = row.v_j - row.iso_profit;
    out.push_back(std::move(row));
  }
  return out;
}

double total_uplift(const std::vector<GeneratorUplift>& rows) {
  double s = 0.0;
  for (const auto& r : rows) s += r.uplift;
  return s;
}

double lagrangian_value(const SystemInstance& instance, const PriceVector& pi) {
  double value = 0.0;
  for (const auto& gen : instance.generators) value += run_dp(gen, pi).objective;
  for (int t = 0; t < instance.horizon; ++t) value += pi[t] * instance.demand[t];
  return value;
}

PricingReport make_report(const SystemInstance& instance, PricingMethod method, const PriceVector& pi,
                          const Schedule& schedule, double z_qip, double relaxation_objective) {
  PricingReport r;
  r.method = method;
  r.prices = pi;
  r.z_qip = z_qip;
  r.relaxation_objective = relaxation_objective;
  r.per_gen = uplift(instance, pi, schedule);
  r.total_uplift = total_uplift(r.per_gen);
  return r;
}

Comparison compare(const SystemInstance& instance, const MipOptions& options) {
  Comparison out;
  const auto system = solve_system(instance, options);
  out.schedule = system.schedule;
  const auto tlmp = price_tlmp(instance, system);
  const auto chp = price_chp(instance);
  out.reports.push_back(make_report(instance, PricingMethod::kTlmp, tlmp.prices, system.schedule, system.z_qip,
                                    tlmp.relaxation_objective));
  out.reports.push_back(make_report(instance, PricingMethod::kChp, chp.prices, system.schedule, system.z_qip,
                                    chp.relaxation_objective));
  const double u_tlmp = out.reports[0].total_uplift;
  const double u_chp = out.reports[1].total_uplift;
  out.gap_tm = std::abs(u_tlmp) > 1e-9 ? (u_tlmp - u_chp) / u_tlmp : 0.0;
  return out;
}

std::string format_number(double v) {
  if (std::abs(v) < 5e-10) v = 0.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

void write_prices_csv(std::ostream& out, const std::vector<PricingReport>& reports) {
  out << "method,period,price\n";
  for (const auto& r : reports) {
    for (std::size_t t = 0; t < r.prices.size(); ++t) {
      out << to_string(r.method) << ',' << t + 1 << ',' << format_number(r.prices[t]) << '\n';
    }
  }
}

void write_uplift_csv(std::ostream& out, const std::vector<PricingReport>& reports) {
  out << "method,generator,v_j,iso_profit,uplift\n";
  for (const auto& r : reports) {
    for (const auto& g : r.per_gen) {
      out << to_string(r.method) << ',' << g.id << ',' << format_number(g.v_j) << ','
          << format_number(g.iso_profit) << ',' << format_number(g.uplift) << '\n';
    }
  }
}

void write_summary_csv(std::ostream& out, const std::vector<PricingReport>& reports, double gap_tm) {
  out << "method,total_uplift,z_qip,relaxation_obj,gap_tm\n";
  for (const auto& r : reports) {
    out << to_string(r.method) << ',' << format_number(r.total_uplift) << ',' << format_number(r.z_qip) << ','
        << format_number(r.relaxation_objective) << ',' << format_number(gap_tm) << '\n';
  }
}

}  // namespace chp
