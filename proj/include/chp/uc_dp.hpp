#pragma once

#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "chp/model.hpp"

namespace chp {

struct EdResult {
  double cost = 0.0;
  std::vector<double> dispatch;  // periods t..k
};

// Economic dispatch over the on-interval [t, k] (1-based) with net cost
// sum_s max_j((a_j^s - pi_s) q + b_j^s). Throws Infeasible when the bounds and
// ramp caps admit no dispatch.
EdResult solve_ed(const GeneratorSpec& gen, int t, int k, const PriceVector& pi);

// Lazily filled C(t,k) memo for one (generator, price) pair. Infeasible
// intervals are stored with an infinite cost.
class IntervalCostCache {
 public:
  IntervalCostCache(const GeneratorSpec& gen, PriceVector pi) : gen_(&gen), pi_(std::move(pi)) {}

  const EdResult& get(int t, int k);
  double cost(int t, int k) { return get(t, k).cost; }
  const std::map<std::pair<int, int>, EdResult>& entries() const { return memo_; }

 private:
  const GeneratorSpec* gen_;
  PriceVector pi_;
  std::map<std::pair<int, int>, EdResult> memo_;
};

// Successor sentinel meaning "stay off to the end".
inline constexpr int kStayOff = -1;

struct ValueTables {
  int horizon = 0;
  std::map<int, double> v_down;    // V_down(t): on through t, off at t+1
  std::map<int, double> v_up;      // V_up(t): start at t
  std::map<int, int> down_next;    // next start period, or kStayOff
  std::map<int, int> up_next;      // last on period of the interval (T = stay on)
  double root = 0.0;
  // Initially on: last period of the first on-interval (0 = off from period 1).
  // Initially off: first start period, or kStayOff.
  int root_next = kStayOff;
};

struct DpResult {
  double objective = 0.0;
  ValueTables tables;
  IntervalCostCache cache;
};

// Minimizes generation + start-up + shut-down cost - pi.x over all feasible
// schedules of one generator. Throws Infeasible if nothing is feasible.
DpResult run_dp(const GeneratorSpec& gen, const PriceVector& pi);

// Traces the argmin chain. The returned cost is g_j (no revenue term).
UnitSchedule extract_schedule(const GeneratorSpec& gen, DpResult& dp);

struct ProfitResult {
  double profit = 0.0;  // v_j(pi)
  UnitSchedule schedule;
};

ProfitResult profit_max(const GeneratorSpec& gen, const PriceVector& pi);

class EnumerationTooLarge : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct BruteForceResult {
  double objective = 0.0;
  UnitSchedule schedule;
};

inline constexpr int kBruteForceMaxHorizon = 12;

// Enumerates every on/off string; dispatch per on-interval via solve_ed.
BruteForceResult brute_force_uc(const GeneratorSpec& gen, const PriceVector& pi);

// CSV of C(t,k), V_down and V_up for debugging.
void write_dp_trace(const DpResult& dp, std::ostream& out);

}  // namespace chp
