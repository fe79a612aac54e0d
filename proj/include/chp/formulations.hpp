#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "chp/lp.hpp"
#include "chp/model.hpp"

namespace chp {

using Interval = std::pair<int, int>;

struct IndexSets {
  bool initially_on = true;
  int t0 = 0;  // initial hold (on) or earliest start period (off)
  std::vector<Interval> tk1;  // (1, k): continuation of the initial on-run
  std::vector<Interval> tk2;  // (t, k): on-interval started inside the horizon
  std::vector<Interval> kt;   // (k, t): off between shutdown after k and start at t
  int w_first = 0, w_last = -1;
  int theta_first = 0, theta_last = -1;
};

IndexSets enumerate_index_sets(const GeneratorSpec& gen, int horizon);

// Structured variable names (e.g. "y[2,3]") to LP columns and back.
class VariableMap {
 public:
  void add(const std::string& name, int col);
  int col(const std::string& name) const;  // throws std::out_of_range
  std::optional<int> find(const std::string& name) const;
  const std::string& name(int col) const;
  std::size_t size() const { return by_name_.size(); }
  const std::map<std::string, int>& by_name() const { return by_name_; }

 private:
  std::map<std::string, int> by_name_;
  std::map<int, std::string> by_col_;
};

// Column handles of one generator's interval formulation inside some LP.
struct EucBlock {
  std::string id;
  IndexSets sets;
  VariableMap vars;
  std::map<int, int> w;  // initially on: last on period of the first run; off: first start
  int w_never = -1;      // initially off: never start
  std::map<Interval, int> y;
  std::map<Interval, int> z;
  std::map<int, int> theta;
  std::map<std::tuple<int, int, int>, int> q;    // (t, k, s)
  std::map<std::tuple<int, int, int>, int> phi;  // (t, k, s)

  // Interval columns (w, y, z, theta) that must be binary.
  std::vector<int> binary_columns() const;
};

struct EucModel {
  lp::LinearProgram lp;
  EucBlock block;
};

// Interval formulation of one initially-on generator. A non-empty price is
// folded into the cost slopes (a - pi_s).
EucModel build_euc(const GeneratorSpec& gen, int horizon, const PriceVector& pi = {});
// Variant for an initially-off generator.
EucModel build_euc_initial_off(const GeneratorSpec& gen, int horizon, const PriceVector& pi = {});
// Picks the right variant from the initial state.
EucModel build_euc_any(const GeneratorSpec& gen, int horizon, const PriceVector& pi = {});

// Appends a generator block to an existing LP under the label prefix.
EucBlock add_euc_block(lp::LinearProgram& lp, const GeneratorSpec& gen, int horizon,
                       const PriceVector& pi, const std::string& prefix);

struct MeucModel {
  lp::LinearProgram lp;
  std::vector<EucBlock> blocks;
  std::vector<int> load_balance_rows;  // one per period

  std::vector<int> binary_columns() const;
};

MeucModel assemble_meuc(const SystemInstance& instance);

struct TwoBinBlock {
  std::string id;
  VariableMap vars;
  // 1-based by period; index 0 unused.
  std::vector<int> u, v, x, phi;
  std::map<int, int> zeta, zeta_shut;
};

struct TwoBinModel {
  lp::LinearProgram lp;
  std::vector<int> integer_vars;
  TwoBinBlock block;
};

TwoBinModel build_2bin(const GeneratorSpec& gen, int horizon, const PriceVector& pi = {});

TwoBinBlock add_2bin_block(lp::LinearProgram& lp, std::vector<int>& integer_vars, const GeneratorSpec& gen,
                           int horizon, const PriceVector& pi, const std::string& prefix);

struct TwoBinSystem {
  lp::LinearProgram lp;
  std::vector<int> integer_vars;
  std::vector<TwoBinBlock> blocks;
  std::vector<int> load_balance_rows;
};

TwoBinSystem build_2bin_system(const SystemInstance& instance);

// Clamps u and v of every block to a given commitment.
void fix_commitment(TwoBinSystem& system, const Schedule& schedule);

class FractionalSolution : public std::runtime_error {
 public:
  FractionalSolution(const std::string& column, double value);
  const std::string& column() const { return column_; }
  double value() const { return value_; }

 private:
  std::string column_;
  double value_;
};

// Recovers (u, v, x) from an integral interval-formulation solution.
UnitSchedule map_to_schedule(const GeneratorSpec& gen, const EucBlock& block, const std::vector<double>& primal,
                             double int_tol = 1e-6);

// (u, v, x) read off a 2-Bin solution; u and v rounded.
UnitSchedule read_2bin_schedule(const GeneratorSpec& gen, const TwoBinBlock& block,
                                const std::vector<double>& primal);

}  // namespace chp
