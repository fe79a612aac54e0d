#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace chp {

// No feasible commitment or dispatch exists.
class Infeasible : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// One affine piece a*x + b of a convex piecewise linear cost. The intercept is
// only paid while the unit is on.
struct CostPiece {
  double slope = 0.0;
  double intercept = 0.0;

  bool operator==(const CostPiece&) const = default;
};

// Cost curve of one period: the pointwise max of its pieces.
struct PeriodCost {
  std::vector<CostPiece> pieces;

  double evaluate(double x) const;
  bool operator==(const PeriodCost&) const = default;
};

// Start-up / shut-down cost indexed by a duration in periods. Index 1 is a
// duration of one period; durations past the end reuse the last value.
struct DurationCost {
  std::vector<double> values{0.0};

  double at(int duration) const;
  bool operator==(const DurationCost&) const = default;
};

struct InitialState {
  enum class Mode { kOn, kOff };

  Mode mode = Mode::kOn;
  int periods = 1;

  static InitialState OnFor(int periods) { return {Mode::kOn, periods}; }
  static InitialState OffFor(int periods) { return {Mode::kOff, periods}; }
  bool is_on() const { return mode == Mode::kOn; }
  bool operator==(const InitialState&) const = default;
};

struct GeneratorSpec {
  std::string id;
  int min_up = 1;           // L
  int min_down = 1;         // ell
  double c_min = 0.0;
  double c_max = 0.0;
  double ramp = 0.0;        // V, between consecutive on periods
  double start_ramp = 0.0;  // Vbar, first and last period of an on-interval
  DurationCost startup_cost;   // S, indexed by off-duration
  DurationCost shutdown_cost;  // S', indexed by on-duration
  std::vector<PeriodCost> cost;  // one per period
  InitialState initial;

  int horizon() const { return static_cast<int>(cost.size()); }
  bool operator==(const GeneratorSpec&) const = default;
};

// Last period the unit is forced to stay on when initially on:
// t0 = max(L - s0, 0), clamped to the horizon.
int initial_on_hold(const GeneratorSpec& gen, int horizon);

// Raw t0^- = max(ell - s0^- + 1, 0) for an initially-off unit.
int initial_off_wait(const GeneratorSpec& gen);

// First period an initially-off unit may start, max(t0^-, 1). May exceed the
// horizon, in which case the unit cannot start at all.
int earliest_start(const GeneratorSpec& gen);

struct SystemInstance {
  int horizon = 0;  // T
  std::vector<double> demand;
  std::vector<GeneratorSpec> generators;

  bool operator==(const SystemInstance&) const = default;
};

// Strongly typed per-period price vector.
struct PriceVector {
  std::vector<double> pi;

  PriceVector() = default;
  explicit PriceVector(std::vector<double> values) : pi(std::move(values)) {}
  static PriceVector Zero(int horizon) { return PriceVector(std::vector<double>(horizon, 0.0)); }

  std::size_t size() const { return pi.size(); }
  double operator[](std::size_t i) const { return pi[i]; }
  double& operator[](std::size_t i) { return pi[i]; }
};

// Commitment and dispatch of one generator in 2-Bin variable space.
struct UnitSchedule {
  std::string id;
  std::vector<int> u;     // on/off
  std::vector<int> v;     // start-up
  std::vector<double> x;  // dispatch, MW
  double cost = 0.0;      // generation + start-up + shut-down cost
};

struct Schedule {
  std::vector<UnitSchedule> units;

  double total_cost() const;
};

enum class Severity { kWarning, kError };

struct Diagnostic {
  Severity severity = Severity::kError;
  std::string generator;  // empty for instance-level findings
  std::string field;
  std::string message;

  bool operator==(const Diagnostic&) const = default;
};

std::string to_string(const Diagnostic& d);
bool has_errors(std::span<const Diagnostic> diagnostics);

std::vector<Diagnostic> validate(const SystemInstance& instance);

// Pieces that never attain the max on [lo, hi]; reported by index.
std::vector<int> dominated_pieces(const PeriodCost& cost, double lo, double hi);

// Drops dominated pieces from every period of every generator. Returns one
// warning per dropped piece.
std::vector<Diagnostic> remove_dominated_pieces(SystemInstance& instance);

// N tangent lines of alpha*x^2 + beta*x + c at the midpoints of N equal
// sub-intervals of [lo, hi].
PeriodCost tangent_pieces(double alpha, double beta, double c, double lo, double hi, int pieces);

struct OnInterval {
  int first = 0;  // 1-based period
  int last = 0;
};

// Maximal runs of 1 in an on/off string, 1-based.
std::vector<OnInterval> on_intervals(std::span<const int> u);

// Start-up plus shut-down cost of an on/off string, or nullopt when it breaks
// the initial condition, min-up or min-down.
std::optional<double> commitment_cost(const GeneratorSpec& gen, std::span<const int> u);

// Start-up indicators implied by an on/off string and the initial state.
std::vector<int> startup_indicators(const GeneratorSpec& gen, std::span<const int> u);

// Whether the dispatch cap Vbar applies to the first / last period of an
// on-interval: not for the initial-on continuation, not when it runs to T.
bool start_ramp_applies(const GeneratorSpec& gen, const OnInterval& interval);
bool shutdown_ramp_applies(const GeneratorSpec& gen, const OnInterval& interval, int horizon);

// Generation cost of a dispatch under commitment u (intercepts only when on).
double generation_cost(const GeneratorSpec& gen, std::span<const int> u, std::span<const double> x);

// Full cost g_j of a unit schedule; throws std::invalid_argument when the
// commitment is infeasible.
double schedule_cost(const GeneratorSpec& gen, const UnitSchedule& schedule);

// Checks every schedule invariant: binary u/v, bounds, ramps, min-up/down.
std::vector<Diagnostic> check_schedule(const GeneratorSpec& gen, const UnitSchedule& schedule,
                                       double tol = 1e-6);

}  // namespace chp
