#include "chp/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace chp {

double PeriodCost::evaluate(double x) const {
  double best = -std::numeric_limits<double>::infinity();
  for (const auto& p : pieces) best = std::max(best, p.slope * x + p.intercept);
  return best;
}

double DurationCost::at(int duration) const {
  if (values.empty()) return 0.0;
  const int idx = std::clamp(duration, 1, static_cast<int>(values.size())) - 1;
  return values[idx];
}

int initial_on_hold(const GeneratorSpec& gen, int horizon) {
  return std::min(std::max(gen.min_up - gen.initial.periods, 0), horizon);
}

int initial_off_wait(const GeneratorSpec& gen) {
  return std::max(gen.min_down - gen.initial.periods + 1, 0);
}

int earliest_start(const GeneratorSpec& gen) { return std::max(initial_off_wait(gen), 1); }

double Schedule::total_cost() const {
  double total = 0.0;
  for (const auto& u : units) total += u.cost;
  return total;
}

std::string to_string(const Diagnostic& d) {
  std::ostringstream os;
  os << (d.severity == Severity::kError ? "error" : "warning");
  if (!d.generator.empty()) os << " [" << d.generator << "]";
  os << " " << d.field << ": " << d.message;
  return os.str();
}

bool has_errors(std::span<const Diagnostic> diagnostics) {
  return std::any_of(diagnostics.begin(), diagnostics.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::kError; });
}

std::vector<int> dominated_pieces(const PeriodCost& cost, double lo, double hi) {
  // Piece j survives iff a_j x + b_j beats every other piece somewhere on
  // [lo, hi]. The gap is concave piecewise linear, so checking the interval
  // ends and all pairwise crossings inside it is exhaustive.
  const auto& p = cost.pieces;
  const int n = static_cast<int>(p.size());
  std::vector<double> probes{lo, hi};
  for (int i = 0; i < n; ++i) {
    for (int k = i + 1; k < n; ++k) {
      const double da = p[i].slope - p[k].slope;
      if (std::abs(da) < 1e-15) continue;
      const double x = (p[k].intercept - p[i].intercept) / da;
      if (x > lo && x < hi) probes.push_back(x);
    }
  }
  std::vector<int> dropped;
  std::vector<bool> alive(n, true);
  for (int j = 0; j < n; ++j) {
    bool attains = false;
    for (double x : probes) {
      const double mine = p[j].slope * x + p[j].intercept;
      double others = -std::numeric_limits<double>::infinity();
      for (int i = 0; i < n; ++i) {
        if (i != j && alive[i]) others = std::max(others, p[i].slope * x + p[i].intercept);
      }
      const double scale = 1.0 + std::abs(mine);
      if (mine > others + 1e-9 * scale) {
        attains = true;
        break;
      }
    }
    // A piece tied everywhere with a live one is a duplicate; the later copy stays.
    if (!attains && n - static_cast<int>(dropped.size()) > 1) {
      alive[j] = false;
      dropped.push_back(j);
    }
  }
  return dropped;
}

std::vector<Diagnostic> remove_dominated_pieces(SystemInstance& instance) {
  std::vector<Diagnostic> out;
  for (auto& gen : instance.generators) {
    for (std::size_t s = 0; s < gen.cost.size(); ++s) {
      auto& pc = gen.cost[s];
      const auto dropped = dominated_pieces(pc, gen.c_min, gen.c_max);
      if (dropped.empty()) continue;
      for (auto it = dropped.rbegin(); it != dropped.rend(); ++it) {
        pc.pieces.erase(pc.pieces.begin() + *it);
        out.push_back({Severity::kWarning, gen.id, "cost[" + std::to_string(s) + "]",
                       "dominated piece " + std::to_string(*it) + " removed"});
      }
    }
  }
  return out;
}

PeriodCost tangent_pieces(double alpha, double beta, double c, double lo, double hi, int pieces) {
  if (pieces < 1) throw std::invalid_argument("piece count must be at least 1");
  PeriodCost out;
  const double width = (hi - lo) / pieces;
  for (int i = 0; i < pieces; ++i) {
    const double at = lo + (i + 0.5) * width;
    out.pieces.push_back({2.0 * alpha * at + beta, c - alpha * at * at});
  }
  return out;
}

namespace {

bool finite(double v) { return std::isfinite(v); }

void check_generator(const GeneratorSpec& g, int horizon, std::vector<Diagnostic>& out) {
  auto err = [&](std::string field, std::string msg) {
    out.push_back({Severity::kError, g.id, std::move(field), std::move(msg)});
  };
  if (g.id.empty()) err("id", "empty generator id");
  if (g.min_up < 1) err("L", "min-up must be at least 1");
  if (g.min_down < 1) err("ell", "min-down must be at least 1");
  if (!finite(g.c_min) || !finite(g.c_max) || g.c_min < 0.0 || g.c_min > g.c_max) {
    err("c_min", "bounds must satisfy 0 <= c_min <= c_max");
  }
  if (!finite(g.ramp) || g.ramp < 0.0) err("ramp", "ramp must be non-negative");
  if (!finite(g.start_ramp) || g.start_ramp < g.c_min) {
    err("start_ramp", "start ramp below minimum output");
  }
  for (const auto* table : {&g.startup_cost, &g.shutdown_cost}) {
    const std::string field = table == &g.startup_cost ? "startup_cost" : "shutdown_cost";
    if (table->values.empty()) err(field, "empty duration cost table");
    for (double v : table->values) {
      if (!finite(v) || v < 0.0) err(field, "duration costs must be finite and non-negative");
    }
  }
  if (g.initial.periods < 1) err("initial", "initial duration must be at least 1");
  if (g.horizon() != horizon) err("cost", "cost length mismatch");
  for (std::size_t s = 0; s < g.cost.size(); ++s) {
    const auto& pc = g.cost[s];
    const std::string field = "cost[" + std::to_string(s) + "]";
    if (pc.pieces.empty()) {
      err(field, "period needs at least one piece");
      continue;
    }
    bool ok = true;
    for (const auto& p : pc.pieces) ok = ok && finite(p.slope) && finite(p.intercept);
    if (!ok) {
      err(field, "non-finite cost piece");
      continue;
    }
    for (int j : dominated_pieces(pc, g.c_min, g.c_max)) {
      out.push_back({Severity::kWarning, g.id, field, "piece " + std::to_string(j) + " is dominated"});
    }
  }
}

}  // namespace

std::vector<Diagnostic> validate(const SystemInstance& instance) {
  std::vector<Diagnostic> out;
  const int horizon = instance.horizon;
  if (horizon < 1) out.push_back({Severity::kError, "", "T", "horizon must be at least 1"});
  if (static_cast<int>(instance.demand.size()) != horizon) {
    out.push_back({Severity::kError, "", "demand", "demand length mismatch"});
  }
  for (double d : instance.demand) {
    if (!finite(d) || d < 0.0) {
      out.push_back({Severity::kError, "", "demand", "demand must be finite and non-negative"});
      break;
    }
  }
  std::set<std::string> ids;
  for (const auto& g : instance.generators) {
    if (!g.id.empty() && !ids.insert(g.id).second) {
      out.push_back({Severity::kError, g.id, "id", "duplicate generator id"});
    }
    check_generator(g, horizon, out);
  }
  double capacity = 0.0;
  for (const auto& g : instance.generators) capacity += g.c_max;
  const double peak = instance.demand.empty()
                          ? 0.0
                          : *std::max_element(instance.demand.begin(), instance.demand.end());
  if (capacity < peak) {
    out.push_back({Severity::kWarning, "", "generators", "total capacity below peak demand"});
  }
  return out;
}

std::vector<OnInterval> on_intervals(std::span<const int> u) {
  std::vector<OnInterval> out;
  const int n = static_cast<int>(u.size());
  for (int s = 0; s < n; ++s) {
    if (u[s] == 0) continue;
    int e = s;
    while (e + 1 < n && u[e + 1] != 0) ++e;
    out.push_back({s + 1, e + 1});
    s = e;
  }
  return out;
}

std::optional<double> commitment_cost(const GeneratorSpec& gen, std::span<const int> u) {
  const int horizon = static_cast<int>(u.size());
  const auto intervals = on_intervals(u);
  const bool init_on = gen.initial.is_on();
  const int s0 = gen.initial.periods;
  double cost = 0.0;
  // Last on period before the current off stretch; 0 stands for "before the
  // horizon" when initially on, and -infinity (no restriction) otherwise.
  std::optional<int> last_on;
  if (init_on) {
    last_on = 0;
    if (u.empty() || u[0] == 0) {
      if (s0 < gen.min_up) return std::nullopt;
      if (horizon > 0) cost += gen.shutdown_cost.at(s0);
    }
  }
  for (const auto& iv : intervals) {
    const bool continuation = init_on && iv.first == 1;
    if (continuation) {
      if (iv.last < horizon) {
        if (s0 + iv.last < gen.min_up) return std::nullopt;
        cost += gen.shutdown_cost.at(s0 + iv.last);
      }
      last_on = iv.last;
      continue;
    }
    int off_len;
    if (last_on) {
      off_len = iv.first - *last_on - 1;
    } else {
      off_len = gen.initial.periods + iv.first - 1;
    }
    if (off_len < gen.min_down) return std::nullopt;
    cost += gen.startup_cost.at(off_len);
    if (iv.last < horizon) {
      const int len = iv.last - iv.first + 1;
      if (len < gen.min_up) return std::nullopt;
      cost += gen.shutdown_cost.at(len);
    }
    last_on = iv.last;
  }
  return cost;
}

std::vector<int> startup_indicators(const GeneratorSpec& gen, std::span<const int> u) {
  std::vector<int> v(u.size(), 0);
  for (std::size_t s = 0; s < u.size(); ++s) {
    const bool prev_on = s == 0 ? gen.initial.is_on() : u[s - 1] != 0;
    v[s] = (u[s] != 0 && !prev_on) ? 1 : 0;
  }
  return v;
}

bool start_ramp_applies(const GeneratorSpec& gen, const OnInterval& interval) {
  return !(interval.first == 1 && gen.initial.is_on());
}

bool shutdown_ramp_applies(const GeneratorSpec&, const OnInterval& interval, int horizon) {
  return interval.last < horizon;
}

double generation_cost(const GeneratorSpec& gen, std::span<const int> u, std::span<const double> x) {
  double total = 0.0;
  for (std::size_t s = 0; s < u.size(); ++s) {
    if (u[s] != 0) total += gen.cost[s].evaluate(x[s]);
  }
  return total;
}

double schedule_cost(const GeneratorSpec& gen, const UnitSchedule& schedule) {
  const auto commit = commitment_cost(gen, schedule.u);
  if (!commit) throw std::invalid_argument("infeasible commitment for generator " + gen.id);
  return *commit + generation_cost(gen, schedule.u, schedule.x);
}

std::vector<Diagnostic> check_schedule(const GeneratorSpec& gen, const UnitSchedule& sch, double tol) {
  std::vector<Diagnostic> out;
  auto err = [&](std::string field, std::string msg) {
    out.push_back({Severity::kError, gen.id, std::move(field), std::move(msg)});
  };
  const int horizon = gen.horizon();
  if (static_cast<int>(sch.u.size()) != horizon || static_cast<int>(sch.v.size()) != horizon ||
      static_cast<int>(sch.x.size()) != horizon) {
    err("schedule", "length mismatch");
    return out;
  }
  for (int s = 0; s < horizon; ++s) {
    if (sch.u[s] != 0 && sch.u[s] != 1) err("u", "non-binary status");
    if (sch.v[s] != 0 && sch.v[s] != 1) err("v", "non-binary start-up");
  }
  if (sch.v != startup_indicators(gen, sch.u)) err("v", "start-ups inconsistent with u");
  if (!commitment_cost(gen, sch.u)) err("u", "min-up/min-down or initial condition violated");
  for (int s = 0; s < horizon; ++s) {
    const double x = sch.x[s];
    if (sch.u[s] == 0) {
      if (std::abs(x) > tol) err("x", "dispatch while off at period " + std::to_string(s + 1));
    } else if (x < gen.c_min - tol || x > gen.c_max + tol) {
      err("x", "dispatch outside bounds at period " + std::to_string(s + 1));
    }
  }
  for (const auto& iv : on_intervals(sch.u)) {
    if (start_ramp_applies(gen, iv) && sch.x[iv.first - 1] > gen.start_ramp + tol) {
      err("x", "start ramp exceeded at period " + std::to_string(iv.first));
    }
    if (shutdown_ramp_applies(gen, iv, horizon) && sch.x[iv.last - 1] > gen.start_ramp + tol) {
      err("x", "shut-down ramp exceeded at period " + std::to_string(iv.last));
    }
    for (int s = iv.first + 1; s <= iv.last; ++s) {
      if (std::abs(sch.x[s - 1] - sch.x[s - 2]) > gen.ramp + tol) {
        err("x", "ramp exceeded at period " + std::to_string(s));
      }
    }
  }
  return out;
}

}  // namespace chp
