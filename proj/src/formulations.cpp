#include "chp/formulations.hpp"

#include <algorithm>
#include <cmath>

namespace chp {

namespace {

using lp::Sense;
using lp::Term;

std::string idx(const std::string& base, int a) { return base + "[" + std::to_string(a) + "]"; }
std::string idx(const std::string& base, int a, int b) {
  return base + "[" + std::to_string(a) + "," + std::to_string(b) + "]";
}
std::string idx(const std::string& base, int a, int b, int c) {
  return base + "[" + std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(c) + "]";
}
std::string at_t(const std::string& base, int t) { return base + ":t=" + std::to_string(t); }

double price_at(const PriceVector& pi, int s) { return pi.size() == 0 ? 0.0 : pi[s - 1]; }

void check_horizon(const GeneratorSpec& gen, int horizon, const PriceVector& pi) {
  if (gen.horizon() != horizon) {
    throw std::invalid_argument("generator " + gen.id + " has " + std::to_string(gen.horizon()) +
                                " cost periods, horizon is " + std::to_string(horizon));
  }
  if (pi.size() != 0 && static_cast<int>(pi.size()) != horizon) {
    throw std::invalid_argument("price vector length does not match horizon");
  }
}

}  // namespace

IndexSets enumerate_index_sets(const GeneratorSpec& gen, int horizon) {
  const int T = horizon;
  const int L = gen.min_up;
  const int ell = gen.min_down;
  IndexSets sets;
  sets.initially_on = gen.initial.is_on();
  if (sets.initially_on) {
    const int t0 = initial_on_hold(gen, T);
    sets.t0 = t0;
    for (int k = std::max(t0, 1); k <= T; ++k) sets.tk1.emplace_back(1, k);
    for (int t = t0 + ell + 1; t <= T; ++t) {
      for (int k = std::min(t + L - 1, T); k <= T; ++k) sets.tk2.emplace_back(t, k);
    }
    for (int k = t0; k <= T - ell - 1; ++k) {
      for (int t = k + ell + 1; t <= T; ++t) sets.kt.emplace_back(k, t);
    }
    sets.w_first = t0;
    sets.w_last = T;
    sets.theta_first = t0;
    sets.theta_last = T - 1;
  } else {
    const int e = earliest_start(gen);
    sets.t0 = e;
    for (int t = e; t <= T; ++t) {
      for (int k = std::min(t + L - 1, T); k <= T; ++k) sets.tk2.emplace_back(t, k);
    }
    for (int k = e + L - 1; k <= T - ell - 1; ++k) {
      for (int t = k + ell + 1; t <= T; ++t) sets.kt.emplace_back(k, t);
    }
    sets.w_first = e;
    sets.w_last = T;
    sets.theta_first = e + L - 1;
    sets.theta_last = T - 1;
  }
  return sets;
}

void VariableMap::add(const std::string& name, int col) {
  if (by_name_.count(name) || by_col_.count(col)) {
    throw std::invalid_argument("duplicate variable mapping " + name);
  }
  by_name_[name] = col;
  by_col_[col] = name;
}

int VariableMap::col(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) throw std::out_of_range("unknown variable " + name);
  return it->second;
}

std::optional<int> VariableMap::find(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

const std::string& VariableMap::name(int col) const {
  auto it = by_col_.find(col);
  if (it == by_col_.end()) throw std::out_of_range("unknown column " + std::to_string(col));
  return it->second;
}

std::vector<int> EucBlock::binary_columns() const {
  std::vector<int> out;
  for (const auto& [t, c] : w) out.push_back(c);
  if (w_never >= 0) out.push_back(w_never);
  for (const auto& [key, c] : y) out.push_back(c);
  for (const auto& [key, c] : z) out.push_back(c);
  for (const auto& [t, c] : theta) out.push_back(c);
  return out;
}

EucBlock add_euc_block(lp::LinearProgram& lp, const GeneratorSpec& gen, int horizon, const PriceVector& pi,
                       const std::string& prefix) {
  check_horizon(gen, horizon, pi);
  const int T = horizon;
  const bool on = gen.initial.is_on();
  const int s0 = gen.initial.periods;
  EucBlock b;
  b.id = gen.id;
  b.sets = enumerate_index_sets(gen, T);
  const auto& sets = b.sets;

  auto var = [&](const std::string& name, double lo, double hi, double cost) {
    const int c = lp.add_var(prefix + name, lo, hi, cost);
    b.vars.add(name, c);
    return c;
  };
  auto row = [&](const std::string& name, std::vector<Term> terms, Sense sense, double rhs) {
    return lp.add_row(prefix + name, std::move(terms), sense, rhs);
  };

  for (int t = sets.w_first; t <= sets.w_last; ++t) {
    double cost;
    if (on) {
      cost = t <= T - 1 ? gen.shutdown_cost.at(t + s0) : 0.0;
    } else {
      cost = gen.startup_cost.at(s0 + t - 1);
    }
    b.w[t] = var(idx("w", t), 0.0, 1.0, cost);
  }
  if (!on) {
    b.w_never = lp.add_var(prefix + "w[never]", 0.0, 1.0, 0.0);
    b.vars.add("w[never]", b.w_never);
  }
  for (const auto& [t, k] : sets.tk2) {
    b.y[{t, k}] = var(idx("y", t, k), 0.0, 1.0, k <= T - 1 ? gen.shutdown_cost.at(k - t + 1) : 0.0);
  }
  for (const auto& [k, t] : sets.kt) {
    b.z[{k, t}] = var(idx("z", k, t), 0.0, 1.0, gen.startup_cost.at(t - k - 1));
  }
  for (int t = sets.theta_first; t <= sets.theta_last; ++t) b.theta[t] = var(idx("theta", t), 0.0, 1.0, 0.0);

  // Interval columns and their linking rows.
  auto add_interval = [&](int t, int k, int ind, bool first_run) {
    for (int s = t; s <= k; ++s) {
      b.q[{t, k, s}] = var(idx("q", t, k, s), 0.0, lp::kInf, 0.0);
      b.phi[{t, k, s}] = var(idx("phi", t, k, s), -lp::kInf, lp::kInf, 1.0);
    }
    const std::string tag = std::to_string(t) + "," + std::to_string(k);
    for (int s = t; s <= k; ++s) {
      const int qs = b.q.at({t, k, s});
      const std::string ts = tag + "," + std::to_string(s);
      row("ub:" + ts, {{qs, 1.0}, {ind, -gen.c_max}}, Sense::kLessEqual, 0.0);
      row("lb:" + ts, {{qs, 1.0}, {ind, -gen.c_min}}, Sense::kGreaterEqual, 0.0);
    }
    if (!first_run) row("su:" + tag, {{b.q.at({t, k, t}), 1.0}, {ind, -gen.start_ramp}}, Sense::kLessEqual, 0.0);
    if (k <= T - 1) row("sd:" + tag, {{b.q.at({t, k, k}), 1.0}, {ind, -gen.start_ramp}}, Sense::kLessEqual, 0.0);
    for (int s = t + 1; s <= k; ++s) {
      const int prev = b.q.at({t, k, s - 1});
      const int cur = b.q.at({t, k, s});
      const std::string ts = tag + "," + std::to_string(s);
      row("rd:" + ts, {{prev, 1.0}, {cur, -1.0}, {ind, -gen.ramp}}, Sense::kLessEqual, 0.0);
      row("ru:" + ts, {{cur, 1.0}, {prev, -1.0}, {ind, -gen.ramp}}, Sense::kLessEqual, 0.0);
    }
    for (int s = t; s <= k; ++s) {
      const auto& pieces = gen.cost[s - 1].pieces;
      for (std::size_t j = 0; j < pieces.size(); ++j) {
        row("cost:" + tag + "," + std::to_string(s) + "," + std::to_string(j + 1),
            {{b.phi.at({t, k, s}), 1.0},
             {b.q.at({t, k, s}), -(pieces[j].slope - price_at(pi, s))},
             {ind, -pieces[j].intercept}},
            Sense::kGreaterEqual, 0.0);
      }
    }
  };

  // Status tracking.
  std::vector<Term> sum_w;
  for (const auto& [t, c] : b.w) sum_w.push_back({c, 1.0});
  if (b.w_never >= 0) sum_w.push_back({b.w_never, 1.0});
  row("sumw", sum_w, Sense::kEqual, 1.0);
  for (int t = sets.theta_first; t <= sets.theta_last; ++t) {
    std::vector<Term> terms;
    if (on) terms.push_back({b.w.at(t), -1.0});
    for (const auto& [key, c] : b.z) {
      if (key.first == t) terms.push_back({c, 1.0});
    }
    for (const auto& [key, c] : b.y) {
      if (key.second == t) terms.push_back({c, -1.0});
    }
    terms.push_back({b.theta.at(t), 1.0});
    row(at_t("flow", t), terms, Sense::kEqual, 0.0);
  }
  const int start_first = on ? sets.t0 + gen.min_down + 1 : sets.t0;
  for (int t = start_first; t <= T; ++t) {
    std::vector<Term> terms;
    for (const auto& [key, c] : b.y) {
      if (key.first == t) terms.push_back({c, 1.0});
    }
    for (const auto& [key, c] : b.z) {
      if (key.second == t) terms.push_back({c, -1.0});
    }
    if (!on) terms.push_back({b.w.at(t), -1.0});
    row(at_t("start", t), terms, Sense::kEqual, 0.0);
  }

  for (const auto& [t, k] : sets.tk1) add_interval(t, k, b.w.at(k), true);
  for (const auto& [t, k] : sets.tk2) add_interval(t, k, b.y.at({t, k}), false);
  return b;
}

namespace {

std::string euc_prefix(const GeneratorSpec& gen) { return "euc:" + gen.id + ":"; }

}  // namespace

EucModel build_euc(const GeneratorSpec& gen, int horizon, const PriceVector& pi) {
  if (!gen.initial.is_on()) throw std::invalid_argument("build_euc needs an initially-on generator");
  EucModel m;
  m.block = add_euc_block(m.lp, gen, horizon, pi, euc_prefix(gen));
  return m;
}

EucModel build_euc_initial_off(const GeneratorSpec& gen, int horizon, const PriceVector& pi) {
  if (gen.initial.is_on()) throw std::invalid_argument("build_euc_initial_off needs an initially-off generator");
  EucModel m;
  m.block = add_euc_block(m.lp, gen, horizon, pi, euc_prefix(gen));
  return m;
}

EucModel build_euc_any(const GeneratorSpec& gen, int horizon, const PriceVector& pi) {
  return gen.initial.is_on() ? build_euc(gen, horizon, pi) : build_euc_initial_off(gen, horizon, pi);
}

std::vector<int> MeucModel::binary_columns() const {
  std::vector<int> out;
  for (const auto& b : blocks) {
    const auto cols = b.binary_columns();
    out.insert(out.end(), cols.begin(), cols.end());
  }
  return out;
}

MeucModel assemble_meuc(const SystemInstance& instance) {
  MeucModel m;
  const int T = instance.horizon;
  for (const auto& gen : instance.generators) {
    m.blocks.push_back(add_euc_block(m.lp, gen, T, {}, euc_prefix(gen)));
  }
  for (int s = 1; s <= T; ++s) {
    std::vector<Term> terms;
    for (const auto& b : m.blocks) {
      for (const auto& [key, c] : b.q) {
        if (std::get<2>(key) == s) terms.push_back({c, 1.0});
      }
    }
    m.load_balance_rows.push_back(
        m.lp.add_row(at_t("meuc:balance", s), std::move(terms), Sense::kEqual, instance.demand[s - 1]));
  }
  return m;
}

TwoBinBlock add_2bin_block(lp::LinearProgram& lp, std::vector<int>& integer_vars, const GeneratorSpec& gen,
                           int horizon, const PriceVector& pi, const std::string& prefix) {
  check_horizon(gen, horizon, pi);
  const int T = horizon;
  const int L = gen.min_up;
  const int ell = gen.min_down;
  const bool on = gen.initial.is_on();
  const int s0 = gen.initial.periods;
  TwoBinBlock b;
  b.id = gen.id;
  b.u.assign(T + 1, -1);
  b.v.assign(T + 1, -1);
  b.x.assign(T + 1, -1);
  b.phi.assign(T + 1, -1);

  auto var = [&](const std::string& name, double lo, double hi, double cost) {
    const int c = lp.add_var(prefix + name, lo, hi, cost);
    b.vars.add(name, c);
    return c;
  };
  auto row = [&](const std::string& name, std::vector<Term> terms, Sense sense, double rhs) {
    return lp.add_row(prefix + name, std::move(terms), sense, rhs);
  };

  for (int t = 1; t <= T; ++t) {
    b.u[t] = var(idx("u", t), 0.0, 1.0, 0.0);
    b.v[t] = var(idx("v", t), 0.0, 1.0, 0.0);
    b.x[t] = var(idx("x", t), 0.0, lp::kInf, 0.0);
    b.phi[t] = var(idx("phi", t), -lp::kInf, lp::kInf, 1.0);
    integer_vars.push_back(b.u[t]);
    integer_vars.push_back(b.v[t]);
  }
  // u_0 is a constant: 1 when initially on, 0 otherwise.
  const double u0 = on ? 1.0 : 0.0;
  auto prev_u = [&](int t, std::vector<Term>& terms, double coef, double& rhs) {
    if (t - 1 >= 1) {
      terms.push_back({b.u[t - 1], coef});
    } else {
      rhs -= coef * u0;
    }
  };

  if (on) {
    const int t0 = initial_on_hold(gen, T);
    for (int t = 1; t <= t0; ++t) row(at_t("init", t), {{b.u[t], 1.0}}, Sense::kEqual, 1.0);
    // Both ranges start no later than T so a short horizon still gets one
    // row covering every possible start.
    for (int t = std::max(std::min(t0 + ell + L, T), 1); t <= T; ++t) {
      std::vector<Term> terms;
      for (int i = std::max(t - L + 1, 1); i <= t; ++i) terms.push_back({b.v[i], 1.0});
      terms.push_back({b.u[t], -1.0});
      row(at_t("minup", t), terms, Sense::kLessEqual, 0.0);
    }
    for (int t = std::max(std::min(t0 + ell, T), 1); t <= T; ++t) {
      std::vector<Term> terms;
      for (int i = std::max(t - ell + 1, 1); i <= t; ++i) terms.push_back({b.v[i], 1.0});
      double rhs = 1.0;
      if (t - ell >= 1) {
        terms.push_back({b.u[t - ell], 1.0});
      } else {
        rhs -= u0;
      }
      row(at_t("mindn", t), terms, Sense::kLessEqual, rhs);
    }
  } else {
    const int e = earliest_start(gen);
    for (int t = 1; t <= std::min(e - 1, T); ++t) row(at_t("init", t), {{b.u[t], 1.0}}, Sense::kEqual, 0.0);
    for (int t = 1; t <= T; ++t) {
      std::vector<Term> terms;
      for (int i = std::max(t - L + 1, 1); i <= t; ++i) terms.push_back({b.v[i], 1.0});
      terms.push_back({b.u[t], -1.0});
      row(at_t("minup", t), terms, Sense::kLessEqual, 0.0);
    }
    for (int t = 1; t <= T; ++t) {
      std::vector<Term> terms;
      for (int i = std::max(t - ell + 1, 1); i <= t; ++i) terms.push_back({b.v[i], 1.0});
      if (t - ell >= 1) terms.push_back({b.u[t - ell], 1.0});
      row(at_t("mindn", t), terms, Sense::kLessEqual, 1.0);
    }
  }
  for (int t = 1; t <= T; ++t) {
    std::vector<Term> terms{{b.u[t], 1.0}, {b.v[t], -1.0}};
    double rhs = 0.0;
    prev_u(t, terms, -1.0, rhs);
    row(at_t("startdef", t), terms, Sense::kLessEqual, rhs);
    row(at_t("lb", t), {{b.x[t], -1.0}, {b.u[t], gen.c_min}}, Sense::kLessEqual, 0.0);
    row(at_t("ub", t), {{b.x[t], 1.0}, {b.u[t], -gen.c_max}}, Sense::kLessEqual, 0.0);
  }
  // Ramps. Period 1 only when x_0 = 0 is known (initially off).
  if (!on && T >= 1) row(at_t("rampup", 1), {{b.x[1], 1.0}}, Sense::kLessEqual, gen.start_ramp);
  const double big = gen.start_ramp - gen.ramp;
  for (int t = 2; t <= T; ++t) {
    row(at_t("rampup", t), {{b.x[t], 1.0}, {b.x[t - 1], -1.0}, {b.u[t - 1], big}}, Sense::kLessEqual,
        gen.start_ramp);
    row(at_t("rampdn", t), {{b.x[t - 1], 1.0}, {b.x[t], -1.0}, {b.u[t], big}}, Sense::kLessEqual,
        gen.start_ramp);
  }
  for (int t = 1; t <= T; ++t) {
    const auto& pieces = gen.cost[t - 1].pieces;
    for (std::size_t j = 0; j < pieces.size(); ++j) {
      row(at_t("cost", t) + ",j=" + std::to_string(j + 1),
          {{b.phi[t], 1.0}, {b.x[t], -(pieces[j].slope - price_at(pi, t))}, {b.u[t], -pieces[j].intercept}},
          Sense::kGreaterEqual, 0.0);
    }
  }

  auto zeta_shut = [&](int t) {
    auto it = b.zeta_shut.find(t);
    if (it != b.zeta_shut.end()) return it->second;
    return b.zeta_shut[t] = var(idx("zetap", t), 0.0, lp::kInf, 1.0);
  };
  auto zeta = [&](int t) {
    auto it = b.zeta.find(t);
    if (it != b.zeta.end()) return it->second;
    return b.zeta[t] = var(idx("zeta", t), 0.0, lp::kInf, 1.0);
  };
  // Shut-down after an on-run that started at k and ends at t:
  // zeta'_t >= S'(t-k+1) (v_k - sum_{s=k}^{t} (1 - u_s) - u_{t+1}).
  auto shut_row = [&](int t, int k) {
    const double c = gen.shutdown_cost.at(t - k + 1);
    std::vector<Term> terms{{zeta_shut(t), 1.0}, {b.v[k], -c}, {b.u[t + 1], c}};
    for (int s = k; s <= t; ++s) terms.push_back({b.u[s], -c});
    row("shut:t=" + std::to_string(t) + ",k=" + std::to_string(k), terms, Sense::kGreaterEqual,
        -c * (t - k + 1));
  };
  // Start-up at t after the last on period k:
  // zeta_t >= S(t-k-1) (v_t - sum_{s=k+1}^{t-1} u_s).
  auto start_row = [&](int t, int k, double c) {
    std::vector<Term> terms{{zeta(t), 1.0}, {b.v[t], -c}};
    for (int s = k + 1; s <= t - 1; ++s) terms.push_back({b.u[s], c});
    row("startcost:t=" + std::to_string(t) + ",k=" + std::to_string(k), terms, Sense::kGreaterEqual, 0.0);
  };

  if (on) {
    const int t0 = initial_on_hold(gen, T);
    // First shut-down after the initial run.
    for (int t = t0; t <= T - 1; ++t) {
      const double c = gen.shutdown_cost.at(t + s0);
      std::vector<Term> terms{{zeta_shut(t), 1.0}, {b.u[t + 1], c}};
      for (int s = 1; s <= t; ++s) terms.push_back({b.u[s], -c});
      row(at_t("firstshut", t), terms, Sense::kGreaterEqual, c * (1.0 - t));
    }
    for (int t = t0 + ell + L; t <= T - 1; ++t) {
      for (int k = t0 + ell + 1; k <= t - L + 1; ++k) shut_row(t, k);
    }
    // k runs past t - ell - 1 up to t - 1: with nondecreasing S those rows
    // stay valid and give the relaxation a floor of S v_t.
    for (int t = t0 + ell + 1; t <= T; ++t) {
      for (int k = t0; k <= t - 1; ++k) start_row(t, k, gen.startup_cost.at(std::max(t - k - 1, 1)));
    }
  } else {
    const int e = earliest_start(gen);
    for (int t = 1; t <= T - 1; ++t) {
      for (int k = e; k <= t - L + 1; ++k) shut_row(t, k);
    }
    for (int t = e; t <= T; ++t) {
      start_row(t, 0, gen.startup_cost.at(s0 + t - 1));
      for (int k = e; k <= t - 1; ++k) start_row(t, k, gen.startup_cost.at(std::max(t - k - 1, 1)));
    }
  }
  return b;
}

TwoBinModel build_2bin(const GeneratorSpec& gen, int horizon, const PriceVector& pi) {
  TwoBinModel m;
  m.block = add_2bin_block(m.lp, m.integer_vars, gen, horizon, pi, "2bin:" + gen.id + ":");
  return m;
}

TwoBinSystem build_2bin_system(const SystemInstance& instance) {
  TwoBinSystem sys;
  const int T = instance.horizon;
  for (const auto& gen : instance.generators) {
    sys.blocks.push_back(add_2bin_block(sys.lp, sys.integer_vars, gen, T, {}, "2bin:" + gen.id + ":"));
  }
  for (int s = 1; s <= T; ++s) {
    std::vector<Term> terms;
    for (const auto& b : sys.blocks) terms.push_back({b.x[s], 1.0});
    sys.load_balance_rows.push_back(
        sys.lp.add_row(at_t("2bin:balance", s), std::move(terms), Sense::kEqual, instance.demand[s - 1]));
  }
  return sys;
}

void fix_commitment(TwoBinSystem& system, const Schedule& schedule) {
  if (schedule.units.size() != system.blocks.size()) {
    throw std::invalid_argument("schedule and system have different generator counts");
  }
  for (std::size_t j = 0; j < system.blocks.size(); ++j) {
    const auto& b = system.blocks[j];
    const auto& unit = schedule.units[j];
    for (std::size_t t = 1; t < b.u.size(); ++t) {
      system.lp.lower[b.u[t]] = system.lp.upper[b.u[t]] = unit.u[t - 1];
      system.lp.lower[b.v[t]] = system.lp.upper[b.v[t]] = unit.v[t - 1];
    }
  }
}

FractionalSolution::FractionalSolution(const std::string& column, double value)
    : std::runtime_error("fractional value " + std::to_string(value) + " in column " + column),
      column_(column),
      value_(value) {}

UnitSchedule map_to_schedule(const GeneratorSpec& gen, const EucBlock& block, const std::vector<double>& primal,
                             double int_tol) {
  int worst = -1;
  double worst_dev = 0.0;
  for (int c : block.binary_columns()) {
    const double v = primal.at(c);
    const double dev = std::abs(v - std::round(v));
    if (dev > worst_dev) {
      worst_dev = dev;
      worst = c;
    }
  }
  if (worst >= 0 && worst_dev > int_tol) throw FractionalSolution(block.vars.name(worst), primal[worst]);

  const int T = gen.horizon();
  auto bin = [&](int c) { return static_cast<int>(std::lround(primal.at(c))); };
  UnitSchedule out;
  out.id = gen.id;
  out.u.assign(T, 0);
  out.v.assign(T, 0);
  out.x.assign(T, 0.0);
  for (const auto& [key, c] : block.q) {
    const double q = primal.at(c);
    if (std::abs(q) > 1e-9) out.x[std::get<2>(key) - 1] += q;
  }
  for (int s = 1; s <= T; ++s) {
    int u = 0;
    for (const auto& [t, k] : block.sets.tk1) {
      if (k >= s) u += bin(block.w.at(k));
    }
    for (const auto& [key, c] : block.y) {
      if (key.first <= s && s <= key.second) u += bin(c);
    }
    int v = 0;
    for (const auto& [key, c] : block.z) {
      if (key.second == s) v += bin(c);
    }
    if (!block.sets.initially_on) {
      auto it = block.w.find(s);
      if (it != block.w.end()) v += bin(it->second);
    }
    out.u[s - 1] = u;
    out.v[s - 1] = v;
  }
  out.cost = schedule_cost(gen, out);
  return out;
}

UnitSchedule read_2bin_schedule(const GeneratorSpec& gen, const TwoBinBlock& block,
                                const std::vector<double>& primal) {
  const int T = gen.horizon();
  UnitSchedule out;
  out.id = gen.id;
  for (int t = 1; t <= T; ++t) {
    const int u = static_cast<int>(std::lround(primal.at(block.u[t])));
    out.u.push_back(u);
    out.x.push_back(u ? primal.at(block.x[t]) : 0.0);
  }
  out.v = startup_indicators(gen, out.u);
  out.cost = schedule_cost(gen, out);
  return out;
}

}  // namespace chp
