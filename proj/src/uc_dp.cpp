#include "chp/uc_dp.hpp"

#include <cmath>
#include <limits>
#include <ostream>

#include "chp/lp.hpp"

namespace chp {

namespace {

constexpr double kInfCost = std::numeric_limits<double>::infinity();
constexpr double kTieTol = 1e-9;

void check_prices(const GeneratorSpec& gen, const PriceVector& pi) {
  if (static_cast<int>(pi.size()) != gen.horizon()) {
    throw std::invalid_argument("price vector length " + std::to_string(pi.size()) +
                                " does not match horizon " + std::to_string(gen.horizon()));
  }
}

}  // namespace

EdResult solve_ed(const GeneratorSpec& gen, int t, int k, const PriceVector& pi) {
  const int horizon = gen.horizon();
  if (t < 1 || k > horizon || t > k) {
    throw std::invalid_argument("bad interval [" + std::to_string(t) + "," + std::to_string(k) + "]");
  }
  check_prices(gen, pi);
  lp::LinearProgram lp;
  const int len = k - t + 1;
  std::vector<int> x(len), phi(len);
  const OnInterval iv{t, k};
  for (int s = t; s <= k; ++s) {
    double hi = gen.c_max;
    if (s == t && start_ramp_applies(gen, iv)) hi = std::min(hi, gen.start_ramp);
    if (s == k && shutdown_ramp_applies(gen, iv, horizon)) hi = std::min(hi, gen.start_ramp);
    if (hi < gen.c_min) {
      throw Infeasible("interval [" + std::to_string(t) + "," + std::to_string(k) +
                       "] has start ramp below minimum output");
    }
    x[s - t] = lp.add_var("x:s=" + std::to_string(s), gen.c_min, hi);
    phi[s - t] = lp.add_var("phi:s=" + std::to_string(s), -lp::kInf, lp::kInf, 1.0);
  }
  for (int s = t; s <= k; ++s) {
    const auto& pieces = gen.cost[s - 1].pieces;
    for (std::size_t j = 0; j < pieces.size(); ++j) {
      lp.add_row("cost:s=" + std::to_string(s) + ":j=" + std::to_string(j + 1),
                 {{phi[s - t], 1.0}, {x[s - t], -(pieces[j].slope - pi[s - 1])}},
                 lp::Sense::kGreaterEqual, pieces[j].intercept);
    }
    if (s > t) {
      lp.add_row("rampup:s=" + std::to_string(s), {{x[s - t], 1.0}, {x[s - t - 1], -1.0}},
                 lp::Sense::kLessEqual, gen.ramp);
      lp.add_row("rampdn:s=" + std::to_string(s), {{x[s - t - 1], 1.0}, {x[s - t], -1.0}},
                 lp::Sense::kLessEqual, gen.ramp);
    }
  }
  const auto sol = lp::solve_lp(lp);
  if (sol.status != lp::Status::kOptimal) {
    throw Infeasible("economic dispatch over [" + std::to_string(t) + "," + std::to_string(k) +
                     "] is " + lp::to_string(sol.status));
  }
  EdResult out;
  out.cost = sol.objective;
  for (int s = 0; s < len; ++s) out.dispatch.push_back(sol.primal[x[s]]);
  return out;
}

const EdResult& IntervalCostCache::get(int t, int k) {
  const auto key = std::make_pair(t, k);
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  EdResult r;
  try {
    r = solve_ed(*gen_, t, k, pi_);
  } catch (const Infeasible&) {
    r.cost = kInfCost;
  }
  return memo_.emplace(key, std::move(r)).first->second;
}

DpResult run_dp(const GeneratorSpec& gen, const PriceVector& pi) {
  check_prices(gen, pi);
  const int T = gen.horizon();
  const int L = gen.min_up;
  const int ell = gen.min_down;
  DpResult dp{0.0, {}, IntervalCostCache(gen, pi)};
  auto& tab = dp.tables;
  tab.horizon = T;
  auto& cache = dp.cache;

  // Backward sweep. V_down(t) needs V_up(s) for s > t, and V_up(t) needs
  // V_down(k) for k >= t + L - 1 >= t, so V_down(t) goes first.
  for (int t = T; t >= 0; --t) {
    // Candidates are scanned in successor order and only a strict improvement
    // replaces the incumbent, so ties go to the earliest action. Staying on to
    // T or staying off counts as the last candidate.
    {
      double best = kInfCost;
      int next = kStayOff;
      for (int s = t + ell + 1; s <= T; ++s) {
        const double cand = gen.startup_cost.at(s - t - 1) + tab.v_up.at(s);
        if (cand < best - kTieTol) {
          best = cand;
          next = s;
        }
      }
      if (0.0 < best - kTieTol) {
        best = 0.0;
        next = kStayOff;
      }
      tab.v_down[t] = best;
      tab.down_next[t] = next;
    }
    if (t >= 1) {
      double best = kInfCost;
      int next = T;
      for (int k = t + L - 1; k <= T - 1; ++k) {
        const double c = cache.cost(t, k);
        if (!std::isfinite(c)) continue;
        const double cand = gen.shutdown_cost.at(k - t + 1) + c + tab.v_down.at(k);
        if (cand < best - kTieTol) {
          best = cand;
          next = k;
        }
      }
      const double stay = cache.cost(t, T);
      if (stay < best - kTieTol) {
        best = stay;
        next = T;
      }
      tab.v_up[t] = best;
      tab.up_next[t] = next;
    }
  }

  if (gen.initial.is_on()) {
    const int s0 = gen.initial.periods;
    const int t0 = initial_on_hold(gen, T);
    double best = kInfCost;
    int next = T;
    for (int k = t0; k <= T - 1; ++k) {
      const double c = k == 0 ? 0.0 : cache.cost(1, k);
      if (!std::isfinite(c)) continue;
      const double cand = gen.shutdown_cost.at(k + s0) + c + tab.v_down.at(k);
      if (cand < best - kTieTol) {
        best = cand;
        next = k;
      }
    }
    const double stay = cache.cost(1, T);
    if (stay < best - kTieTol) {
      best = stay;
      next = T;
    }
    tab.root = best;
    tab.root_next = next;
  } else {
    const int s0 = gen.initial.periods;
    double best = kInfCost;
    int next = kStayOff;
    for (int t = earliest_start(gen); t <= T; ++t) {
      const double cand = gen.startup_cost.at(s0 + t - 1) + tab.v_up.at(t);
      if (cand < best - kTieTol) {
        best = cand;
        next = t;
      }
    }
    if (0.0 < best - kTieTol) {
      best = 0.0;
      next = kStayOff;
    }
    tab.root = best;
    tab.root_next = next;
  }
  if (!std::isfinite(tab.root)) throw Infeasible("no feasible schedule for generator " + gen.id);
  dp.objective = tab.root;
  return dp;
}

UnitSchedule extract_schedule(const GeneratorSpec& gen, DpResult& dp) {
  const int T = gen.horizon();
  const auto& tab = dp.tables;
  UnitSchedule out;
  out.id = gen.id;
  out.u.assign(T, 0);
  out.x.assign(T, 0.0);
  auto fill = [&](int t, int k) {
    const auto& ed = dp.cache.get(t, k);
    for (int s = t; s <= k; ++s) {
      out.u[s - 1] = 1;
      out.x[s - 1] = ed.dispatch[s - t];
    }
  };
  int start;
  if (gen.initial.is_on()) {
    const int k = tab.root_next;
    if (k >= 1) fill(1, k);
    start = k < T ? tab.down_next.at(k) : kStayOff;
  } else {
    start = tab.root_next;
  }
  while (start != kStayOff) {
    const int k = tab.up_next.at(start);
    fill(start, k);
    start = k < T ? tab.down_next.at(k) : kStayOff;
  }
  out.v = startup_indicators(gen, out.u);
  out.cost = schedule_cost(gen, out);
  return out;
}

ProfitResult profit_max(const GeneratorSpec& gen, const PriceVector& pi) {
  auto dp = run_dp(gen, pi);
  ProfitResult out;
  out.profit = -dp.objective;
  out.schedule = extract_schedule(gen, dp);
  return out;
}

BruteForceResult brute_force_uc(const GeneratorSpec& gen, const PriceVector& pi) {
  const int T = gen.horizon();
  if (T > kBruteForceMaxHorizon) {
    throw EnumerationTooLarge("brute force limited to T <= " + std::to_string(kBruteForceMaxHorizon) +
                              ", got " + std::to_string(T));
  }
  check_prices(gen, pi);
  IntervalCostCache cache(gen, pi);
  BruteForceResult best;
  bool found = false;
  std::vector<int> u(T);
  for (unsigned mask = 0; mask < (1u << T); ++mask) {
    for (int s = 0; s < T; ++s) u[s] = (mask >> s) & 1u;
    const auto commit = commitment_cost(gen, u);
    if (!commit) continue;
    double total = *commit;
    std::vector<double> x(T, 0.0);
    bool ok = true;
    for (const auto& iv : on_intervals(u)) {
      const auto& ed = cache.get(iv.first, iv.last);
      if (!std::isfinite(ed.cost)) {
        ok = false;
        break;
      }
      total += ed.cost;
      for (int s = iv.first; s <= iv.last; ++s) x[s - 1] = ed.dispatch[s - iv.first];
    }
    if (!ok) continue;
    if (!found || total < best.objective - kTieTol) {
      found = true;
      best.objective = total;
      best.schedule.id = gen.id;
      best.schedule.u = u;
      best.schedule.x = x;
    }
  }
  if (!found) throw Infeasible("no feasible schedule for generator " + gen.id);
  best.schedule.v = startup_indicators(gen, best.schedule.u);
  best.schedule.cost = schedule_cost(gen, best.schedule);
  return best;
}

void write_dp_trace(const DpResult& dp, std::ostream& out) {
  out << "kind,t,k,value,next\n";
  for (const auto& [key, ed] : dp.cache.entries()) {
    out << "C," << key.first << ',' << key.second << ',' << ed.cost << ",\n";
  }
  for (const auto& [t, v] : dp.tables.v_down) {
    out << "V_down," << t << ",," << v << ',' << dp.tables.down_next.at(t) << '\n';
  }
  for (const auto& [t, v] : dp.tables.v_up) {
    out << "V_up," << t << ",," << v << ',' << dp.tables.up_next.at(t) << '\n';
  }
  out << "root,,," << dp.tables.root << ',' << dp.tables.root_next << '\n';
}

}  // namespace chp
