#include <gtest/gtest.h>

#include <sstream>

#include "chp/instance_io.hpp"
#include "chp/random_instance.hpp"
#include "chp/uc_dp.hpp"
#include "support/oracles.hpp"

namespace chp {
namespace {

SystemInstance two_unit() { return load_instance(testing::example_path("section5.json")); }

double revenue(const PriceVector& pi, const std::vector<double>& x) {
  double r = 0.0;
  for (std::size_t t = 0; t < x.size(); ++t) r += pi[t] * x[t];
  return r;
}

TEST(SolveEd, TwoUnitG2AtZeroPrice) {
  const auto g2 = two_unit().generators[1];
  const auto r = solve_ed(g2, 1, 3, PriceVector::Zero(3));
  EXPECT_NEAR(r.cost, 300.0, 1e-9);
  ASSERT_EQ(r.dispatch.size(), 3u);
  for (double x : r.dispatch) EXPECT_NEAR(x, 20.0, 1e-9);
}

TEST(SolveEd, SinglePeriodFixedOutput) {
  GeneratorSpec g;
  g.id = "U";
  g.c_min = g.c_max = 10;
  g.ramp = g.start_ramp = 10;
  g.cost = {PeriodCost{{{2.0, 0.0}}}};
  EXPECT_NEAR(solve_ed(g, 1, 1, PriceVector::Zero(1)).cost, 20.0, 1e-12);
}

TEST(SolveEd, StartRampBelowMinimumThrows) {
  auto g2 = two_unit().generators[1];
  g2.start_ramp = 10;
  EXPECT_THROW(solve_ed(g2, 2, 2, PriceVector::Zero(3)), Infeasible);
}

TEST(RunDp, TwoUnitG2ShutsDown) {
  const auto g2 = two_unit().generators[1];
  const PriceVector pi({1, 5, 6});
  auto dp = run_dp(g2, pi);
  EXPECT_NEAR(dp.objective, 0.0, 1e-9);
  const auto s = extract_schedule(g2, dp);
  EXPECT_EQ(s.u, (std::vector<int>{0, 0, 0}));
  EXPECT_EQ(s.x, (std::vector<double>{0, 0, 0}));
  EXPECT_NEAR(brute_force_uc(g2, pi).objective, 0.0, 1e-9);
}

TEST(RunDp, ZeroPriceFreeShutdown) {
  const auto g2 = two_unit().generators[1];
  EXPECT_NEAR(run_dp(g2, PriceVector::Zero(3)).objective, 0.0, 1e-9);
}

TEST(RunDp, ForcedOnByShutdownCost) {
  auto g2 = two_unit().generators[1];
  g2.min_down = 5;
  g2.shutdown_cost.values = {1e6};
  auto dp = run_dp(g2, PriceVector::Zero(3));
  EXPECT_EQ(extract_schedule(g2, dp).u, (std::vector<int>{1, 1, 1}));
  EXPECT_NEAR(dp.objective, 300.0, 1e-9);
}

TEST(ProfitMax, TwoUnit) {
  const auto inst = two_unit();
  const PriceVector pi({1, 5, 6});
  EXPECT_NEAR(profit_max(inst.generators[1], pi).profit, 0.0, 1e-9);
  EXPECT_NEAR(profit_max(inst.generators[0], pi).profit, 0.0, 1e-9);
  EXPECT_NEAR(profit_max(inst.generators[1], PriceVector::Zero(3)).profit, 0.0, 1e-9);
}

TEST(RunDp, MatchesBruteForce) {
  Rng rng(21);
  for (int trial = 0; trial < 150; ++trial) {
    const int T = 1 + trial % 7;
    const auto g = random_generator(rng, T, "R");
    const auto pi = random_prices(rng, T);
    auto dp = run_dp(g, pi);
    const auto bf = brute_force_uc(g, pi);
    ASSERT_NEAR(dp.objective, bf.objective, 1e-6) << "trial " << trial;
    const auto s = extract_schedule(g, dp);
    EXPECT_TRUE(check_schedule(g, s).empty()) << "trial " << trial;
    EXPECT_NEAR(schedule_cost(g, s) - revenue(pi, s.x), dp.objective, 1e-6) << "trial " << trial;
  }
}

TEST(RunDp, ProfitMonotoneInPrice) {
  Rng rng(8);
  for (int trial = 0; trial < 40; ++trial) {
    const int T = 5;
    const auto g = random_generator(rng, T, "R");
    auto pi = random_prices(rng, T);
    const double before = profit_max(g, pi).profit;
    for (auto& p : pi.pi) p += 1.0;
    EXPECT_GE(profit_max(g, pi).profit, before - 1e-9);
  }
}

TEST(RunDp, TraceWritesRows) {
  const auto g2 = two_unit().generators[1];
  auto dp = run_dp(g2, PriceVector({1, 5, 6}));
  std::ostringstream os;
  write_dp_trace(dp, os);
  EXPECT_NE(os.str().find("kind,t,k,value,next"), std::string::npos);
  EXPECT_NE(os.str().find("V_up,"), std::string::npos);
}

TEST(BruteForce, RejectsLongHorizon) {
  Rng rng(1);
  const auto g = random_generator(rng, kBruteForceMaxHorizon + 1, "R");
  EXPECT_THROW(brute_force_uc(g, PriceVector::Zero(kBruteForceMaxHorizon + 1)), EnumerationTooLarge);
}

}  // namespace
}  // namespace chp
