#include <gtest/gtest.h>

#include <sstream>

#include "chp/instance_io.hpp"
#include "chp/pricing.hpp"
#include "chp/random_instance.hpp"
#include "support/oracles.hpp"

namespace chp {
namespace {

SystemInstance two_unit() { return load_instance(testing::example_path("section5.json")); }

void expect_prices(const PriceVector& got, std::vector<double> want, double tol) {
  ASSERT_EQ(got.size(), want.size());
  for (std::size_t t = 0; t < want.size(); ++t) EXPECT_NEAR(got[t], want[t], tol) << "period " << t + 1;
}

TEST(Solve, TwoUnit) {
  const auto s = solve_system(two_unit());
  EXPECT_NEAR(s.z_qip, 835.0, 1e-6);
  ASSERT_EQ(s.schedule.units.size(), 2u);
  EXPECT_EQ(s.schedule.units[0].x, (std::vector<double>{0, 35, 10}));
  EXPECT_EQ(s.schedule.units[1].x, (std::vector<double>{40, 45, 50}));
  EXPECT_EQ(s.schedule.units[1].u, (std::vector<int>{1, 1, 1}));
}

TEST(Tlmp, TwoUnit) {
  const auto inst = two_unit();
  const auto r = price_tlmp(inst);
  expect_prices(r.prices, {1, 5, 6}, 1e-6);
  EXPECT_NEAR(r.fixed_lp_objective, 835.0, 1e-6);
  EXPECT_TRUE(r.duality.pass);
  const auto rows = uplift(inst, r.prices, r.schedule);
  EXPECT_NEAR(total_uplift(rows), 35.0, 1e-6);
  EXPECT_NEAR(rows[0].uplift, 0.0, 1e-6);
  EXPECT_NEAR(rows[1].iso_profit, -35.0, 1e-6);
}

TEST(Chp, TwoUnit) {
  const auto inst = two_unit();
  const auto r = price_chp(inst);
  EXPECT_NEAR(r.relaxation_objective, 828.0, 1e-6);
  expect_prices(r.prices, {1.7, 5, 6}, 1e-4);
  const auto s = solve_system(inst);
  EXPECT_NEAR(total_uplift(uplift(inst, r.prices, s.schedule)), 7.0, 1e-6);
  EXPECT_NEAR(lagrangian_value(inst, r.prices), 828.0, 1e-6);
}

TEST(Relaxation, TwoUnit) {
  const auto inst = two_unit();
  const auto r = relax_2bin(inst);
  EXPECT_NEAR(r.objective, 808.18, 0.01);
  const auto s = solve_system(inst);
  EXPECT_NEAR(total_uplift(uplift(inst, r.prices, s.schedule)), 26.82, 0.01);
}

TEST(Uplift, TwoUnitFixedPrices) {
  const auto inst = two_unit();
  const auto s = solve_system(inst);
  EXPECT_NEAR(total_uplift(uplift(inst, PriceVector({1, 5, 6}), s.schedule)), 35.0, 1e-9);
  EXPECT_NEAR(total_uplift(uplift(inst, PriceVector({1.7, 5, 6}), s.schedule)), 7.0, 1e-9);
}

TEST(Compare, TwoUnit) {
  const auto c = compare(two_unit());
  ASSERT_EQ(c.reports.size(), 2u);
  EXPECT_NEAR(c.reports[0].total_uplift, 35.0, 1e-6);
  EXPECT_NEAR(c.reports[1].total_uplift, 7.0, 1e-6);
  EXPECT_NEAR(c.gap_tm, 0.8, 1e-9);
}

SystemInstance convex_single() {
  GeneratorSpec g;
  g.id = "C";
  g.c_min = 0;
  g.c_max = 100;
  g.ramp = g.start_ramp = 100;
  g.initial = InitialState::OnFor(1);
  g.cost.assign(3, PeriodCost{{{3.0, 0.0}}});
  return SystemInstance{3, {20, 50, 30}, {g}};
}

TEST(Compare, ConvexInstanceHasNoUplift) {
  const auto c = compare(convex_single());
  EXPECT_NEAR(c.reports[0].total_uplift, 0.0, 1e-9);
  EXPECT_NEAR(c.reports[1].total_uplift, 0.0, 1e-9);
  EXPECT_EQ(c.gap_tm, 0.0);
  expect_prices(c.reports[0].prices, {3, 3, 3}, 1e-9);
  expect_prices(c.reports[1].prices, {3, 3, 3}, 1e-9);
}

TEST(Chp, ZeroDemand) {
  auto inst = convex_single();
  inst.demand = {0, 0, 0};
  const auto r = price_chp(inst);
  EXPECT_NEAR(r.relaxation_objective, 0.0, 1e-9);
  for (double p : r.prices.pi) EXPECT_GE(p, -1e-9);
}

TEST(Pricing, RandomIdentities) {
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    const auto inst = random_system(rng, 2 + trial % 3, 4);
    const auto sys = solve_system(inst);
    const auto tl = price_tlmp(inst, sys);
    EXPECT_TRUE(tl.duality.pass) << "trial " << trial;
    EXPECT_NEAR(tl.fixed_lp_objective, sys.z_qip, 1e-6) << "trial " << trial;
    const auto ch = price_chp(inst);
    EXPECT_NEAR(lagrangian_value(inst, ch.prices), ch.relaxation_objective, 1e-6) << "trial " << trial;
    const double u_chp = total_uplift(uplift(inst, ch.prices, sys.schedule));
    EXPECT_NEAR(u_chp, sys.z_qip - ch.relaxation_objective, 1e-6) << "trial " << trial;
    EXPECT_LE(u_chp, total_uplift(uplift(inst, tl.prices, sys.schedule)) + 1e-6) << "trial " << trial;
    EXPECT_LE(relax_2bin(inst).objective, ch.relaxation_objective + 1e-6) << "trial " << trial;
  }
}

TEST(Invariants, FuzzBatchPasses) {
  Rng rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    const auto inst = random_system(rng, 3, 5);
    for (const auto& c : check_system_invariants(inst, trial)) EXPECT_TRUE(c.pass) << c.name << " " << c.detail;
  }
}

TEST(Csv, Deterministic) {
  const auto inst = two_unit();
  auto render = [&] {
    const auto c = compare(inst);
    std::ostringstream os;
    write_prices_csv(os, c.reports);
    write_uplift_csv(os, c.reports);
    write_summary_csv(os, c.reports, c.gap_tm);
    return os.str();
  };
  const auto a = render();
  EXPECT_EQ(a, render());
  EXPECT_NE(a.find("tlmp,35.000000"), std::string::npos);
}

TEST(Format, NegativeZero) { EXPECT_EQ(format_number(-0.0), "0.000000"); }

}  // namespace
}  // namespace chp
