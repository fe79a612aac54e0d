#include <gtest/gtest.h>

#include <sstream>

#include "chp/lp.hpp"
#include "support/oracles.hpp"

namespace chp::lp {
namespace {

TEST(Simplex, SingleLowerRow) {
  LinearProgram lp;
  const int x = lp.add_var("x", 0, 10, 1.0);
  lp.add_row("r", {{x, 1.0}}, Sense::kGreaterEqual, 3.0);
  const auto s = solve_lp(lp);
  ASSERT_EQ(s.status, Status::kOptimal);
  EXPECT_NEAR(s.primal[0], 3.0, 1e-9);
  EXPECT_NEAR(s.objective, 3.0, 1e-9);
  EXPECT_NEAR(s.duals[0], 1.0, 1e-9);
  EXPECT_TRUE(verify_duality(lp, s, 1e-7).pass);
}

TEST(Simplex, UpperRowDualSign) {
  LinearProgram lp;
  const int x = lp.add_var("x", 0, kInf, -1.0);
  const int y = lp.add_var("y", 0, kInf, -1.0);
  lp.add_row("r", {{x, 1.0}, {y, 1.0}}, Sense::kLessEqual, 1.0);
  const auto s = solve_lp(lp);
  ASSERT_EQ(s.status, Status::kOptimal);
  EXPECT_NEAR(s.objective, -1.0, 1e-9);
  EXPECT_NEAR(s.duals[0], -1.0, 1e-9);
}

TEST(Simplex, Infeasible) {
  LinearProgram lp;
  const int x = lp.add_var("x", 0, 1, 1.0);
  lp.add_row("r", {{x, 1.0}}, Sense::kGreaterEqual, 2.0);
  EXPECT_EQ(solve_lp(lp).status, Status::kInfeasible);
}

TEST(Simplex, Unbounded) {
  LinearProgram lp;
  const int x = lp.add_var("x", 0, kInf, -1.0);
  lp.add_row("r", {{x, 1.0}}, Sense::kGreaterEqual, 2.0);
  EXPECT_EQ(solve_lp(lp).status, Status::kUnbounded);
}

TEST(Simplex, EqualityAndFreeColumn) {
  LinearProgram lp;
  const int x = lp.add_var("x", -kInf, kInf, 2.0);
  const int y = lp.add_var("y", 0, 4, 1.0);
  lp.add_row("e", {{x, 1.0}, {y, 1.0}}, Sense::kEqual, 5.0);
  const auto s = solve_lp(lp);
  ASSERT_EQ(s.status, Status::kOptimal);
  EXPECT_NEAR(s.primal[y], 4.0, 1e-9);
  EXPECT_NEAR(s.objective, 6.0, 1e-9);
  EXPECT_NEAR(s.duals[0], 2.0, 1e-9);
}

TEST(Simplex, MalformedRejected) {
  LinearProgram lp;
  lp.add_var("x", 1, 0, 1.0);
  EXPECT_FALSE(lp.check().empty());
  EXPECT_THROW(solve_lp(lp), std::invalid_argument);
}

TEST(Duality, PerturbedPrimalReported) {
  LinearProgram lp;
  const int x = lp.add_var("x", 0, 10, 1.0);
  lp.add_row("r", {{x, 1.0}}, Sense::kGreaterEqual, 3.0);
  auto s = solve_lp(lp);
  s.primal[0] -= 1.0;
  const auto rep = verify_duality(lp, s);
  EXPECT_GT(rep.primal_residual, 0.1);
  EXPECT_FALSE(rep.pass);
}

TEST(Duality, RowScalingKeepsObjective) {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    auto lp = testing::random_feasible_lp(rng);
    const auto a = solve_lp(lp);
    auto scaled = lp;
    for (auto& r : scaled.rows) {
      for (auto& t : r.terms) t.coef *= 1000.0;
      r.rhs *= 1000.0;
    }
    const auto b = solve_lp(scaled);
    ASSERT_EQ(a.status, b.status);
    if (a.status == Status::kOptimal) {
      EXPECT_NEAR(a.objective, b.objective, 1e-6 * (1 + std::abs(a.objective)));
    }
  }
}

TEST(Duality, RandomFeasibleLps) {
  Rng rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> x0;
    const auto lp = testing::random_feasible_lp(rng, &x0);
    const auto s = solve_lp(lp);
    ASSERT_EQ(s.status, Status::kOptimal) << "trial " << trial;
    const auto rep = verify_duality(lp, s);
    EXPECT_TRUE(rep.pass) << "trial " << trial << " primal " << rep.primal_residual << " dual "
                          << rep.dual_residual << " comp " << rep.complementarity;
    double cx0 = 0.0;
    for (int j = 0; j < lp.num_vars(); ++j) cx0 += lp.objective[j] * x0[j];
    EXPECT_LE(s.objective, cx0 + 1e-7);
  }
}

TEST(Simplex, Deterministic) {
  Rng rng(3);
  const auto lp = testing::random_feasible_lp(rng);
  const auto a = solve_lp(lp);
  const auto b = solve_lp(lp);
  EXPECT_EQ(a.primal, b.primal);
  EXPECT_EQ(a.duals, b.duals);
  EXPECT_EQ(a.iterations, b.iterations);
}

TEST(Mps, SectionsPresent) {
  LinearProgram lp;
  const int x = lp.add_var("x[1]", 0, 10, 1.0);
  const int y = lp.add_var("y", -kInf, kInf, 0.0);
  lp.add_row("bal", {{x, 1.0}, {y, 2.0}}, Sense::kEqual, 4.0);
  std::ostringstream os;
  write_mps(lp, os);
  const auto text = os.str();
  for (const char* s : {"ROWS", "COLUMNS", "RHS", "BOUNDS", "ENDATA", " FR ", "x[1]"}) {
    EXPECT_NE(text.find(s), std::string::npos) << s;
  }
}

}  // namespace
}  // namespace chp::lp
