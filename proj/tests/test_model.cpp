#include <gtest/gtest.h>

#include <algorithm>
#include <sstream>

#include "chp/instance_io.hpp"
#include "chp/model.hpp"
#include "support/oracles.hpp"

namespace chp {
namespace {

SystemInstance two_unit() { return load_instance(testing::example_path("section5.json")); }

bool has_message(const std::vector<Diagnostic>& ds, const std::string& text) {
  return std::any_of(ds.begin(), ds.end(), [&](const Diagnostic& d) {
    return d.severity == Severity::kError && d.message.find(text) != std::string::npos;
  });
}

TEST(Validate, TwoUnitIsClean) {
  const auto inst = two_unit();
  EXPECT_FALSE(has_errors(validate(inst)));
  EXPECT_EQ(inst.horizon, 3);
  ASSERT_EQ(inst.generators.size(), 2u);
  EXPECT_EQ(inst.generators[1].min_up, 2);
  EXPECT_DOUBLE_EQ(inst.generators[1].start_ramp, 55.0);
}

TEST(Validate, StartRampBelowMinimum) {
  auto inst = two_unit();
  inst.generators[1].c_min = 30;
  inst.generators[1].start_ramp = 20;
  EXPECT_TRUE(has_message(validate(inst), "start ramp below minimum output"));
}

TEST(Validate, DemandLength) {
  auto inst = two_unit();
  inst.demand.pop_back();
  EXPECT_TRUE(has_message(validate(inst), "demand length mismatch"));
}

TEST(Validate, DuplicateIds) {
  auto inst = two_unit();
  inst.generators[1].id = "G1";
  EXPECT_TRUE(has_message(validate(inst), "duplicate generator id"));
}

TEST(InstanceIo, UnknownFieldNamed) {
  const std::string text = R"({"T": 1, "demand": [0], "generators": [], "bogus": 1})";
  try {
    parse_instance(text);
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_NE(std::string(e.what()).find("bogus"), std::string::npos);
  }
}

TEST(InstanceIo, RoundTrip) {
  const auto inst = two_unit();
  const auto back = parse_instance(instance_to_json(inst)).instance;
  EXPECT_EQ(inst, back);
}

TEST(InstanceIo, InvalidInstanceThrows) {
  const std::string text = R"({"T": 2, "demand": [1], "generators": []})";
  EXPECT_THROW(parse_instance(text), InstanceError);
}

TEST(Tangents, TwoPiecesOnZeroHundred) {
  const auto pc = tangent_pieces(0.01, 4.0, 0.0, 0.0, 100.0, 2);
  ASSERT_EQ(pc.pieces.size(), 2u);
  EXPECT_NEAR(pc.pieces[0].slope, 4.5, 1e-12);
  EXPECT_NEAR(pc.pieces[0].intercept, -6.25, 1e-12);
  EXPECT_NEAR(pc.pieces[1].slope, 5.5, 1e-12);
  EXPECT_NEAR(pc.pieces[1].intercept, -56.25, 1e-12);
  // tangent at 25 touches the quadratic
  EXPECT_NEAR(pc.evaluate(25.0), 0.01 * 625 + 100.0, 1e-12);
}

TEST(Tangents, QuadraticInDocument) {
  const std::string text = R"({"T": 1, "demand": [10], "generators": [{
    "id": "Q", "L": 1, "ell": 1, "c_min": 0, "c_max": 100, "ramp": 100, "start_ramp": 100,
    "startup_cost": [0], "shutdown_cost": [0], "initial": {"on_for": 1},
    "cost": {"quadratic": {"alpha": 0.01, "beta": 4, "c": 0, "pieces": 2}}}]})";
  const auto inst = parse_instance(text).instance;
  ASSERT_EQ(inst.generators[0].cost.size(), 1u);
  EXPECT_EQ(inst.generators[0].cost[0].pieces.size(), 2u);
}

TEST(Pieces, DominatedPieceDropped) {
  auto inst = two_unit();
  inst.generators[0].cost[0].pieces.push_back({1.0, -1000.0});
  const auto warnings = remove_dominated_pieces(inst);
  EXPECT_EQ(warnings.size(), 1u);
  EXPECT_EQ(inst.generators[0].cost[0].pieces.size(), 1u);
}

TEST(Commitment, MinUpAndInitialHold) {
  const auto inst = two_unit();
  const auto& g2 = inst.generators[1];
  EXPECT_TRUE(commitment_cost(g2, std::vector<int>{1, 1, 1}));
  EXPECT_TRUE(commitment_cost(g2, std::vector<int>{0, 0, 0}));
  // off for one period only, then restart
  EXPECT_FALSE(commitment_cost(g2, std::vector<int>{0, 1, 1}));
  EXPECT_DOUBLE_EQ(*commitment_cost(g2, std::vector<int>{0, 0, 1}), 100.0);
}

TEST(Commitment, OnIntervals) {
  const auto ivs = on_intervals(std::vector<int>{1, 0, 1, 1, 0});
  ASSERT_EQ(ivs.size(), 2u);
  EXPECT_EQ(ivs[1].first, 3);
  EXPECT_EQ(ivs[1].last, 4);
}

TEST(Schedule, CheckFindsRampViolation) {
  const auto inst = two_unit();
  UnitSchedule s{"G2", {1, 1, 1}, {0, 0, 0}, {40, 60, 50}};
  const auto ds = check_schedule(inst.generators[1], s);
  EXPECT_TRUE(has_message(ds, "ramp exceeded at period 2"));
  s.x = {40, 45, 50};
  EXPECT_TRUE(check_schedule(inst.generators[1], s).empty());
  EXPECT_DOUBLE_EQ(schedule_cost(inst.generators[1], s), 600.0);
}

}  // namespace
}  // namespace chp
