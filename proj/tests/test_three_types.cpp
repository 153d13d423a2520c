#include <gtest/gtest.h>

#include "support.hpp"

using namespace vt_test;

TEST(Mediated, ThirdExampleLotteries) {
  GameSpec g = game_4_3();
  Equilibrium eq = mediated_three(g);
  ASSERT_TRUE(eq.mechanism);
  EXPECT_EQ(eq.kind, EquilibriumKind::kMediated);
  EXPECT_EQ(eq.mechanism->mean_decision(0), V({"1/2", "0", "1/2"}));
  EXPECT_EQ(eq.mechanism->mean_decision(1), V({"1/2", "1/2", "0"}));
  EXPECT_EQ(eq.mechanism->mean_decision(2), V({"0", "1/2", "1/2"}));
  for (std::size_t k = 0; k < 3; ++k) {
    for (const auto& o : eq.mechanism->lottery(k)) {
      EXPECT_EQ(o.probability, Rational(1, 2));
      // every recommendation is a pure action
      EXPECT_EQ(std::count(o.decision.begin(), o.decision.end(), Rational(1)), 1);
    }
  }
  ASSERT_TRUE(eq.mediated_report);
  EXPECT_TRUE(eq.mediated_report->truth_telling);
  EXPECT_TRUE(eq.mediated_report->obedient);
}

TEST(Mediated, VetoIncentiveForTypeOne) {
  const Equilibrium eq = mediated_three(game_4_3());
  const MediatedReport& m = *eq.mediated_report;
  EXPECT_EQ(m.truthful[0], Rational(1, 2));
  EXPECT_EQ(m.deviation[0][1], Rational(0));
  // reporting 3 yields c or b: max{1,0}/2 + max{-2,0}/2
  EXPECT_EQ(m.deviation[0][2], Rational(1, 2));
}

TEST(Mediated, WrongStructure) {
  try {
    mediated_three(game_4_1());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kWrongClassification);
  }
}

TEST(Mixed, SecondExample) {
  GameSpec g = game_4_2();
  Equilibrium eq = mixed_three(g);
  EXPECT_EQ(eq.kind, EquilibriumKind::kMixed);
  EXPECT_EQ(eq.pivot, std::optional<std::size_t>(2));
  EXPECT_EQ(eq.sigma->rows()[2], V({"1/3", "2/3", "0"}));
  PosteriorTable t = posteriors(g, *eq.sigma);
  ASSERT_EQ(t.entries.size(), 2u);
  EXPECT_EQ(t.entries[0].belief, V({"3/4", "0", "1/4"}));
  EXPECT_EQ(t.entries[1].belief, V({"0", "3/5", "2/5"}));
  EXPECT_EQ(eq.tau->at(t.entries[0].message), V({"80", "0"}));
  EXPECT_EQ(eq.tau->at(t.entries[1].message), V({"0", "40"}));
  for (const auto& e : t.entries) EXPECT_EQ(g.sender_utility(2)(eq.tau->at(e.message)), Rational(80));
  EXPECT_EQ(*eq.split_point, Rational(1, 2));
}

TEST(Mixed, FaceOnTheFirstBranch) {
  GameSpec g = translate_reserves(game_4_2());
  FaceRange f = face_range(g, V({"3/4", "0", "1/4"}), g.sender_utility(2));
  // every (x_a, 0) with x_a in [30,100] is optimal; U^3 - u0 ranges over [10, 80]
  EXPECT_EQ(f.low_point, V({"30", "0"}));
  EXPECT_EQ(f.high_point, V({"100", "0"}));
  EXPECT_EQ(f.low, Rational(10));
  EXPECT_EQ(f.high, Rational(80));
}

TEST(Mixed, PureEscapeWhenTheSplitAlreadyWorks) {
  // With a private-values receiver the first example's partition is reached
  // through the first pure escape.
  Equilibrium eq = mixed_three(game_4_1());
  EXPECT_EQ(eq.kind, EquilibriumKind::kPartitional);
  EXPECT_EQ(eq.report.interim_sender_payoffs, V({"30", "40", "80"}));
}

TEST(Mixed, WrongStructure) {
  EXPECT_THROW(mixed_three(game_4_3()), Error);
}

TEST(Mixed, BudgetExhaustionCarriesBracket) {
  // Neither pure split works here, so a zero budget ends on the initial bracket.
  try {
    mixed_three(game_4_2(), 0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kBisectionBudgetExceeded);
    EXPECT_NE(std::string(e.what()).find("bracket [0, 1]"), std::string::npos);
  }
  EXPECT_TRUE(mixed_three(game_4_2(), 1).verified());
}

TEST(Grid, ThirdExampleHasNoTwoMessageEquilibriumOnTheGrid) {
  EXPECT_FALSE(grid_mixed_search(game_4_3(), 60).has_value());
}

TEST(Grid, SecondExampleFoundAtResolutionThree) {
  GameSpec g = game_4_2();
  auto eq = grid_mixed_search(g, 3);
  ASSERT_TRUE(eq);
  Vec pivot_row = eq->sigma->rows()[2];
  std::sort(pivot_row.begin(), pivot_row.end());
  EXPECT_EQ(pivot_row, V({"0", "1/3", "2/3"}));
}

TEST(Grid, FirstExampleAtResolutionOne) {
  auto eq = grid_mixed_search(game_4_1(), 1);
  ASSERT_TRUE(eq);
  EXPECT_TRUE(eq->sigma->is_partitional());
}

TEST(Grid, NeedsThreeTypes) {
  EXPECT_THROW(grid_mixed_search(io::load_game(fixture("single_type.json")), 2), Error);
}

TEST(Solve, DispatchOrderAndProvenance) {
  auto a = solve(game_4_1());
  ASSERT_TRUE(a.resolved());
  EXPECT_EQ(a.equilibrium->method, "leader-follower");
  auto b = solve(game_4_2());
  EXPECT_EQ(b.equilibrium->method, "mixed-three");
  auto c = solve(game_4_3());
  EXPECT_EQ(c.equilibrium->method, "mediated-three");
  EXPECT_EQ(c.attempts.back().method, "mediated-three");
  EXPECT_EQ(c.attempts.front().outcome, "not found");
}

TEST(Solve, NamedMethods) {
  auto grid = solve(game_4_3(), {Method::kGrid, 60});
  EXPECT_FALSE(grid.resolved());
  EXPECT_THROW(solve(game_4_3(), {Method::kMixed3, 60}), Error);
  EXPECT_EQ(parse_method("thm8"), Method::kLeaderFollower);
  EXPECT_FALSE(parse_method("bogus"));
}
