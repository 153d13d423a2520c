#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "support.hpp"

using namespace vt_test;

namespace {

ErrorCode parse_error_of(const std::string& text) {
  try {
    io::parse_game(text);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::kInternal;
}

std::string minimal_game(const std::string& extra_type_member = "", const std::string& prior = "1") {
  return R"({"dimension": 1,
    "decision_set": {"rows": [{"normal": ["1"], "rhs": "1"}, {"normal": ["-1"], "rhs": "0"}]},
    "types": [{"name": "a", "prior": ")" +
         prior + R"(", "reserve": "0", "U": {"coeffs": ["1"], "constant": "0"},
               "V": {"coeffs": ["-1"], "constant": "0"})" +
         extra_type_member + "}]}";
}

}  // namespace

TEST(GameFile, MinimalGameParses) {
  GameSpec g = io::parse_game(minimal_game());
  EXPECT_EQ(g.num_types(), 1u);
  EXPECT_EQ(g.dim(), 1u);
}

TEST(GameFile, StrictMembersAndTypes) {
  EXPECT_EQ(parse_error_of(minimal_game(R"(, "colour": "red")")), ErrorCode::kParse);
  EXPECT_EQ(parse_error_of("{"), ErrorCode::kParse);
  EXPECT_EQ(parse_error_of(R"({"dimension": 1})"), ErrorCode::kParse);
  EXPECT_EQ(parse_error_of(R"({"dimension": "1", "decision_set": {"rows": []}, "types": []})"), ErrorCode::kParse);
  std::string numeric = minimal_game();
  numeric.replace(numeric.find(R"("rhs": "1")"), 10, R"("rhs": 1)");
  EXPECT_EQ(parse_error_of(numeric), ErrorCode::kParse);
}

TEST(GameFile, ErrorsNameTheMember) {
  try {
    io::parse_game(minimal_game(R"(, "colour": "red")"), "g.json");
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("g.json.types[0]"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("colour"), std::string::npos);
  }
}

TEST(GameFile, ValidationErrorsPassThrough) {
  EXPECT_EQ(parse_error_of(minimal_game("", "1/2")), ErrorCode::kValidation);
}

TEST(GameFile, RoundTripPreservesDigest) {
  GameSpec g = game_4_2();
  GameSpec again = io::game_from_json(io::game_to_json(g));
  EXPECT_EQ(io::game_digest(g), io::game_digest(again));
  EXPECT_NE(io::game_digest(g), io::game_digest(game_4_1()));
  EXPECT_EQ(io::game_digest(g).size(), 16u);
}

TEST(ProfileFile, ResultFileProfileIsAccepted) {
  GameSpec g = game_4_2();
  Equilibrium eq = mixed_three(g);
  io::Json result = io::equilibrium_to_json(g, eq);
  io::Profile p = io::profile_from_json(result);
  EXPECT_TRUE(check_limit_equilibrium(g, p.sigma, p.tau).overall);
  EXPECT_EQ(p.sigma.rows(), eq.sigma->rows());
}

TEST(ProfileFile, RationalsRoundTripExactly) {
  GameSpec g = game_4_2();
  Equilibrium eq = mixed_three(g);
  io::Json j = io::profile_to_json(*eq.sigma, *eq.tau);
  io::Profile p = io::profile_from_json(io::Json::parse(j.dump()));
  for (const auto& m : eq.sigma->messages()) EXPECT_EQ(p.tau.at(m), eq.tau->at(m));
  EXPECT_EQ(j["sigma"][2][0], "1/3");
}

TEST(ProfileFile, UnknownMembersRejected) {
  EXPECT_THROW(io::parse_profile(R"({"messages": [], "sigma": [], "tau": {}, "x": 1})"), Error);
}
