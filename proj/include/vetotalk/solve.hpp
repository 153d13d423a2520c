#pragma once

// Dispatcher over the constructions.  Each attempt is logged; the first one
// that produces a verified equilibrium wins.

#include <optional>
#include <string>
#include <vector>

#include "vetotalk/construct.hpp"
#include "vetotalk/participation.hpp"
#include "vetotalk/three_types.hpp"

namespace vetotalk {

struct Attempt {
  std::string method;
  std::string outcome;  // "found", "skipped: ...", "failed: ...", "not found"
};

struct SolveResult {
  std::optional<Equilibrium> equilibrium;
  std::vector<Attempt> attempts;
  bool resolved() const { return equilibrium.has_value(); }
};

enum class Method { kAuto, kNonrevealing, kTwoType, kPartition, kMonotone, kLeaderFollower, kMixed3, kMediated3, kGrid };

inline std::optional<Method> parse_method(std::string_view s) {
  if (s == "auto") return Method::kAuto;
  if (s == "nonrevealing") return Method::kNonrevealing;
  if (s == "two-type") return Method::kTwoType;
  if (s == "partition") return Method::kPartition;
  if (s == "monotone") return Method::kMonotone;
  if (s == "thm8" || s == "leader-follower") return Method::kLeaderFollower;
  if (s == "mixed3") return Method::kMixed3;
  if (s == "mediated3") return Method::kMediated3;
  if (s == "grid") return Method::kGrid;
  return std::nullopt;
}

struct SolveOptions {
  Method method = Method::kAuto;
  int grid_resolution = 60;
};

namespace detail {

inline std::string method_label(Method m) {
  switch (m) {
    case Method::kAuto: return "auto";
    case Method::kNonrevealing: return "nonrevealing";
    case Method::kTwoType: return "two-type";
    case Method::kPartition: return "partition-structure";
    case Method::kMonotone: return "monotone-interval";
    case Method::kLeaderFollower: return "leader-follower";
    case Method::kMixed3: return "mixed-three";
    case Method::kMediated3: return "mediated-three";
    case Method::kGrid: return "grid-search";
  }
  return "?";
}

inline std::optional<Equilibrium> run_method(const GameSpec& g, Method m, int resolution) {
  switch (m) {
    case Method::kNonrevealing: return nonrevealing(g);
    case Method::kTwoType: return two_type(g);
    case Method::kPartition: return partition_structure_eq(g);
    case Method::kMonotone: return monotone_interval_eq(g);
    case Method::kLeaderFollower: return leader_follower(g);
    case Method::kMixed3: return mixed_three(g);
    case Method::kMediated3: return mediated_three(g);
    case Method::kGrid: return grid_mixed_search(g, resolution);
    case Method::kAuto: break;
  }
  return std::nullopt;
}

}  // namespace detail

// With Method::kAuto the order is: nonrevealing, two types, partition
// structure, one-dimensional, leader/follower, mixed three-type, mediated
// three-type, grid search.  Inapplicable methods are logged as skipped.
// A single named method propagates its own errors.
inline SolveResult solve(const GameSpec& g, const SolveOptions& options = {}) {
  SolveResult result;
  if (options.method != Method::kAuto) {
    auto eq = detail::run_method(g, options.method, options.grid_resolution);
    result.attempts.push_back({detail::method_label(options.method), eq ? "found" : "not found"});
    result.equilibrium = std::move(eq);
    return result;
  }

  const ParticipationStructure ps = participation_structure(g);
  struct Step {
    Method method;
    bool applicable;
    std::string reason;
  };
  const std::vector<Step> steps{
      {Method::kNonrevealing, true, ""},
      {Method::kTwoType, g.num_types() == 2, "needs 2 types"},
      {Method::kPartition, ps.classification == StructureClass::kPartition, "structure is not a partition"},
      {Method::kMonotone, g.dim() == 1, "decision set is not one-dimensional"},
      {Method::kLeaderFollower, g.private_values(), "receiver utility depends on the type"},
      {Method::kMixed3, ps.classification == StructureClass::kChain3, "structure is not Chain3"},
      {Method::kMediated3, ps.classification == StructureClass::kPairwise3, "structure is not Pairwise3"},
      {Method::kGrid, g.num_types() == 3, "needs 3 types"},
  };
  for (const auto& step : steps) {
    const std::string label = detail::method_label(step.method);
    if (!step.applicable) {
      result.attempts.push_back({label, "skipped: " + step.reason});
      continue;
    }
    try {
      auto eq = detail::run_method(g, step.method, options.grid_resolution);
      if (eq) {
        result.attempts.push_back({label, "found"});
        result.equilibrium = std::move(eq);
        return result;
      }
      result.attempts.push_back({label, "not found"});
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kInternal) throw;
      result.attempts.push_back({label, std::string("failed: ") + e.what()});
    }
  }
  return result;
}

}  // namespace vetotalk
