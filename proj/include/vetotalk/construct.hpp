#pragma once

// Partitional equilibrium constructions: nonrevealing, two types, partition
// participation structures, one-dimensional monotone senders and the
// leader/follower construction for a type-independent receiver utility.

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vetotalk/lp.hpp"
#include "vetotalk/model.hpp"
#include "vetotalk/participation.hpp"
#include "vetotalk/verify.hpp"

namespace vetotalk {

enum class EquilibriumKind { kNonrevealing, kFullyRevealing, kPartitional, kMixed, kMediated };

inline std::string_view equilibrium_kind_name(EquilibriumKind k) {
  switch (k) {
    case EquilibriumKind::kNonrevealing: return "Nonrevealing";
    case EquilibriumKind::kFullyRevealing: return "FullyRevealing";
    case EquilibriumKind::kPartitional: return "Partitional";
    case EquilibriumKind::kMixed: return "Mixed";
    case EquilibriumKind::kMediated: return "Mediated";
  }
  return "?";
}

// Truth-telling and obedience verdicts for a mediated mechanism.
struct MediatedReport {
  Vec truthful;                 // per type, payoff of reporting truthfully
  std::vector<Vec> deviation;   // [k][r]: type k reporting r, with veto per outcome
  bool truth_telling = true;
  std::vector<OptimalityCheck> obedience;
  bool obedient = true;
  Rational receiver_ex_ante;
  bool overall = false;
};

struct Equilibrium {
  EquilibriumKind kind = EquilibriumKind::kPartitional;
  std::string method;
  std::optional<SenderStrategy> sigma;
  std::optional<ReceiverStrategy> tau;
  std::optional<MediatedMechanism> mechanism;
  CheckReport report;
  std::optional<MediatedReport> mediated_report;
  std::optional<std::size_t> pivot;    // mixing type of the three-type mixed construction
  std::optional<Rational> split_point;  // parameter t at which it was found

  bool verified() const { return mediated_report ? mediated_report->overall : report.overall; }
};

namespace detail {

inline std::string unused_message(std::size_t i) { return "unused-" + std::to_string(i + 1); }

// Adds off-path messages until |M| >= |K|; each repeats the first proposal.
inline void pad_messages(std::size_t num_types, std::vector<std::string>& messages,
                         std::vector<Vec>& rows, ReceiverStrategy& tau) {
  const Vec first = tau.at(messages.front());
  std::size_t extra = 0;
  while (messages.size() < num_types) {
    std::string name = unused_message(extra++);
    messages.push_back(name);
    for (auto& row : rows) row.push_back(0);
    tau.proposals[name] = first;
  }
}

inline EquilibriumKind kind_of(const GameSpec& g, const SenderStrategy& sigma) {
  if (!sigma.is_partitional()) return EquilibriumKind::kMixed;
  PosteriorTable table = posteriors(g, sigma);
  if (table.entries.size() == 1) return EquilibriumKind::kNonrevealing;
  bool singletons = std::all_of(table.entries.begin(), table.entries.end(),
                                [](const Posterior& p) { return p.support.size() == 1; });
  return singletons ? EquilibriumKind::kFullyRevealing : EquilibriumKind::kPartitional;
}

inline Equilibrium finalize(const GameSpec& g, Equilibrium eq) {
  eq.report = check_limit_equilibrium(g, *eq.sigma, *eq.tau);
  eq.kind = kind_of(g, *eq.sigma);
  if (!eq.report.overall) {
    throw Error(ErrorCode::kInternal, "construction '" + eq.method + "' produced a profile that fails the checker");
  }
  return eq;
}

inline Vec cell_posterior(const GameSpec& g, TypeSet cell) {
  Rational mass = 0;
  for (auto k : cell.members()) mass += g.prior(k);
  Vec belief(g.num_types(), Rational(0));
  for (auto k : cell.members()) belief[k] = g.prior(k) / mass;
  return belief;
}

}  // namespace detail

// Receiver's constrained best response to a cell of types: argmax of the
// posterior-weighted objective over X(cell).  Empty when X(cell) is empty.
inline std::optional<Vec> cell_best_response(const GameSpec& g, TypeSet cell) {
  LpOutcome lp = maximize(receiver_objective(g, detail::cell_posterior(g, cell)), acceptance_set(g, cell));
  if (!lp.optimal()) return std::nullopt;
  return *lp.point;
}

// Profile in which every type reveals its cell.  Proposals default to the
// cell-wise constrained best responses.  The result is not checked.
inline std::optional<std::pair<SenderStrategy, ReceiverStrategy>> partition_profile(
    const GameSpec& g, const std::vector<TypeSet>& cells, std::vector<std::optional<Vec>> decisions = {}) {
  decisions.resize(cells.size());
  std::vector<std::string> messages;
  std::vector<Vec> rows(g.num_types());
  ReceiverStrategy tau;
  for (std::size_t c = 0; c < cells.size(); ++c) {
    messages.push_back(cells[c].label());
    if (!decisions[c]) decisions[c] = cell_best_response(g, cells[c]);
    if (!decisions[c]) return std::nullopt;
    tau.proposals[messages.back()] = *decisions[c];
  }
  for (std::size_t k = 0; k < g.num_types(); ++k) {
    rows[k].assign(cells.size(), Rational(0));
    for (std::size_t c = 0; c < cells.size(); ++c) {
      if (cells[c].contains(k)) rows[k][c] = 1;
    }
  }
  detail::pad_messages(g.num_types(), messages, rows, tau);
  return std::make_pair(SenderStrategy(std::move(messages), std::move(rows)), std::move(tau));
}

inline Equilibrium make_partitional(const GameSpec& g, const std::vector<TypeSet>& cells, std::string method,
                                    std::vector<std::optional<Vec>> decisions = {}) {
  auto profile = partition_profile(g, cells, std::move(decisions));
  if (!profile) throw Error(ErrorCode::kInternal, method + ": a cell has an empty acceptance set");
  Equilibrium eq;
  eq.method = std::move(method);
  eq.sigma = std::move(profile->first);
  eq.tau = std::move(profile->second);
  return detail::finalize(g, std::move(eq));
}

// Exists iff X(K) is nonempty: every type sends the same message and the
// receiver proposes the prior-weighted optimum over X(K).
inline std::optional<Equilibrium> nonrevealing(const GameSpec& g) {
  if (!acceptable(g, g.all_types())) return std::nullopt;
  return make_partitional(g, {g.all_types()}, "nonrevealing");
}

inline Equilibrium two_type(const GameSpec& g) {
  if (g.num_types() != 2) {
    throw Error(ErrorCode::kWrongTypeCount, "two-type construction needs exactly 2 types, got " +
                                                std::to_string(g.num_types()));
  }
  if (acceptable(g, g.all_types())) return make_partitional(g, {g.all_types()}, "two-type");
  return make_partitional(g, {TypeSet::single(0), TypeSet::single(1)}, "two-type");
}

inline Equilibrium partition_structure_eq(const GameSpec& g) {
  ParticipationStructure ps = participation_structure(g);
  if (ps.classification != StructureClass::kPartition) {
    throw Error(ErrorCode::kNotAPartition, "participation structure is " +
                                               std::string(structure_class_name(ps.classification)));
  }
  return make_partitional(g, ps.maximal, "partition-structure");
}

// One-dimensional decisions.  Types with a decreasing U accept x <= their
// threshold, the rest accept x >= theirs.  If the tightest thresholds leave
// a common interval the receiver pools everyone; otherwise the two groups
// are separated.
inline Equilibrium monotone_interval_eq(const GameSpec& g) {
  if (g.dim() != 1) {
    throw Error(ErrorCode::kNotOneDimensional, "decision dimension is " + std::to_string(g.dim()));
  }
  const AffineFn coordinate{Vec{Rational(1)}, 0};
  const Rational lo = *minimize(coordinate, g.decisions()).value;
  const Rational hi = *maximize(coordinate, g.decisions()).value;

  TypeSet decreasing, increasing;
  Rational x_minus = hi, x_plus = lo;
  for (std::size_t k = 0; k < g.num_types(); ++k) {
    const Rational& slope = g.sender_utility(k).coeffs[0];
    const Rational& offset = g.sender_utility(k).constant;
    if (slope < 0) {
      decreasing = decreasing.with(k);
      x_minus = std::min(x_minus, std::min(hi, (g.reserve(k) - offset) / slope));
    } else {
      increasing = increasing.with(k);
      Rational threshold = slope == 0 ? lo : std::max(lo, (g.reserve(k) - offset) / slope);
      x_plus = std::max(x_plus, threshold);
    }
  }

  auto best_on = [&](TypeSet cell, const Rational& a, const Rational& b) {
    Polytope interval(1);
    interval.add_row(HalfSpace{Vec{Rational(-1)}, -a});
    interval.add_row(HalfSpace{Vec{Rational(1)}, b});
    return *maximize(receiver_objective(g, detail::cell_posterior(g, cell)), interval).point;
  };

  if (x_plus <= x_minus) {
    return make_partitional(g, {g.all_types()}, "monotone-interval",
                            {best_on(g.all_types(), x_plus, x_minus)});
  }
  return make_partitional(g, {decreasing, increasing}, "monotone-interval",
                          {best_on(decreasing, lo, x_minus), best_on(increasing, x_plus, hi)});
}

// Envy relation among the complete-information optima x_k.
struct EnvyGraph {
  std::vector<Vec> best_decisions;                     // x_k
  Vec values;                                          // V(x_k)
  std::vector<std::vector<char>> envies;               // envies[k][j]: U^k(x_j) > U^k(x_k)
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::vector<Rational> level_values;                  // ascending distinct V(x_k)
  std::vector<TypeSet> levels;
  TypeSet leaders;
  TypeSet followers;

  bool has_cycle() const {
    const std::size_t n = envies.size();
    std::vector<int> state(n, 0);
    auto visit = [&](auto&& self, std::size_t k) -> bool {
      state[k] = 1;
      for (std::size_t j = 0; j < n; ++j) {
        if (!envies[k][j]) continue;
        if (state[j] == 1) return true;
        if (state[j] == 0 && self(self, j)) return true;
      }
      state[k] = 2;
      return false;
    };
    for (std::size_t k = 0; k < n; ++k) {
      if (state[k] == 0 && visit(visit, k)) return true;
    }
    return false;
  }
};

struct LeaderSelection {
  std::vector<Rational> level_values;
  std::vector<TypeSet> levels;
  TypeSet leaders;
  TypeSet followers;
};

// Walks the levels of V(x_k) upward; a type becomes a follower iff it envies
// a leader chosen at an earlier level.
inline LeaderSelection select_leaders(const Vec& values, const std::vector<std::vector<char>>& envies) {
  LeaderSelection out;
  out.level_values = values;
  std::sort(out.level_values.begin(), out.level_values.end());
  out.level_values.erase(std::unique(out.level_values.begin(), out.level_values.end()), out.level_values.end());
  for (const auto& alpha : out.level_values) {
    TypeSet level;
    for (std::size_t k = 0; k < values.size(); ++k) {
      if (values[k] == alpha) level = level.with(k);
    }
    out.levels.push_back(level);
    TypeSet leaders_before = out.leaders;
    for (auto k : level.members()) {
      bool envies_leader = false;
      for (auto j : leaders_before.members()) envies_leader = envies_leader || envies[k][j];
      if (envies_leader) out.followers = out.followers.with(k);
      else out.leaders = out.leaders.with(k);
    }
  }
  return out;
}

inline EnvyGraph envy_graph(const GameSpec& g) {
  if (!g.private_values()) {
    throw Error(ErrorCode::kNotPrivateValues, "receiver utility depends on the sender's type");
  }
  const AffineFn& v = g.receiver_utility(0);
  const std::size_t n = g.num_types();
  EnvyGraph graph;
  for (std::size_t k = 0; k < n; ++k) {
    LpOutcome lp = lex_maximize(v, g.sender_utility(k), acceptance_set(g, TypeSet::single(k)));
    graph.best_decisions.push_back(*lp.point);
    graph.values.push_back(v(*lp.point));
  }
  graph.envies.assign(n, std::vector<char>(n, 0));
  for (std::size_t k = 0; k < n; ++k) {
    const Rational own = g.sender_utility(k)(graph.best_decisions[k]);
    for (std::size_t j = 0; j < n; ++j) {
      if (j != k && g.sender_utility(k)(graph.best_decisions[j]) > own) {
        graph.envies[k][j] = 1;
        graph.edges.emplace_back(k, j);
      }
    }
  }
  LeaderSelection sel = select_leaders(graph.values, graph.envies);
  graph.level_values = std::move(sel.level_values);
  graph.levels = std::move(sel.levels);
  graph.leaders = sel.leaders;
  graph.followers = sel.followers;
  return graph;
}

// Leaders announce themselves; a follower reports the envied leader whose
// proposal it likes best (smallest index on ties).
inline std::vector<std::size_t> leader_assignment(const GameSpec& g, const EnvyGraph& graph) {
  std::vector<std::size_t> report(g.num_types());
  for (std::size_t k = 0; k < g.num_types(); ++k) {
    if (graph.leaders.contains(k)) {
      report[k] = k;
      continue;
    }
    std::optional<std::size_t> best;
    for (auto j : graph.leaders.members()) {
      if (!graph.envies[k][j]) continue;
      if (!best || g.sender_utility(k)(graph.best_decisions[j]) > g.sender_utility(k)(graph.best_decisions[*best])) {
        best = j;
      }
    }
    report[k] = *best;
  }
  return report;
}

inline Equilibrium leader_follower(const GameSpec& g) {
  EnvyGraph graph = envy_graph(g);
  std::vector<std::size_t> report = leader_assignment(g, graph);
  std::vector<TypeSet> cells;
  std::vector<std::optional<Vec>> decisions;
  for (auto leader : graph.leaders.members()) {
    TypeSet cell;
    for (std::size_t k = 0; k < g.num_types(); ++k) {
      if (report[k] == leader) cell = cell.with(k);
    }
    cells.push_back(cell);
    decisions.emplace_back(graph.best_decisions[leader]);
  }
  return make_partitional(g, cells, "leader-follower", std::move(decisions));
}

}  // namespace vetotalk
