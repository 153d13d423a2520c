#pragma once

// How low the receiver's exit payoff must be for a limit-game equilibrium to
// survive, and the receiver's best partitional value together with the
// exit-payoff bound below which exit-inducing mechanisms cannot beat it.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vetotalk/construct.hpp"
#include "vetotalk/lp.hpp"
#include "vetotalk/model.hpp"
#include "vetotalk/participation.hpp"
#include "vetotalk/verify.hpp"

namespace vetotalk {

struct MessageThreshold {
  Rational threshold;
  TypeSet binding;  // the participating set L attaining the minimum
};

struct ThresholdReport {
  std::map<std::string, MessageThreshold> per_message;
  Rational uncapped;         // min over messages
  Rational admissible_bound;  // min_k min_X V^k
  Rational overall;           // min(uncapped, admissible_bound)
};

// For every on-path message m and strict subset L of supp(p_m) with X(L)
// nonempty, no-exit stays optimal iff
//   lhs >= val(L) + v0 * p_m(supp \ L),
// i.e. v0 <= (lhs - val(L)) / p_m(supp \ L).  L = {} is always available.
inline ThresholdReport exit_threshold(const GameSpec& g, const SenderStrategy& sigma, const ReceiverStrategy& tau) {
  CheckReport check = check_limit_equilibrium(g, sigma, tau);
  if (!check.overall) throw Error(ErrorCode::kNotAnEquilibrium, "profile fails the limit-game checker");

  ThresholdReport out;
  std::optional<Rational> lowest;
  for (const auto& post : posteriors(g, sigma).entries) {
    const Rational lhs = receiver_objective(g, post.belief)(tau.at(post.message));
    std::optional<MessageThreshold> best;
    const std::uint32_t s = post.support.bits();
    for (std::uint32_t mask = (s - 1) & s;; mask = (mask - 1) & s) {
      TypeSet stay(mask);
      Vec weights(g.num_types(), Rational(0));
      Rational exit_mass = 0;
      for (auto k : post.support.members()) {
        if (stay.contains(k)) weights[k] = post.belief[k];
        else exit_mass += post.belief[k];
      }
      LpOutcome lp = maximize(receiver_objective(g, weights), acceptance_set_or_all(g, stay));
      if (lp.optimal()) {
        Rational v = (lhs - *lp.value) / exit_mass;
        if (!best || v < best->threshold) best = MessageThreshold{v, stay};
      }
      if (mask == 0) break;
    }
    if (!lowest || best->threshold < *lowest) lowest = best->threshold;
    out.per_message[post.message] = *best;
  }
  out.uncapped = *lowest;
  out.admissible_bound = admissible_v0_bound(g);
  out.overall = std::min(out.uncapped, out.admissible_bound);
  return out;
}

struct PartitionalOptimum {
  Rational value;
  std::vector<TypeSet> cells;
  Equilibrium equilibrium;
};

namespace detail {

// Calls f with each set partition of {0..n-1}, in restricted-growth order.
template <class F>
void for_each_partition(std::vector<TypeSet>& cells, std::size_t k, std::size_t n, F& f) {
  if (k == n) {
    f(cells);
    return;
  }
  for (std::size_t c = 0; c <= cells.size(); ++c) {
    if (c == cells.size()) cells.emplace_back();
    cells[c] = cells[c].with(k);
    for_each_partition(cells, k + 1, n, f);
    cells[c] = cells[c].without(k);
    if (cells[c].empty()) cells.pop_back();
  }
}

template <class F>
void for_each_partition(std::size_t n, F&& f) {
  std::vector<TypeSet> cells;
  for_each_partition(cells, 0, n, f);
}

}  // namespace detail

inline constexpr std::size_t kMaxPartitionTypes = 8;

// Best receiver ex-ante value among partitional limit-game equilibria whose
// proposals are the cell-wise constrained optima.  Ties keep the first
// partition in enumeration order.
inline PartitionalOptimum best_partitional_value(const GameSpec& g) {
  if (g.num_types() > kMaxPartitionTypes) {
    throw Error(ErrorCode::kTooManyTypes, "partition enumeration is limited to " +
                                              std::to_string(kMaxPartitionTypes) + " types");
  }
  std::optional<PartitionalOptimum> best;
  detail::for_each_partition(g.num_types(), [&](const std::vector<TypeSet>& cells) {
    auto profile = partition_profile(g, cells);
    if (!profile) return;
    CheckReport report = check_limit_equilibrium(g, profile->first, profile->second);
    if (!report.overall) return;
    if (best && report.receiver_ex_ante <= best->value) return;
    Equilibrium eq;
    eq.method = "partition-enumeration";
    eq.sigma = std::move(profile->first);
    eq.tau = std::move(profile->second);
    eq.kind = detail::kind_of(g, *eq.sigma);
    eq.report = report;
    best = PartitionalOptimum{report.receiver_ex_ante, cells, std::move(eq)};
  });
  if (!best) throw Error(ErrorCode::kNoPartitionalEquilibrium, "no partition passes the limit-game checker");
  return std::move(*best);
}

struct MechanismBound {
  Rational v_star;
  Rational v_bar;       // max_k max_X V^k
  Rational p_min;
  std::size_t k_min = 0;  // smallest index attaining p_min
  Rational bound;       // (v_star - (1 - p_min) v_bar) / p_min
};

inline MechanismBound mechanism_bound(const GameSpec& g, const Rational& v_star) {
  MechanismBound out;
  out.v_star = v_star;
  for (std::size_t k = 0; k < g.num_types(); ++k) {
    Rational top = *maximize(g.receiver_utility(k), g.decisions()).value;
    if (k == 0 || top > out.v_bar) out.v_bar = top;
    if (k == 0 || g.prior(k) < out.p_min) {
      out.p_min = g.prior(k);
      out.k_min = k;
    }
  }
  out.bound = (v_star - (1 - out.p_min) * out.v_bar) / out.p_min;
  return out;
}

}  // namespace vetotalk
