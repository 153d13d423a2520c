#pragma once

// Equilibrium checkers.  The limit game (exit worth -infinity to the
// receiver) needs no exit on path, constrained receiver optimality and
// sender incentive compatibility.  The game with finite exit payoff v0
// evaluates the sender with max{U, u0} and lets the receiver compare the
// proposal against every way of letting some types walk away.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "vetotalk/lp.hpp"
#include "vetotalk/model.hpp"
#include "vetotalk/participation.hpp"

namespace vetotalk {

struct ExitViolation {
  std::size_t type = 0;
  std::string message;
};

struct OptimalityCheck {
  std::string message;
  TypeSet support;
  Rational achieved;
  std::optional<Rational> optimum;  // empty when X(support) is empty
  bool ok = false;

  // optimum - achieved, when an optimum exists.
  std::optional<Rational> gap() const {
    if (!optimum) return std::nullopt;
    return *optimum - achieved;
  }
};

struct IncentiveViolation {
  std::size_t type = 0;
  std::string sent;
  std::string deviation;
  Rational gap;  // payoff(deviation) - payoff(sent) > 0
};

struct CheckReport {
  bool no_exit = true;
  std::vector<ExitViolation> exit_violations;
  bool constrained_opt = true;
  std::vector<OptimalityCheck> optimality;
  bool incentive = true;
  std::vector<IncentiveViolation> incentive_violations;
  bool overall = false;
  Vec interim_sender_payoffs;
  Rational receiver_ex_ante;

  // Set by the finite-v0 checker only.
  std::optional<Rational> v0;
  TypeSet exit_types;
  bool v0_admissible = true;
};

namespace detail {

inline void validate_profile(const GameSpec& g, const SenderStrategy& sigma, const ReceiverStrategy& tau) {
  if (sigma.num_types() != g.num_types()) {
    throw Error(ErrorCode::kRowMismatch, "strategy rows do not match the type count");
  }
  for (const auto& m : sigma.messages()) g.require_in_decisions(tau.at(m));
}

}  // namespace detail

// Checks a profile in the limit game.  tau must be defined on every message.
inline CheckReport check_limit_equilibrium(const GameSpec& g, const SenderStrategy& sigma,
                                           const ReceiverStrategy& tau) {
  detail::validate_profile(g, sigma, tau);
  const std::size_t n = g.num_types();
  CheckReport report;
  PosteriorTable table = posteriors(g, sigma);

  for (const auto& post : table.entries) {
    const Vec& x = tau.at(post.message);
    for (auto k : post.support.members()) {
      if (!g.accepts(k, x)) {
        report.no_exit = false;
        report.exit_violations.push_back({k, post.message});
      }
    }
    OptimalityCheck opt;
    opt.message = post.message;
    opt.support = post.support;
    AffineFn objective = receiver_objective(g, post.belief);
    opt.achieved = objective(x);
    Polytope feasible_region = acceptance_set(g, post.support);
    LpOutcome best = maximize(objective, feasible_region);
    if (best.optimal()) opt.optimum = *best.value;
    opt.ok = best.optimal() && feasible_region.contains(x) && *best.value == opt.achieved;
    report.constrained_opt = report.constrained_opt && opt.ok;
    report.optimality.push_back(std::move(opt));
  }

  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t m = 0; m < sigma.num_messages(); ++m) {
      if (sigma.prob(k, m) == 0) continue;
      Rational sent = g.sender_utility(k)(tau.at(sigma.messages()[m]));
      for (std::size_t alt = 0; alt < sigma.num_messages(); ++alt) {
        Rational deviation = g.sender_utility(k)(tau.at(sigma.messages()[alt]));
        if (deviation > sent) {
          report.incentive = false;
          report.incentive_violations.push_back(
              {k, sigma.messages()[m], sigma.messages()[alt], deviation - sent});
        }
      }
    }
  }

  report.interim_sender_payoffs.assign(n, Rational(0));
  report.receiver_ex_ante = 0;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t m = 0; m < sigma.num_messages(); ++m) {
      if (sigma.prob(k, m) == 0) continue;
      const Vec& x = tau.at(sigma.messages()[m]);
      report.interim_sender_payoffs[k] += sigma.prob(k, m) * g.sender_utility(k)(x);
      report.receiver_ex_ante += g.prior(k) * sigma.prob(k, m) * g.receiver_utility(k)(x);
    }
  }
  report.overall = report.no_exit && report.constrained_opt && report.incentive;
  return report;
}

struct ExitChoice {
  Rational value;
  Vec decision;
  TypeSet exit_set;
};

// Receiver's best value at `belief` when exit yields v0: the maximum over
// L inside supp(belief) with X(L) nonempty of
//   max_{x in X(L)} sum_{k in L} belief^k V^k(x) + v0 * belief(supp \ L).
// Ties prefer larger L, so full participation wins any tie.
inline ExitChoice receiver_best_with_exit(const GameSpec& g, std::span<const Rational> belief,
                                          const Rational& v0, V0Policy policy = V0Policy::kLenient) {
  if (belief.size() != g.num_types()) throw Error(ErrorCode::kRowMismatch, "belief length");
  if (sum(belief) != 1) throw Error(ErrorCode::kValidation, "belief does not sum to 1");
  if (policy == V0Policy::kStrict) require_admissible_v0(g, v0);
  const TypeSet support = support_of(belief);

  std::vector<TypeSet> subsets;
  for (std::uint32_t mask = support.bits();; mask = (mask - 1) & support.bits()) {
    subsets.emplace_back(mask);
    if (mask == 0) break;
  }
  std::stable_sort(subsets.begin(), subsets.end(),
                   [](TypeSet a, TypeSet b) { return a.size() > b.size(); });

  std::optional<ExitChoice> best;
  for (auto stay : subsets) {
    Vec weights(g.num_types(), Rational(0));
    Rational exit_mass = 0;
    for (auto k : support.members()) {
      if (stay.contains(k)) weights[k] = belief[k];
      else exit_mass += belief[k];
    }
    LpOutcome lp = maximize(receiver_objective(g, weights), acceptance_set_or_all(g, stay));
    if (!lp.optimal()) continue;
    Rational value = *lp.value + v0 * exit_mass;
    if (!best || value > best->value) best = ExitChoice{value, *lp.point, support.minus(stay)};
  }
  return *best;
}

// Checks a profile in the game where exit gives the receiver v0.  `overall`
// is sender incentive compatibility (with max{U, u0}) and receiver
// optimality; exit on path is allowed and reported through `exit_types`.
inline CheckReport check_v0_equilibrium(const GameSpec& g, const Rational& v0, const SenderStrategy& sigma,
                                        const ReceiverStrategy& tau, V0Policy policy = V0Policy::kLenient) {
  detail::validate_profile(g, sigma, tau);
  const Rational bound = admissible_v0_bound(g);
  if (policy == V0Policy::kStrict && v0 > bound) require_admissible_v0(g, v0);
  const std::size_t n = g.num_types();
  CheckReport report;
  report.v0 = v0;
  report.v0_admissible = v0 <= bound;
  PosteriorTable table = posteriors(g, sigma);

  for (const auto& post : table.entries) {
    const Vec& x = tau.at(post.message);
    OptimalityCheck opt;
    opt.message = post.message;
    opt.support = post.support;
    opt.achieved = 0;
    for (auto k : post.support.members()) {
      opt.achieved += post.belief[k] * (g.accepts(k, x) ? g.receiver_utility(k)(x) : v0);
      if (!g.accepts(k, x)) {
        report.no_exit = false;
        report.exit_violations.push_back({k, post.message});
        report.exit_types = report.exit_types.with(k);
      }
    }
    opt.optimum = receiver_best_with_exit(g, post.belief, v0).value;
    opt.ok = *opt.optimum == opt.achieved;
    report.constrained_opt = report.constrained_opt && opt.ok;
    report.optimality.push_back(std::move(opt));
  }

  auto plus = [&](std::size_t k, const Vec& x) { return std::max(g.sender_utility(k)(x), g.reserve(k)); };
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t m = 0; m < sigma.num_messages(); ++m) {
      if (sigma.prob(k, m) == 0) continue;
      Rational sent = plus(k, tau.at(sigma.messages()[m]));
      for (std::size_t alt = 0; alt < sigma.num_messages(); ++alt) {
        Rational deviation = plus(k, tau.at(sigma.messages()[alt]));
        if (deviation > sent) {
          report.incentive = false;
          report.incentive_violations.push_back(
              {k, sigma.messages()[m], sigma.messages()[alt], deviation - sent});
        }
      }
    }
  }

  report.interim_sender_payoffs.assign(n, Rational(0));
  report.receiver_ex_ante = 0;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t m = 0; m < sigma.num_messages(); ++m) {
      if (sigma.prob(k, m) == 0) continue;
      const Vec& x = tau.at(sigma.messages()[m]);
      report.interim_sender_payoffs[k] += sigma.prob(k, m) * plus(k, x);
      report.receiver_ex_ante +=
          g.prior(k) * sigma.prob(k, m) * (g.accepts(k, x) ? g.receiver_utility(k)(x) : v0);
    }
  }
  report.overall = report.constrained_opt && report.incentive;
  return report;
}

}  // namespace vetotalk
