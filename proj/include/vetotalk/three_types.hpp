#pragma once

// Three-type constructions beyond partitions: the mediated lottery scheme
// for a pairwise participation structure, the mixed splitting for a chain
// structure, and a grid search over two-message sender strategies.

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vetotalk/construct.hpp"
#include "vetotalk/lp.hpp"
#include "vetotalk/model.hpp"
#include "vetotalk/participation.hpp"
#include "vetotalk/verify.hpp"

namespace vetotalk {

// Mediator: on report k, recommend with probability 1/2 each the receiver's
// optimum for the two pairs containing k.  Truth-telling is evaluated with
// the veto option, max{U, u0}, on every outcome of a misreport.
inline MediatedReport check_mediated(const GameSpec& g, const MediatedMechanism& mech,
                                     const std::vector<std::pair<TypeSet, Vec>>& recommendations) {
  const std::size_t n = g.num_types();
  MediatedReport r;
  r.truthful.assign(n, Rational(0));
  r.deviation.assign(n, Vec(n, Rational(0)));
  r.receiver_ex_ante = 0;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t report = 0; report < n; ++report) {
      for (const auto& o : mech.lottery(report)) {
        Rational u = std::max(g.sender_utility(k)(o.decision), g.reserve(k));
        r.deviation[k][report] += o.probability * u;
        if (report == k) {
          r.truthful[k] += o.probability * g.sender_utility(k)(o.decision);
          r.receiver_ex_ante += g.prior(k) * o.probability * g.receiver_utility(k)(o.decision);
          if (!g.accepts(k, o.decision)) r.truth_telling = false;
        }
      }
    }
    for (std::size_t report = 0; report < n; ++report) {
      if (report != k && r.deviation[k][report] > r.truthful[k]) r.truth_telling = false;
    }
  }
  for (const auto& [pair, x] : recommendations) {
    OptimalityCheck opt;
    opt.message = pair.label();
    opt.support = pair;
    AffineFn objective = receiver_objective(g, detail::cell_posterior(g, pair));
    opt.achieved = objective(x);
    Polytope region = acceptance_set(g, pair);
    LpOutcome best = maximize(objective, region);
    if (best.optimal()) opt.optimum = *best.value;
    opt.ok = best.optimal() && region.contains(x) && *best.value == opt.achieved;
    r.obedient = r.obedient && opt.ok;
    r.obedience.push_back(std::move(opt));
  }
  r.overall = r.truth_telling && r.obedient;
  return r;
}

inline Equilibrium mediated_three(const GameSpec& g) {
  ParticipationStructure ps = participation_structure(g);
  if (g.num_types() != 3 || ps.classification != StructureClass::kPairwise3) {
    throw Error(ErrorCode::kWrongClassification,
                "mediated construction needs three types with every pair (and only pairs) acceptable");
  }
  std::vector<std::pair<TypeSet, Vec>> recommendations;
  for (auto pair : ps.maximal) recommendations.emplace_back(pair, *cell_best_response(g, pair));

  std::vector<std::vector<LotteryOutcome>> lotteries(3);
  for (std::size_t k = 0; k < 3; ++k) {
    for (const auto& [pair, x] : recommendations) {
      if (pair.contains(k)) lotteries[k].push_back({Rational(1, 2), x});
    }
  }
  Equilibrium eq;
  eq.kind = EquilibriumKind::kMediated;
  eq.method = "mediated-three";
  eq.mechanism = MediatedMechanism(g, std::move(lotteries));
  eq.mediated_report = check_mediated(g, *eq.mechanism, recommendations);
  eq.report.interim_sender_payoffs = eq.mediated_report->truthful;
  eq.report.receiver_ex_ante = eq.mediated_report->receiver_ex_ante;
  eq.report.overall = eq.mediated_report->overall;
  if (!eq.mediated_report->overall) {
    throw Error(ErrorCode::kInternal, "mediated mechanism fails its own check");
  }
  return eq;
}

// Optimal face of the receiver at `belief` and the range of one sender
// utility over it.
struct FaceRange {
  Rational value;  // f(belief)
  Polytope face;
  Vec vertex;      // the simplex vertex attaining f
  Rational low;
  Vec low_point;
  Rational high;
  Vec high_point;
};

inline FaceRange face_range(const GameSpec& g, std::span<const Rational> belief, const AffineFn& payoff) {
  AffineFn objective = receiver_objective(g, belief);
  LexOutcome up = lex_maximize_detailed(objective, payoff, acceptance_set(g, support_of(belief)));
  if (!up.primary.optimal()) throw Error(ErrorCode::kInternal, "empty acceptance set on a splitting branch");
  LpOutcome down = maximize(-payoff, up.face);
  return FaceRange{*up.primary.value, up.face, *up.primary.point, -*down.value, *down.point,
                   *up.outcome.value, *up.outcome.point};
}

namespace detail {

struct SplitGeometry {
  std::size_t pivot, a, b;
  Vec prior;
  Vec dirac_a, dirac_b;
  Vec without_a;  // prior conditioned on not-a: support {pivot, b}
  Vec without_b;  // support {pivot, a}

  // q_t = t * dirac_a + (1 - t) * without_b
  Vec q(const Rational& t) const {
    Vec out(3);
    for (std::size_t k = 0; k < 3; ++k) out[k] = t * dirac_a[k] + (1 - t) * without_b[k];
    return out;
  }

  // Unnormalized direction of q'_t: q_t^a * p - p^a * q_t, affine in t.
  Vec q_prime_direction(const Rational& t) const {
    Vec qt = q(t);
    Vec out(3);
    for (std::size_t k = 0; k < 3; ++k) out[k] = qt[a] * prior[k] - prior[a] * qt[k];
    return out;
  }

  // The point of [without_a, dirac_b] such that p lies on [q_t, q'_t].
  Vec q_prime(const Rational& t) const {
    Vec dir = q_prime_direction(t);
    Rational total = sum(dir);
    for (auto& v : dir) v /= total;
    return dir;
  }

  // Weight of the q_t branch in the split of p.
  Rational branch_mass(const Rational& t) const { return prior[a] / q(t)[a]; }
};

inline Vec conditional_without(const Vec& p, std::size_t drop) {
  Vec out = p;
  out[drop] = 0;
  Rational total = sum(out);
  for (auto& v : out) v /= total;
  return out;
}

struct SplitEval {
  Rational t;
  FaceRange left;   // at q_t
  FaceRange right;  // at q'_t
  Rational f_min() const { return left.low - right.high; }
  Rational f_max() const { return left.high - right.low; }
};

// Root of t -> h0 + t (h1 - h0), if any.
inline std::optional<Rational> affine_root(const Rational& h0, const Rational& h1) {
  if (h0 == h1) return std::nullopt;
  return h0 / (h0 - h1);
}

}  // namespace detail

// Three types whose maximal acceptable sets are two pairs sharing a pivot.
// Tries the two pure splits first; otherwise searches t in (0,1) for
// posteriors q_t (pivot with a) and q'_t (pivot with b) whose optimal faces
// let the pivot be indifferent, then has the pivot mix to induce them.
inline Equilibrium mixed_three(const GameSpec& original, int budget = 128) {
  ParticipationStructure ps = participation_structure(original);
  if (original.num_types() != 3 || ps.classification != StructureClass::kChain3) {
    throw Error(ErrorCode::kWrongClassification,
                "mixed construction needs three types with two acceptable pairs sharing one type");
  }
  const GameSpec g = translate_reserves(original);

  detail::SplitGeometry geo;
  geo.pivot = *ps.pivot;
  std::vector<std::size_t> others = g.all_types().without(geo.pivot).members();
  geo.a = others[0];
  geo.b = others[1];
  geo.prior = g.prior_vector();
  geo.dirac_a = unit_vector(3, geo.a);
  geo.dirac_b = unit_vector(3, geo.b);
  geo.without_a = detail::conditional_without(geo.prior, geo.a);
  geo.without_b = detail::conditional_without(geo.prior, geo.b);
  const AffineFn& pivot_u = g.sender_utility(geo.pivot);

  auto tag = [&](Equilibrium eq, std::optional<Rational> t) {
    eq.pivot = geo.pivot;
    eq.split_point = std::move(t);
    return eq;
  };

  // Pure split {{a}, {pivot, b}} works if the pivot can weakly prefer the pooled proposal.
  FaceRange at_a = face_range(g, geo.dirac_a, pivot_u);
  FaceRange pooled_b = face_range(g, geo.without_a, pivot_u);
  if (at_a.low <= pooled_b.high) {
    return tag(make_partitional(original, {TypeSet::single(geo.a), TypeSet::of({geo.pivot, geo.b})},
                                "mixed-three", {at_a.low_point, pooled_b.high_point}),
               Rational(1));
  }
  FaceRange at_b = face_range(g, geo.dirac_b, pivot_u);
  FaceRange pooled_a = face_range(g, geo.without_b, pivot_u);
  if (at_b.low <= pooled_a.high) {
    return tag(make_partitional(original, {TypeSet::single(geo.b), TypeSet::of({geo.pivot, geo.a})},
                                "mixed-three", {at_b.low_point, pooled_a.high_point}),
               Rational(0));
  }

  auto evaluate = [&](const Rational& t) {
    return detail::SplitEval{t, face_range(g, geo.q(t), pivot_u), face_range(g, geo.q_prime(t), pivot_u)};
  };

  auto build = [&](const detail::SplitEval& e) -> std::optional<Equilibrium> {
    const std::size_t n = g.dim();
    Polytope joint = e.left.face.embedded(2 * n, 0);
    joint.append(e.right.face.embedded(2 * n, n));
    AffineFn indifference = AffineFn::zero(2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      indifference.coeffs[i] = pivot_u.coeffs[i];
      indifference.coeffs[n + i] = -pivot_u.coeffs[i];
    }
    joint.add_equal(indifference, 0);
    LpOutcome lp = feasible(joint);
    if (!lp.optimal()) return std::nullopt;
    Vec x(lp.point->begin(), lp.point->begin() + static_cast<std::ptrdiff_t>(n));
    Vec y(lp.point->begin() + static_cast<std::ptrdiff_t>(n), lp.point->end());

    Vec qt = geo.q(e.t);
    Rational mass = geo.branch_mass(e.t);
    Rational alpha = mass * qt[geo.pivot] / geo.prior[geo.pivot];

    std::vector<std::string> messages{TypeSet::of({geo.pivot, geo.a}).label(),
                                      TypeSet::of({geo.pivot, geo.b}).label()};
    std::vector<Vec> rows(3, Vec(2, Rational(0)));
    rows[geo.a][0] = 1;
    rows[geo.b][1] = 1;
    rows[geo.pivot][0] = alpha;
    rows[geo.pivot][1] = 1 - alpha;
    ReceiverStrategy tau;
    tau.proposals[messages[0]] = x;
    tau.proposals[messages[1]] = y;
    detail::pad_messages(3, messages, rows, tau);
    Equilibrium eq;
    eq.method = "mixed-three";
    eq.sigma = SenderStrategy(std::move(messages), std::move(rows));
    eq.tau = std::move(tau);
    return tag(detail::finalize(original, std::move(eq)), e.t);
  };

  auto contains_zero = [](const detail::SplitEval& e) { return e.f_min() <= 0 && 0 <= e.f_max(); };

  // Where the receiver's optimal vertex switches between the two ends of the
  // bracket the face grows; those switch points are computed exactly.
  auto switch_points = [&](const detail::SplitEval& lo, const detail::SplitEval& hi) {
    std::vector<Rational> out;
    Vec dv_left(3), dv_right(3);
    for (std::size_t k = 0; k < 3; ++k) {
      dv_left[k] = g.receiver_utility(k)(lo.left.vertex) - g.receiver_utility(k)(hi.left.vertex);
      dv_right[k] = g.receiver_utility(k)(lo.right.vertex) - g.receiver_utility(k)(hi.right.vertex);
    }
    if (auto r = detail::affine_root(dot(geo.q(0), dv_left), dot(geo.q(1), dv_left))) out.push_back(*r);
    if (auto r = detail::affine_root(dot(geo.q_prime_direction(0), dv_right),
                                     dot(geo.q_prime_direction(1), dv_right))) {
      out.push_back(*r);
    }
    std::erase_if(out, [&](const Rational& t) { return !(lo.t < t && t < hi.t); });
    return out;
  };

  detail::SplitEval lo = evaluate(0);
  detail::SplitEval hi = evaluate(1);
  for (int iter = 0; iter < budget; ++iter) {
    detail::SplitEval mid = evaluate((lo.t + hi.t) / 2);
    if (contains_zero(mid)) {
      if (auto eq = build(mid)) return *eq;
    }
    for (const auto& t : switch_points(lo, hi)) {
      detail::SplitEval e = evaluate(t);
      if (contains_zero(e)) {
        if (auto eq = build(e)) return *eq;
      }
    }
    if (mid.f_max() < 0) lo = std::move(mid);
    else if (mid.f_min() > 0) hi = std::move(mid);
    else throw Error(ErrorCode::kInternal, "indifference region found but the joint program is infeasible");
  }
  throw Error(ErrorCode::kBisectionBudgetExceeded,
              "no indifference point within " + std::to_string(budget) + " steps; bracket [" + lo.t.str() +
                  ", " + hi.t.str() + "]");
}

// Enumerates sender strategies over two messages where type k sends the
// first message with probability i_k / resolution.  For each one it asks an
// exact LP whether the receiver has optimal proposals at both posteriors that
// make every type's choice incentive compatible.  Returns the first hit in
// lexicographic grid order; nullopt is not a proof of nonexistence.
inline std::optional<Equilibrium> grid_mixed_search(const GameSpec& g, int resolution = 60) {
  if (g.num_types() != 3) {
    throw Error(ErrorCode::kWrongTypeCount, "grid search is defined for three types");
  }
  if (resolution < 1) throw Error(ErrorCode::kValidation, "grid resolution must be positive");
  const std::size_t n = g.dim();
  const int r = resolution;

  std::map<std::uint32_t, bool> support_ok;
  auto support_feasible = [&](TypeSet s) {
    auto [it, inserted] = support_ok.try_emplace(s.bits(), false);
    if (inserted) it->second = acceptable(g, s);
    return it->second;
  };
  std::map<Vec, Rational> optimum_cache;
  auto optimum = [&](const Vec& belief) {
    auto it = optimum_cache.find(belief);
    if (it != optimum_cache.end()) return it->second;
    Rational v = *maximize(receiver_objective(g, belief), acceptance_set(g, support_of(belief))).value;
    optimum_cache.emplace(belief, v);
    return v;
  };

  const std::vector<std::string> names{"m1", "m2", "m3"};
  for (int i0 = 0; i0 <= r; ++i0) {
    for (int i1 = 0; i1 <= r; ++i1) {
      for (int i2 = 0; i2 <= r; ++i2) {
        // (i) and (r - i) describe the same split with the messages swapped.
        std::array<int, 3> idx{i0, i1, i2}, mirror{r - i0, r - i1, r - i2};
        if (mirror < idx) continue;

        std::vector<Vec> rows(3, Vec(3, Rational(0)));
        for (std::size_t k = 0; k < 3; ++k) {
          rows[k][0] = Rational(idx[k], r);
          rows[k][1] = 1 - rows[k][0];
        }
        SenderStrategy sigma(names, rows);
        PosteriorTable table = posteriors(g, sigma);
        bool supports_ok = true;
        for (const auto& post : table.entries) supports_ok = supports_ok && support_feasible(post.support);
        if (!supports_ok) continue;

        const std::size_t on_path = table.entries.size();
        Polytope joint(on_path * n);
        for (std::size_t e = 0; e < on_path; ++e) {
          const auto& post = table.entries[e];
          Polytope face = acceptance_set(g, post.support).with_at_least(receiver_objective(g, post.belief),
                                                                        optimum(post.belief));
          joint.append(face.embedded(on_path * n, e * n));
        }
        for (std::size_t e = 0; e < on_path; ++e) {
          for (std::size_t f = 0; f < on_path; ++f) {
            if (e == f) continue;
            for (std::size_t k = 0; k < 3; ++k) {
              if (sigma.prob(k, table.entries[e].message_index) == 0) continue;
              // U^k(x_f) - U^k(x_e) <= 0
              AffineFn diff = AffineFn::zero(on_path * n);
              for (std::size_t i = 0; i < n; ++i) {
                diff.coeffs[f * n + i] += g.sender_utility(k).coeffs[i];
                diff.coeffs[e * n + i] -= g.sender_utility(k).coeffs[i];
              }
              joint.add_at_most(diff, 0);
            }
          }
        }
        LpOutcome lp = feasible(joint);
        if (!lp.optimal()) continue;

        ReceiverStrategy tau;
        for (std::size_t e = 0; e < on_path; ++e) {
          tau.proposals[table.entries[e].message] =
              Vec(lp.point->begin() + static_cast<std::ptrdiff_t>(e * n),
                  lp.point->begin() + static_cast<std::ptrdiff_t>((e + 1) * n));
        }
        for (const auto& m : names) {
          if (!tau.proposals.count(m)) tau.proposals[m] = tau.proposals.at(table.entries.front().message);
        }
        Equilibrium eq;
        eq.method = "grid-search";
        eq.sigma = std::move(sigma);
        eq.tau = std::move(tau);
        return detail::finalize(g, std::move(eq));
      }
    }
  }
  return std::nullopt;
}

}  // namespace vetotalk
