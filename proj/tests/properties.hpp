#pragma once

#include <functional>
#include <sstream>

#include "support.hpp"

namespace vt_test {

inline constexpr int kInstances = 200;

struct SuiteResult {
  std::string name;
  int instances = 0;
  int failures = 0;
  std::string first_failure;

  void fail(const std::string& why) {
    if (failures++ == 0) first_failure = why;
  }
  bool ok() const { return instances >= kInstances && failures == 0; }
  std::string summary() const {
    std::ostringstream s;
    s << name << ": " << instances << " instances, " << failures << " failures";
    if (!first_failure.empty()) s << " (first: " << first_failure << ")";
    return s.str();
  }
};

// Draws candidates until `wanted` of them qualify.  `body` returns false for
// a candidate that does not qualify and records failures on the result.
inline SuiteResult run_suite(const std::string& name, std::uint32_t seed,
                             const std::function<bool(Random&, SuiteResult&)>& body, int wanted = kInstances) {
  SuiteResult out{name};
  Random r(seed);
  for (int draws = 0; out.instances < wanted && draws < 50 * wanted; ++draws) {
    try {
      if (body(r, out)) ++out.instances;
    } catch (const Error& e) {
      ++out.instances;
      out.fail(std::string("unexpected error: ") + e.what());
    }
  }
  if (out.instances < wanted) out.fail("only " + std::to_string(out.instances) + " qualifying instances");
  return out;
}

inline std::string show(const Vec& v) {
  std::string s = "(";
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i].str();
  return s + ")";
}

// Random bounded polytope: a box plus a few random cuts, sometimes infeasible.
inline Polytope random_polytope(Random& r, std::size_t dim) {
  Polytope p = box(dim, -5, 5);
  const int cuts = r.integer(1, 4);
  for (int i = 0; i < cuts; ++i) p.add_row({r.vec(dim, -4, 4), r.rational(-8, 8, 2)});
  return p;
}

// Perturbations of the second example that keep the pivot structure.
inline GameSpec perturbed_chain(Random& r) {
  GameSpec base = game_4_2();
  std::vector<TypeSpec> types = base.types();
  Vec prior = r.simplex_point(3, 12);
  for (std::size_t k = 0; k < 3; ++k) types[k].prior = prior[k];
  types[0].reserve = r.rational(10, 50, 2);
  types[1].reserve = r.rational(10, 50, 2);
  types[2].reserve = r.rational(0, 60, 2);
  types[0].receiver = affine(Vec{r.rational(1, 3, 3), Rational(0)});
  types[1].receiver = affine(Vec{Rational(0), r.rational(1, 3, 3)});
  types[2].receiver = affine(Vec{-r.rational(1, 3, 2), -r.rational(1, 3, 2)});
  types[2].sender = affine(Vec{r.rational(1, 3), r.rational(1, 3)});
  return GameSpec::create(base.decisions(), types);
}

// Perturbations of the third example with each pair acceptable but not all three.
inline GameSpec perturbed_cycle(Random& r) {
  GameSpec base = game_4_3();
  std::vector<TypeSpec> types = base.types();
  Vec prior = r.simplex_point(3, 12);
  for (std::size_t k = 0; k < 3; ++k) {
    Vec u(3, Rational(0)), v(3, Rational(0));
    u[(k + 1) % 3] = -r.rational(1, 4, 2);
    u[(k + 2) % 3] = r.rational(1, 3, 2);
    v[k] = r.rational(1, 3, 2);
    v[(k + 2) % 3] = r.rational(0, 2, 2);
    types[k].prior = prior[k];
    types[k].sender = affine(u);
    types[k].receiver = affine(v);
    types[k].reserve = -r.rational(0, 1, 4);
  }
  return GameSpec::create(base.decisions(), types);
}

// Mostly unstructured games, with the three-type families mixed in.
inline GameSpec varied_game(Random& r) {
  switch (r.integer(0, 3)) {
    case 0: return perturbed_chain(r);
    case 1: return perturbed_cycle(r);
    default: return random_game(r, r.integer(1, 4), 2, r.integer(0, 1) == 1);
  }
}

// Sum over messages of P(m) p_m equals the prior, beliefs sum to one and the
// support is where the belief is positive.
inline SuiteResult splitting_identity_suite() {
  return run_suite("splitting identity", 11, [](Random& r, SuiteResult& res) {
    const std::size_t n = r.integer(1, 5);
    GameSpec g = random_game(r, n, 2, false);
    SenderStrategy sigma = random_strategy(r, n, n + r.integer(0, 3));
    PosteriorTable t = posteriors(g, sigma);
    Vec total(n, Rational(0));
    for (const auto& e : t.entries) {
      Rational sum = 0;
      for (std::size_t k = 0; k < n; ++k) {
        total[k] += e.mass * e.belief[k];
        sum += e.belief[k];
        if ((e.belief[k] > 0) != e.support.contains(k)) res.fail("support mismatch at " + e.message);
      }
      if (sum != 1) res.fail("belief at " + e.message + " sums to " + sum.str());
    }
    if (total != g.prior_vector()) res.fail("recombined prior " + show(total));
    return true;
  });
}

// Certificates validate exactly and agree with brute-force vertex enumeration.
inline SuiteResult lp_certificate_suite() {
  return run_suite("LP certificates", 12, [](Random& r, SuiteResult& res) {
    const std::size_t dim = r.integer(1, 3);
    Polytope p = random_polytope(r, dim);
    AffineFn f = affine(r.vec(dim, -3, 3), r.rational(-2, 2));
    AffineFn h = affine(r.vec(dim, -3, 3));
    LpOutcome out = maximize(f, p);
    std::vector<Vec> verts = vertices(p);
    if (out.infeasible()) {
      if (!verify_farkas_certificate(p, out)) res.fail("Farkas certificate rejected");
      if (!verts.empty()) res.fail("infeasible but a vertex exists");
      return true;
    }
    if (!out.optimal()) {
      res.fail("bounded polytope reported unbounded");
      return true;
    }
    if (!verify_optimality_certificate(f, p, out)) res.fail("optimality certificate rejected");
    std::optional<Rational> best;
    for (const auto& v : verts) {
      if (!best || f(v) > *best) best = f(v);
    }
    if (!best || *best != *out.value) res.fail("value differs from vertex oracle");
    LexOutcome lex = lex_maximize_detailed(f, h, p);
    std::optional<Rational> second;
    for (const auto& v : verts) {
      if (f(v) == *best && (!second || h(v) > *second)) second = h(v);
    }
    if (!lex.outcome.optimal() || *lex.outcome.value != *second) res.fail("lex value differs from vertex oracle");
    else if (!verify_optimality_certificate(h, lex.face, lex.outcome)) res.fail("lex certificate rejected");
    return true;
  });
}

// Maximal acceptable sets are acceptable, pairwise incomparable, cover every
// type and cannot be enlarged.
inline SuiteResult participation_suite() {
  return run_suite("participation structure", 13, [](Random& r, SuiteResult& res) {
    const std::size_t n = r.integer(1, 5);
    GameSpec g = random_game(r, n, 2, false);
    ParticipationStructure ps = participation_structure(g);
    TypeSet cover;
    for (auto s : ps.maximal) {
      cover = cover | s;
      if (!acceptable(g, s)) res.fail(s.label() + " is not acceptable");
      for (auto t : ps.maximal) {
        if (s != t && s.subset_of(t)) res.fail(s.label() + " inside " + t.label());
      }
      for (std::size_t k = 0; k < n; ++k) {
        if (!s.contains(k) && acceptable(g, s.with(k))) res.fail(s.label() + " extends by " + std::to_string(k + 1));
      }
    }
    if (cover != g.all_types()) res.fail("types left uncovered");
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
      TypeSet s(mask);
      bool inside = false;
      for (auto m : ps.maximal) inside = inside || s.subset_of(m);
      if (acceptable(g, s) != inside) res.fail("acceptability of " + s.label() + " disagrees with the structure");
    }
    return true;
  });
}

// Envy implies a strictly higher receiver value, hence no cycles; leaders
// and followers partition the types and every follower envies a leader.
inline SuiteResult envy_graph_suite() {
  return run_suite("envy graph", 14, [](Random& r, SuiteResult& res) {
    GameSpec g = random_game(r, r.integer(2, 6), 2, true);
    EnvyGraph e = envy_graph(g);
    if (e.has_cycle()) res.fail("cycle");
    for (auto [k, j] : e.edges) {
      if (!(e.values[k] > e.values[j])) res.fail("edge without a value drop");
    }
    if ((e.leaders | e.followers) != g.all_types() || !(e.leaders & e.followers).empty()) {
      res.fail("leaders and followers do not partition the types");
    }
    for (auto k : e.followers.members()) {
      bool into_leader = false;
      for (auto j : e.leaders.members()) into_leader = into_leader || e.envies[k][j];
      if (!into_leader) res.fail("follower without a leader");
    }
    return true;
  });
}

inline void recheck(const GameSpec& g, const Equilibrium& eq, SuiteResult& res) {
  if (eq.mechanism) {
    if (!eq.mediated_report || !eq.mediated_report->overall) res.fail(eq.method + " mechanism not verified");
    return;
  }
  if (!eq.report.overall) res.fail(eq.method + " returned an unverified profile");
  if (!check_limit_equilibrium(g, *eq.sigma, *eq.tau).overall) res.fail(eq.method + " fails an independent recheck");
}

inline std::vector<SuiteResult> constructor_suites() {
  std::vector<SuiteResult> out;
  out.push_back(run_suite("two-type constructor", 21, [](Random& r, SuiteResult& res) {
    GameSpec g = random_game(r, 2, r.integer(1, 3), r.integer(0, 1) == 1);
    recheck(g, two_type(g), res);
    return true;
  }));
  out.push_back(run_suite("monotone constructor", 22, [](Random& r, SuiteResult& res) {
    GameSpec g = random_game(r, r.integer(1, 5), 1, r.integer(0, 1) == 1);
    recheck(g, monotone_interval_eq(g), res);
    return true;
  }));
  out.push_back(run_suite("partition-structure constructor", 23, [](Random& r, SuiteResult& res) {
    GameSpec g = random_game(r, r.integer(2, 5), 2, false);
    if (participation_structure(g).classification != StructureClass::kPartition) return false;
    recheck(g, partition_structure_eq(g), res);
    return true;
  }));
  out.push_back(run_suite("leader-follower constructor", 24, [](Random& r, SuiteResult& res) {
    GameSpec g = random_game(r, r.integer(2, 6), 2, true);
    recheck(g, leader_follower(g), res);
    return true;
  }));
  out.push_back(run_suite("mixed three-type constructor", 25, [](Random& r, SuiteResult& res) {
    GameSpec g = perturbed_chain(r);
    if (participation_structure(g).classification != StructureClass::kChain3) return false;
    Equilibrium eq = mixed_three(g);
    recheck(g, eq, res);
    if (eq.sigma && eq.kind == EquilibriumKind::kMixed) {
      // posteriors are the two splitting points
      PosteriorTable t = posteriors(g, *eq.sigma);
      if (t.entries.size() != 2) res.fail("mixed profile with " + std::to_string(t.entries.size()) + " posteriors");
    }
    return true;
  }));
  out.push_back(run_suite("mediated three-type constructor", 26, [](Random& r, SuiteResult& res) {
    GameSpec g = perturbed_cycle(r);
    if (participation_structure(g).classification != StructureClass::kPairwise3) return false;
    recheck(g, mediated_three(g), res);
    return true;
  }));
  out.push_back(run_suite("solve dispatcher", 27, [](Random& r, SuiteResult& res) {
    GameSpec g = varied_game(r);
    SolveResult s = solve(g, {Method::kAuto, 4});
    if (!s.resolved()) return false;
    recheck(g, *s.equilibrium, res);
    return true;
  }));
  return out;
}

// An equilibrium without exit at v0 stays one at every lower v0, with the
// same interim payoffs.
inline SuiteResult persistence_suite() {
  return run_suite("persistence below the exit threshold", 31, [](Random& r, SuiteResult& res) {
    GameSpec g = varied_game(r);
    SolveResult s = solve(g, {Method::kAuto, 4});
    if (!s.resolved() || !s.equilibrium->sigma) return false;
    const auto& eq = *s.equilibrium;
    ThresholdReport t = exit_threshold(g, *eq.sigma, *eq.tau);
    CheckReport top = check_v0_equilibrium(g, t.overall, *eq.sigma, *eq.tau);
    if (!top.overall || !top.exit_types.empty()) res.fail("not an equilibrium at the threshold " + t.overall.str());
    for (const Rational& z : {t.overall - 1, t.overall - r.rational(1, 50, 3)}) {
      CheckReport below = check_v0_equilibrium(g, z, *eq.sigma, *eq.tau);
      if (!below.overall || !below.exit_types.empty()) res.fail("lost at " + z.str());
      if (below.interim_sender_payoffs != top.interim_sender_payoffs) res.fail("payoffs changed at " + z.str());
    }
    if (check_limit_equilibrium(g, *eq.sigma, *eq.tau).interim_sender_payoffs != top.interim_sender_payoffs) {
      res.fail("limit payoffs differ");
    }
    return true;
  });
}

// The approving sender never gets less than the outside option.
inline SuiteResult approval_suite() {
  return run_suite("approval payoff", 32, [](Random& r, SuiteResult& res) {
    const std::size_t n = r.integer(1, 4);
    GameSpec g = random_game(r, n, 2, false);
    Vec x = r.vec(2, 0, 10, 3);
    for (std::size_t k = 0; k < n; ++k) {
      Rational a = approval_payoff(g, k, x);
      if (a < g.reserve(k)) res.fail("below reserve");
      if (g.accepts(k, x) != (g.sender_utility(k)(x) >= g.reserve(k))) res.fail("acceptance at indifference");
    }
    return true;
  });
}

inline std::vector<SuiteResult> all_property_suites() {
  std::vector<SuiteResult> out{splitting_identity_suite(), lp_certificate_suite(), participation_suite(),
                               envy_graph_suite()};
  for (auto& s : constructor_suites()) out.push_back(std::move(s));
  out.push_back(persistence_suite());
  out.push_back(approval_suite());
  return out;
}

}  // namespace vt_test
