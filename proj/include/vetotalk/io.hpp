#pragma once

// JSON game files, profile files and result files.  Every number is a
// rational written as a string ("40", "-110/3").

#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "vetotalk/construct.hpp"
#include "vetotalk/model.hpp"
#include "vetotalk/participation.hpp"
#include "vetotalk/threshold.hpp"
#include "vetotalk/verify.hpp"

namespace vetotalk::io {

using Json = nlohmann::ordered_json;

namespace detail {

[[noreturn]] inline void fail(const std::string& where, const std::string& what) {
  throw Error(ErrorCode::kParse, where + ": " + what);
}

inline void only_members(const Json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) fail(where, "expected an object");
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* a : allowed) known = known || key == a;
    if (!known) fail(where, "unknown member \"" + key + "\"");
  }
}

inline const Json& member(const Json& j, const std::string& where, const char* name) {
  auto it = j.find(name);
  if (it == j.end()) fail(where, std::string("missing member \"") + name + "\"");
  return *it;
}

inline Rational rational(const Json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a rational written as a string");
  try {
    return parse_rational(j.get<std::string>());
  } catch (const Error& e) {
    fail(where, e.what());
  }
}

inline Vec vec(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array");
  Vec out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(rational(j[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

inline AffineFn affine(const Json& j, const std::string& where) {
  only_members(j, where, {"coeffs", "constant"});
  return AffineFn{vec(member(j, where, "coeffs"), where + ".coeffs"),
                  rational(member(j, where, "constant"), where + ".constant")};
}

inline Json parse_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    fail(source, e.what());
  }
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kParse, path + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Json str(const Rational& r) { return to_string(r); }

inline Json str(std::span<const Rational> v) {
  Json out = Json::array();
  for (const auto& r : v) out.push_back(to_string(r));
  return out;
}

}  // namespace detail

inline GameSpec game_from_json(const Json& j, const std::string& source = "game") {
  using namespace detail;
  only_members(j, source, {"dimension", "decision_set", "types"});
  const Json& dim_json = member(j, source, "dimension");
  if (!dim_json.is_number_integer() || dim_json.get<long long>() < 1) {
    fail(source + ".dimension", "expected a positive integer");
  }
  const auto dim = static_cast<std::size_t>(dim_json.get<long long>());

  const std::string xs = source + ".decision_set";
  const Json& xj = member(j, source, "decision_set");
  only_members(xj, xs, {"rows"});
  const Json& rows = member(xj, xs, "rows");
  if (!rows.is_array()) fail(xs + ".rows", "expected an array");
  Polytope x(dim);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const std::string where = xs + ".rows[" + std::to_string(i) + "]";
    only_members(rows[i], where, {"normal", "rhs"});
    HalfSpace h{vec(member(rows[i], where, "normal"), where + ".normal"),
                rational(member(rows[i], where, "rhs"), where + ".rhs")};
    if (h.normal.size() != dim) fail(where, "normal has length " + std::to_string(h.normal.size()));
    x.add_row(std::move(h));
  }

  const Json& tj = member(j, source, "types");
  if (!tj.is_array()) fail(source + ".types", "expected an array");
  std::vector<TypeSpec> types;
  for (std::size_t k = 0; k < tj.size(); ++k) {
    const std::string where = source + ".types[" + std::to_string(k) + "]";
    only_members(tj[k], where, {"name", "prior", "reserve", "U", "V"});
    TypeSpec t;
    const Json& name = member(tj[k], where, "name");
    if (!name.is_string()) fail(where + ".name", "expected a string");
    t.name = name.get<std::string>();
    t.prior = rational(member(tj[k], where, "prior"), where + ".prior");
    t.reserve = rational(member(tj[k], where, "reserve"), where + ".reserve");
    t.sender = affine(member(tj[k], where, "U"), where + ".U");
    t.receiver = affine(member(tj[k], where, "V"), where + ".V");
    if (t.sender.dim() != dim || t.receiver.dim() != dim) fail(where, "utility length differs from dimension");
    types.push_back(std::move(t));
  }
  return GameSpec::create(std::move(x), std::move(types));
}

inline GameSpec parse_game(const std::string& text, const std::string& source = "game") {
  return game_from_json(detail::parse_text(text, source), source);
}

inline GameSpec load_game(const std::string& path) { return parse_game(detail::read_file(path), path); }

inline Json affine_to_json(const AffineFn& f) {
  return Json{{"coeffs", detail::str(f.coeffs)}, {"constant", detail::str(f.constant)}};
}

inline Json game_to_json(const GameSpec& g) {
  Json rows = Json::array();
  for (const auto& h : g.decisions().rows()) rows.push_back(Json{{"normal", detail::str(h.normal)}, {"rhs", detail::str(h.rhs)}});
  Json types = Json::array();
  for (const auto& t : g.types()) {
    types.push_back(Json{{"name", t.name},
                         {"prior", detail::str(t.prior)},
                         {"reserve", detail::str(t.reserve)},
                         {"U", affine_to_json(t.sender)},
                         {"V", affine_to_json(t.receiver)}});
  }
  return Json{{"dimension", g.dim()}, {"decision_set", Json{{"rows", rows}}}, {"types", types}};
}

// FNV-1a over the canonical serialization, as 16 hex digits.
inline std::string game_digest(const GameSpec& g) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : game_to_json(g).dump()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream ss;
  ss << std::hex;
  ss.width(16);
  ss.fill('0');
  ss << h;
  return ss.str();
}

struct Profile {
  SenderStrategy sigma;
  ReceiverStrategy tau;
};

inline Json profile_to_json(const SenderStrategy& sigma, const ReceiverStrategy& tau) {
  Json rows = Json::array();
  for (const auto& row : sigma.rows()) rows.push_back(detail::str(row));
  Json proposals = Json::object();
  for (const auto& m : sigma.messages()) proposals[m] = detail::str(tau.at(m));
  return Json{{"messages", sigma.messages()}, {"sigma", rows}, {"tau", proposals}};
}

// Accepts a bare profile or a result file carrying a "profile" member.
inline Profile profile_from_json(const Json& root, const std::string& source = "profile") {
  using namespace detail;
  const Json* jp = &root;
  std::string where = source;
  if (root.is_object() && root.contains("profile") && !root.contains("messages")) {
    jp = &root["profile"];
    where += ".profile";
  } else {
    only_members(root, where, {"messages", "sigma", "tau"});
  }
  const Json& j = *jp;
  only_members(j, where, {"messages", "sigma", "tau"});
  const Json& mj = member(j, where, "messages");
  if (!mj.is_array()) fail(where + ".messages", "expected an array");
  std::vector<std::string> messages;
  for (const auto& m : mj) {
    if (!m.is_string()) fail(where + ".messages", "expected strings");
    messages.push_back(m.get<std::string>());
  }
  const Json& sj = member(j, where, "sigma");
  if (!sj.is_array()) fail(where + ".sigma", "expected an array of rows");
  std::vector<Vec> rows;
  for (std::size_t k = 0; k < sj.size(); ++k) rows.push_back(vec(sj[k], where + ".sigma[" + std::to_string(k) + "]"));
  const Json& tj = member(j, where, "tau");
  if (!tj.is_object()) fail(where + ".tau", "expected an object");
  ReceiverStrategy tau;
  for (const auto& [m, x] : tj.items()) tau.proposals[m] = vec(x, where + ".tau." + m);
  return Profile{SenderStrategy(std::move(messages), std::move(rows)), std::move(tau)};
}

inline Profile parse_profile(const std::string& text, const std::string& source = "profile") {
  return profile_from_json(detail::parse_text(text, source), source);
}

inline Profile load_profile(const std::string& path) { return parse_profile(detail::read_file(path), path); }

inline Json posteriors_to_json(const GameSpec& g, const SenderStrategy& sigma) {
  Json out = Json::array();
  for (const auto& post : posteriors(g, sigma).entries) {
    out.push_back(Json{{"message", post.message},
                       {"mass", detail::str(post.mass)},
                       {"belief", detail::str(post.belief)},
                       {"support", post.support.label()}});
  }
  return out;
}

inline Json report_to_json(const CheckReport& r) {
  Json exits = Json::array();
  for (const auto& e : r.exit_violations) exits.push_back(Json{{"type", e.type + 1}, {"message", e.message}});
  Json opt = Json::array();
  for (const auto& o : r.optimality) {
    Json item{{"message", o.message}, {"support", o.support.label()}, {"achieved", detail::str(o.achieved)}};
    item["optimum"] = o.optimum ? detail::str(*o.optimum) : Json(nullptr);
    item["ok"] = o.ok;
    opt.push_back(item);
  }
  Json ic = Json::array();
  for (const auto& v : r.incentive_violations) {
    ic.push_back(Json{{"type", v.type + 1}, {"sent", v.sent}, {"deviation", v.deviation}, {"gap", detail::str(v.gap)}});
  }
  Json out{{"no_exit", r.no_exit},
           {"exit_violations", exits},
           {"constrained_opt", r.constrained_opt},
           {"optimality", opt},
           {"incentive", r.incentive},
           {"incentive_violations", ic},
           {"overall", r.overall},
           {"interim_sender_payoffs", detail::str(r.interim_sender_payoffs)},
           {"receiver_ex_ante", detail::str(r.receiver_ex_ante)}};
  if (r.v0) {
    out["v0"] = detail::str(*r.v0);
    out["v0_admissible"] = r.v0_admissible;
    out["exit_types"] = r.exit_types.label();
  }
  return out;
}

inline Json equilibrium_to_json(const GameSpec& g, const Equilibrium& eq) {
  Json out{{"kind", std::string(equilibrium_kind_name(eq.kind))}, {"method", eq.method}};
  if (eq.pivot) out["pivot"] = *eq.pivot + 1;
  if (eq.split_point) out["split_point"] = detail::str(*eq.split_point);
  if (eq.sigma && eq.tau) {
    out["profile"] = profile_to_json(*eq.sigma, *eq.tau);
    out["posteriors"] = posteriors_to_json(g, *eq.sigma);
  }
  if (eq.mechanism) {
    Json lotteries = Json::array();
    for (std::size_t k = 0; k < g.num_types(); ++k) {
      Json lottery = Json::array();
      for (const auto& o : eq.mechanism->lottery(k)) {
        lottery.push_back(Json{{"probability", detail::str(o.probability)}, {"decision", detail::str(o.decision)}});
      }
      lotteries.push_back(Json{{"type", k + 1}, {"lottery", lottery}, {"mean", detail::str(eq.mechanism->mean_decision(k))}});
    }
    out["mechanism"] = lotteries;
  }
  if (eq.mediated_report) {
    const auto& m = *eq.mediated_report;
    Json dev = Json::array();
    for (const auto& row : m.deviation) dev.push_back(detail::str(row));
    out["mediated_check"] = Json{{"truthful", detail::str(m.truthful)},
                                 {"deviation", dev},
                                 {"truth_telling", m.truth_telling},
                                 {"obedient", m.obedient},
                                 {"overall", m.overall}};
  }
  out["check"] = report_to_json(eq.report);
  return out;
}

inline Json structure_to_json(const GameSpec& g, const ParticipationStructure& ps) {
  Json maximal = Json::array();
  Json sets = Json::array();
  for (auto s : ps.maximal) {
    Json members = Json::array();
    for (auto k : s.members()) members.push_back(k + 1);
    maximal.push_back(members);
    Json rows = Json::array();
    const Polytope region = acceptance_set(g, s);
    for (const auto& h : region.rows()) rows.push_back(Json{{"normal", detail::str(h.normal)}, {"rhs", detail::str(h.rhs)}});
    sets.push_back(Json{{"L", members}, {"rows", rows}});
  }
  Json out{{"maximal", maximal}, {"classification", std::string(structure_class_name(ps.classification))}};
  if (ps.pivot) out["pivot"] = *ps.pivot + 1;
  out["acceptance_sets"] = sets;
  return out;
}

inline Json threshold_to_json(const ThresholdReport& t) {
  Json per = Json::object();
  for (const auto& [m, th] : t.per_message) {
    per[m] = Json{{"threshold", detail::str(th.threshold)}, {"binding", th.binding.label()}};
  }
  return Json{{"per_message", per},
              {"uncapped", detail::str(t.uncapped)},
              {"admissible_bound", detail::str(t.admissible_bound)},
              {"overall", detail::str(t.overall)}};
}

inline Json bound_to_json(const PartitionalOptimum& opt, const MechanismBound& b) {
  Json cells = Json::array();
  for (auto c : opt.cells) cells.push_back(c.label());
  return Json{{"v_star", detail::str(b.v_star)},
              {"partition", cells},
              {"v_bar", detail::str(b.v_bar)},
              {"p_min", detail::str(b.p_min)},
              {"k_min", b.k_min + 1},
              {"bound", detail::str(b.bound)}};
}

}  // namespace vetotalk::io
