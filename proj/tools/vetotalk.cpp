// vetotalk: command-line front end.
//
//   vetotalk structure <game.json>
//   vetotalk solve     <game.json> [--method M] [--grid-resolution N]
//   vetotalk check     <game.json> <profile.json> [--v0 R] [--strict-v0]
//   vetotalk threshold <game.json> <profile.json>
//   vetotalk bound     <game.json>
//
// Every command accepts --out <path> for the JSON result file.
// Exit status: 0 success, 1 usage/parse/validation error, 2 unresolved.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vetotalk/vetotalk.hpp"

namespace {

using vetotalk::io::Json;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitUnresolved = 2;

struct Output {
  Json json;
  int status = kExitOk;
};

void write_out(const std::string& path, const Json& j) {
  if (path.empty()) return;
  std::ofstream out(path);
  if (!out) throw vetotalk::Error(vetotalk::ErrorCode::kValidation, "cannot write " + path);
  out << j.dump(2) << "\n";
}

Json header(const std::string& command, const std::vector<std::string>& args, const vetotalk::GameSpec& g) {
  Json echo = Json::array();
  echo.push_back(command);
  for (const auto& a : args) echo.push_back(a);
  return Json{{"command", echo}, {"game_digest", vetotalk::io::game_digest(g)}};
}

void print_report(const vetotalk::CheckReport& r) {
  std::cout << "  no exit:            " << (r.no_exit ? "yes" : "no") << "\n";
  for (const auto& e : r.exit_violations) std::cout << "    type " << e.type + 1 << " exits at " << e.message << "\n";
  std::cout << "  receiver optimal:   " << (r.constrained_opt ? "yes" : "no") << "\n";
  for (const auto& o : r.optimality) {
    if (o.ok) continue;
    std::cout << "    " << o.message << ": achieved " << o.achieved
              << ", optimum " << (o.optimum ? o.optimum->str() : std::string("none")) << "\n";
  }
  std::cout << "  incentive:          " << (r.incentive ? "yes" : "no") << "\n";
  for (const auto& v : r.incentive_violations) {
    std::cout << "    type " << v.type + 1 << " prefers " << v.deviation << " over " << v.sent << " by " << v.gap << "\n";
  }
  if (r.v0) std::cout << "  exit types:         " << r.exit_types.label() << "\n";
  std::cout << "  sender payoffs:     " << vetotalk::to_string(r.interim_sender_payoffs) << "\n";
  std::cout << "  receiver ex ante:   " << r.receiver_ex_ante << "\n";
  std::cout << "  overall:            " << (r.overall ? "equilibrium" : "not an equilibrium") << "\n";
}

void print_equilibrium(const vetotalk::GameSpec& g, const vetotalk::Equilibrium& eq) {
  std::cout << equilibrium_kind_name(eq.kind) << " equilibrium (" << eq.method << ")\n";
  if (eq.pivot) std::cout << "  mixing type: " << *eq.pivot + 1 << "\n";
  if (eq.sigma && eq.tau) {
    for (std::size_t k = 0; k < g.num_types(); ++k) {
      std::cout << "  sigma(.|" << k + 1 << ") = " << vetotalk::to_string(eq.sigma->rows()[k]) << "\n";
    }
    for (const auto& post : posteriors(g, *eq.sigma).entries) {
      std::cout << "  " << post.message << ": mass " << post.mass << ", belief " << vetotalk::to_string(post.belief)
                << ", proposal " << vetotalk::to_string(eq.tau->at(post.message)) << "\n";
    }
  }
  if (eq.mechanism) {
    for (std::size_t k = 0; k < g.num_types(); ++k) {
      std::cout << "  report " << k + 1 << ":";
      for (const auto& o : eq.mechanism->lottery(k)) std::cout << " " << o.probability << "@" << vetotalk::to_string(o.decision);
      std::cout << "\n";
    }
  }
  print_report(eq.report);
}

Output cmd_structure(const std::string& game_path) {
  auto g = vetotalk::io::load_game(game_path);
  auto ps = vetotalk::participation_structure(g);
  std::cout << "maximal acceptable sets:";
  for (auto s : ps.maximal) std::cout << " " << s.label();
  std::cout << "\nclassification: " << structure_class_name(ps.classification);
  if (ps.pivot) std::cout << " (pivot " << *ps.pivot + 1 << ")";
  std::cout << "\n";
  Json j = header("structure", {game_path}, g);
  j["structure"] = vetotalk::io::structure_to_json(g, ps);
  return {j, kExitOk};
}

Output cmd_solve(const std::string& game_path, const std::string& method, int resolution) {
  auto g = vetotalk::io::load_game(game_path);
  auto m = vetotalk::parse_method(method);
  if (!m) throw vetotalk::Error(vetotalk::ErrorCode::kValidation, "unknown method '" + method + "'");
  vetotalk::SolveResult result = vetotalk::solve(g, {*m, resolution});

  Json j = header("solve", {game_path, "--method", method, "--grid-resolution", std::to_string(resolution)}, g);
  Json attempts = Json::array();
  for (const auto& a : result.attempts) attempts.push_back(Json{{"method", a.method}, {"outcome", a.outcome}});
  j["attempts"] = attempts;
  for (const auto& a : result.attempts) std::cout << "  " << a.method << ": " << a.outcome << "\n";
  if (!result.resolved()) {
    j["outcome"] = method == "grid" ? "NotFound" : "Unresolved";
    std::cout << j["outcome"].get<std::string>() << "\n";
    return {j, kExitUnresolved};
  }
  j["outcome"] = "Equilibrium";
  const Json eq = vetotalk::io::equilibrium_to_json(g, *result.equilibrium);
  for (const auto& [key, value] : eq.items()) j[key] = value;
  print_equilibrium(g, *result.equilibrium);
  return {j, kExitOk};
}

Output cmd_check(const std::string& game_path, const std::string& profile_path, const std::string& v0_text,
                 bool strict) {
  auto g = vetotalk::io::load_game(game_path);
  auto profile = vetotalk::io::load_profile(profile_path);
  std::vector<std::string> args{game_path, profile_path};
  vetotalk::CheckReport report;
  if (v0_text.empty()) {
    report = vetotalk::check_limit_equilibrium(g, profile.sigma, profile.tau);
  } else {
    args.insert(args.end(), {"--v0", v0_text});
    if (strict) args.push_back("--strict-v0");
    auto policy = strict ? vetotalk::V0Policy::kStrict : vetotalk::V0Policy::kLenient;
    report = vetotalk::check_v0_equilibrium(g, vetotalk::parse_rational(v0_text), profile.sigma, profile.tau, policy);
    if (!report.v0_admissible) {
      std::cout << "  note: v0 exceeds min_k min_X V^k = " << vetotalk::admissible_v0_bound(g) << "\n";
    }
  }
  print_report(report);
  Json j = header("check", args, g);
  j["profile"] = vetotalk::io::profile_to_json(profile.sigma, profile.tau);
  j["posteriors"] = vetotalk::io::posteriors_to_json(g, profile.sigma);
  j["check"] = vetotalk::io::report_to_json(report);
  return {j, kExitOk};
}

Output cmd_threshold(const std::string& game_path, const std::string& profile_path) {
  auto g = vetotalk::io::load_game(game_path);
  auto profile = vetotalk::io::load_profile(profile_path);
  auto t = vetotalk::exit_threshold(g, profile.sigma, profile.tau);
  for (const auto& [m, th] : t.per_message) {
    std::cout << "  " << m << ": v0 <= " << th.threshold << " (participating " << th.binding.label() << ")\n";
  }
  std::cout << "  min over messages:  " << t.uncapped << "\n";
  std::cout << "  admissible bound:   " << t.admissible_bound << "\n";
  std::cout << "  overall:            " << t.overall << "\n";
  Json j = header("threshold", {game_path, profile_path}, g);
  j["threshold"] = vetotalk::io::threshold_to_json(t);
  return {j, kExitOk};
}

Output cmd_bound(const std::string& game_path) {
  auto g = vetotalk::io::load_game(game_path);
  auto opt = vetotalk::best_partitional_value(g);
  auto b = vetotalk::mechanism_bound(g, opt.value);
  std::cout << "  best partitional value: " << b.v_star << " at";
  for (auto c : opt.cells) std::cout << " " << c.label();
  std::cout << "\n  v_bar: " << b.v_bar << "\n  smallest prior: " << b.p_min << " (type " << b.k_min + 1 << ")\n";
  std::cout << "  bound: " << b.bound << "\n";
  Json j = header("bound", {game_path}, g);
  j["bound"] = vetotalk::io::bound_to_json(opt, b);
  return {j, kExitOk};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact solver for cheap talk games with a sender veto"};
  app.require_subcommand(1);
  std::string game, profile, out, method = "auto", v0;
  int resolution = 60;
  bool strict = false;

  auto* structure = app.add_subcommand("structure", "maximal acceptable type sets");
  structure->add_option("game", game, "game file")->required();
  structure->add_option("--out", out, "result file");

  auto* solve = app.add_subcommand("solve", "construct an equilibrium");
  solve->add_option("game", game, "game file")->required();
  solve->add_option("--method", method, "auto|nonrevealing|two-type|partition|monotone|thm8|mixed3|mediated3|grid")
      ->check(CLI::IsMember({"auto", "nonrevealing", "two-type", "partition", "monotone", "thm8", "leader-follower",
                             "mixed3", "mediated3", "grid"}));
  solve->add_option("--grid-resolution", resolution, "grid step denominator")->check(CLI::PositiveNumber);
  solve->add_option("--out", out, "result file");

  auto* check = app.add_subcommand("check", "verify a strategy profile");
  check->add_option("game", game, "game file")->required();
  check->add_option("profile", profile, "profile or result file")->required();
  check->add_option("--v0", v0, "receiver payoff on exit, as a rational");
  check->add_flag("--strict-v0", strict, "reject v0 above min_k min_X V^k");
  check->add_option("--out", out, "result file");

  auto* threshold = app.add_subcommand("threshold", "largest exit payoff keeping a profile an equilibrium");
  threshold->add_option("game", game, "game file")->required();
  threshold->add_option("profile", profile, "profile or result file")->required();
  threshold->add_option("--out", out, "result file");

  auto* bound = app.add_subcommand("bound", "best partitional value and exit payoff bound");
  bound->add_option("game", game, "game file")->required();
  bound->add_option("--out", out, "result file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitError;
  }

  try {
    Output result;
    if (*structure) result = cmd_structure(game);
    else if (*solve) result = cmd_solve(game, method, resolution);
    else if (*check) result = cmd_check(game, profile, v0, strict);
    else if (*threshold) result = cmd_threshold(game, profile);
    else result = cmd_bound(game);
    write_out(out, result.json);
    return result.status;
  } catch (const vetotalk::Error& e) {
    std::cerr << e.what() << "\n";
    return kExitError;
  }
}
