// refinery: exact equilibrium-refinement solvers for potential games.
//
// Subcommands: gen, solve, trace, verify, sweep. Exit codes: 0 converged,
// 2 validation failure, 3 step cap hit.

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "refinery/br_dynamics.h"
#include "refinery/game_file.h"
#include "refinery/oracles.h"
#include "refinery/rng.h"

namespace {

using namespace refinery;

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitValidation = 2;
constexpr int kExitStepCap = 3;

std::vector<int> parse_int_csv(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(std::stoi(item));
  return out;
}

Json box_profile_json(const EpsPureProfile& p) {
  Json j;
  j["scheme"] = "perfect-box";
  j["favored"] = p.favored;
  return j;
}

Json perm_profile_json(const EpsPureProfile& p) {
  Json j;
  j["scheme"] = "proper-permutahedron";
  j["permutations"] = p.perm;
  Json fav = Json::array();
  for (std::size_t i = 0; i < p.perm.size(); ++i)
    fav.push_back(p.favored_action(static_cast<int>(i)));
  j["favored"] = std::move(fav);
  return j;
}

Json eps_profile_json(const std::vector<std::vector<EpsPoly>>& x) {
  Json players = Json::array();
  for (const auto& xs : x) {
    Json row = Json::array();
    for (const EpsPoly& q : xs) row.push_back(q.str());
    players.push_back(std::move(row));
  }
  return players;
}

struct ReportBuilder {
  Json j;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

  ReportBuilder(const std::string& command, const std::string& game_path,
                const std::string& refinement) {
    j["command"] = command;
    j["game_digest"] = file_digest(game_path);
    j["refinement"] = refinement;
  }
  void emit(std::ostream& os) {
    auto dt = std::chrono::steady_clock::now() - t0;
    j["wall_time_ms"] =
        std::chrono::duration_cast<std::chrono::milliseconds>(dt).count();
    os << j.dump(2) << "\n";
  }
};

void write_trace_jsonl(const std::vector<TraceStep>& trace, std::ostream& out) {
  for (const auto& s : trace) {
    Json j;
    j["player"] = s.player;
    j["old"] = s.old_ranks;
    j["new"] = s.new_ranks;
    j["potential"] = s.potential.str();
    out << j.dump() << "\n";
  }
}

int cmd_gen(const std::string& kind, int n, long seed, int vertices,
            const std::string& weights_csv, long capacity,
            const std::string& out_path, bool with_reference) {
  GenSpec spec;
  if (kind == "fig1") spec = GenSpec::simple(GenSpec::Kind::Fig1);
  else if (kind == "fig2-myerson") spec = GenSpec::simple(GenSpec::Kind::Fig2Myerson);
  else if (kind == "fig3-maxpayoff") spec = GenSpec::simple(GenSpec::Kind::Fig3MaxPayoff);
  else if (kind == "fig4-random-gd") spec = GenSpec::simple(GenSpec::Kind::Fig4RandomGD);
  else if (kind == "fig6-symbolic-gd") spec = GenSpec::simple(GenSpec::Kind::Fig6SymbolicGD);
  else if (kind == "mp-christmas") spec = GenSpec::simple(GenSpec::Kind::MPChristmas);
  else if (kind == "double-exp") spec = GenSpec::double_exp(n);
  else if (kind == "double-exp-3p") spec = GenSpec::double_exp_3p(n);
  else if (kind == "maxcut-triplet" || kind == "maxcut-escape") {
    // Random connected weighted graph from the seed.
    Rng rng(static_cast<std::uint64_t>(seed));
    WeightedGraph g;
    g.num_vertices = vertices;
    for (int v = 1; v < vertices; ++v)
      g.edges.emplace_back(static_cast<int>(rng.below(v)), v, rng.range(1, 8));
    for (int u = 0; u < vertices; ++u)
      for (int v = u + 1; v < vertices; ++v)
        if (rng.below(3) == 0) {
          bool dup = false;
          for (auto& [a, b, w] : g.edges)
            if ((a == u && b == v) || (a == v && b == u)) dup = true;
          if (!dup) g.edges.emplace_back(u, v, rng.range(1, 8));
        }
    spec = kind == "maxcut-triplet" ? GenSpec::maxcut_triplet(g)
                                    : GenSpec::maxcut_escape(g);
  } else if (kind == "knapsack-hypercube") {
    std::vector<long> w;
    for (int v : parse_int_csv(weights_csv)) w.push_back(v);
    spec = GenSpec::knapsack(w, capacity);
  } else {
    std::cerr << "unknown kind '" << kind << "'\n";
    return kExitValidation;
  }
  GeneratedGame game = generate(spec);
  if (spec.kind == GenSpec::Kind::KnapsackHypercube) {
    Json j;
    j["kind"] = "knapsack_demo";
    Json u = Json::array();
    for (const Rat& r : game.knapsack->u) u.push_back(r.str());
    j["utility"] = std::move(u);
    j["count"] = game.knapsack->count;
    std::ofstream(out_path) << j.dump(2) << "\n";
    return kExitOk;
  }
  GameFile f = from_generated(game);
  write_game_file(f, out_path);
  if (with_reference) {
    Json ref = reference_to_json(reference_solutions(spec));
    std::ofstream(out_path + ".ref.json") << ref.dump(2) << "\n";
  }
  return kExitOk;
}

int solve_normal_form(const GameFile& f, const std::string& game_path,
                      const std::string& refinement, long max_steps,
                      const std::string& order_csv, const std::string& start_csv,
                      const std::string& trace_out, bool emit_trace) {
  if (refinement != "perfect" && refinement != "proper") {
    std::cerr << "solve: refinement '" << refinement
              << "' is incompatible with normal-form games\n";
    return kExitValidation;
  }
  ConcisePotentialGame g = f.concise();
  DynamicsConfig cfg;
  cfg.scheme = refinement == "proper" ? PerturbScheme::ProperPermutahedron
                                      : PerturbScheme::PerfectBox;
  if (!order_csv.empty()) cfg.player_order = parse_int_csv(order_csv);
  if (max_steps >= 0) cfg.max_steps = max_steps;
  cfg.trace = emit_trace || !trace_out.empty();
  EpsPureProfile start = EpsPureProfile::canonical(cfg.scheme, g.actions());
  if (!start_csv.empty()) {
    std::vector<int> favored = parse_int_csv(start_csv);
    if (cfg.scheme == PerturbScheme::PerfectBox) {
      start = EpsPureProfile::box(favored);
    } else {
      // Favored actions seed rank-0; remaining ranks by action index.
      std::vector<std::vector<int>> perms;
      for (std::size_t i = 0; i < favored.size(); ++i) {
        int m = g.actions()[i];
        std::vector<int> perm(m);
        int rank = 1;
        for (int a = 0; a < m; ++a) perm[a] = a == favored[i] ? 0 : rank++;
        perms.push_back(std::move(perm));
      }
      start = EpsPureProfile::permutahedron(perms);
    }
  }
  ReportBuilder report("solve", game_path, refinement);
  DynamicsResult res = run_dynamics(g, start, cfg);
  report.j["result"] = cfg.scheme == PerturbScheme::PerfectBox
                           ? box_profile_json(res.final)
                           : perm_profile_json(res.final);
  report.j["steps"] = res.steps;
  report.j["sweeps"] = res.sweeps;
  report.j["terminated"] =
      res.terminated == Termination::Converged ? "converged" : "step-cap";
  report.j["potential"] =
      perturbed_potential(g, res.final, cfg.scheme).str();
  if (!trace_out.empty()) {
    std::ofstream out(trace_out);
    write_trace_jsonl(res.trace, out);
    report.j["trace_ref"] = trace_out;
  } else if (emit_trace) {
    write_trace_jsonl(res.trace, std::cout);
  }
  report.emit(std::cout);
  return res.terminated == Termination::Converged ? kExitOk : kExitStepCap;
}

int solve_efg(const GameFile& f, const std::string& game_path,
              const std::string& refinement, long max_steps,
              const std::string& order_csv) {
  if (refinement != "efpe" && refinement != "nf-proper") {
    std::cerr << "solve: refinement '" << refinement
              << "' is incompatible with extensive-form games\n";
    return kExitValidation;
  }
  EfgDynamicsConfig cfg;
  cfg.scheme = refinement == "efpe" ? EfgScheme::Efpe : EfgScheme::NfProper;
  if (!order_csv.empty()) cfg.player_order = parse_int_csv(order_csv);
  if (max_steps >= 0) cfg.max_steps = max_steps;
  ReportBuilder report("solve", game_path, refinement);
  EfgDynamicsResult res = run_efg_dynamics(*f.efg, cfg);
  report.j["result"] = eps_profile_json(res.profile);
  report.j["steps"] = res.steps;
  report.j["sweeps"] = res.sweeps;
  report.j["terminated"] = res.converged ? "converged" : "step-cap";
  report.emit(std::cout);
  return res.converged ? kExitOk : kExitStepCap;
}

int solve_matroid(const GameFile& f, const std::string& game_path) {
  ReportBuilder report("solve", game_path, "perfect");
  MatroidDynamicsResult res = run_matroid_dynamics(*f.matroid);
  Json bases = Json::array();
  for (const auto& b : res.profile) bases.push_back(b);
  report.j["result"] = Json{{"bases", bases}};
  report.j["steps"] = res.steps;
  report.j["potential"] = matroid_potential(*f.matroid, res.profile).str();
  report.emit(std::cout);
  return kExitOk;
}

int solve_network_game(const GameFile& f, const std::string& game_path) {
  ReportBuilder report("solve", game_path, "perfect");
  NetworkSolveResult res = solve_network(*f.network);
  Json paths = Json::array();
  for (const auto& p : res.paths) paths.push_back(p);
  report.j["result"] = Json{{"paths", paths}};
  report.j["potential"] = res.potential.str();
  report.emit(std::cout);
  return kExitOk;
}

int solve_polymatrix(const GameFile& f, const std::string& game_path,
                     const std::string& eps_str, const std::string& eta_str,
                     long iters) {
  const PolymatrixGame& g = *f.polymatrix;
  Rat eps = eps_str.empty() ? Rat::pow2(-40) : Rat::parse(eps_str);
  Rat eta = eta_str.empty() ? Rat(1) / g.smoothness_bound() : Rat::parse(eta_str);
  std::vector<std::vector<Rat>> start;
  for (int m : g.actions)
    start.push_back(std::vector<Rat>(m, Rat(1, m)));
  ReportBuilder report("solve", game_path, "perfect");
  GdState res = run_gd(g, start, eps, eta, iters);
  Json x = Json::array();
  for (const auto& xi : res.x) {
    Json row = Json::array();
    for (const Rat& v : xi) row.push_back(v.str());
    x.push_back(std::move(row));
  }
  report.j["result"] = Json{{"strategies", x}};
  report.j["iters"] = res.iters;
  report.j["gap"] = res.gap.str();
  report.j["eps"] = eps.str();
  report.j["eta"] = eta.str();
  report.emit(std::cout);
  return kExitOk;
}

int cmd_verify(const std::string& game_path, const std::string& profile_path,
               const std::string& refinement, const std::string& eps_str) {
  GameFile f = parse_game_file(game_path);
  ProfileFile p = parse_profile_file(profile_path);
  TableGame table;
  if (f.table) {
    table = *f.table;
  } else if (f.potential_circuit) {
    table = materialize_table(f.concise(), enumeration_cap());
  } else {
    std::cerr << "verify: normal-form games only\n";
    return kExitValidation;
  }
  NumericProfile np{p.strategies, eps_str.empty() ? p.eps : Rat::parse(eps_str)};
  CheckResult res = refinement == "eps-proper" ? check_eps_proper(table, np)
                                               : check_eps_perfect(table, np);
  Json j;
  j["command"] = "verify";
  j["game_digest"] = file_digest(game_path);
  j["refinement"] = refinement;
  j["eps"] = res.eps_used.str();
  j["pass"] = res.pass;
  if (!res.pass) {
    j["witness"] = Json{{"player", res.player},
                        {"action", res.action},
                        {"better", res.better}};
  }
  std::cout << j.dump(2) << "\n";
  return kExitOk;
}

int cmd_sweep(const std::string& game_path, const std::string& eps_str, int grid,
              long iters, const std::string& out_csv) {
  GameFile f = parse_game_file(game_path);
  if (!f.polymatrix) {
    std::cerr << "sweep: polymatrix games only\n";
    return kExitValidation;
  }
  const PolymatrixGame& g = *f.polymatrix;
  for (int m : g.actions)
    if (m != 2) {
      std::cerr << "sweep: 2-action players only\n";
      return kExitValidation;
    }
  Rat eps = eps_str.empty() ? Rat(0) : Rat::parse(eps_str);
  Rat eta = Rat(1) / g.smoothness_bound();
  std::ofstream csv(out_csv);
  csv << "start_index";
  for (int i = 0; i < g.n; ++i) csv << ",x" << i << "_start,x" << i << "_final";
  csv << ",potential,welfare,gap\n";
  int idx = 0;
  for (int gi = 0; gi < grid; ++gi)
    for (int gj = 0; gj < grid; ++gj) {
      Rat a = (Rat(2 * gi + 1)) / Rat(2 * grid);
      Rat b = (Rat(2 * gj + 1)) / Rat(2 * grid);
      std::vector<std::vector<Rat>> start{{a, Rat(1) - a}, {b, Rat(1) - b}};
      GdState res = run_gd(g, start, eps, eta, iters);
      Rat welfare(0);
      for (int i = 0; i < g.n; ++i) welfare += g.utility(i, res.x);
      csv << idx++;
      for (int i = 0; i < g.n; ++i)
        csv << "," << start[i][0].to_double() << "," << res.x[i][0].to_double();
      csv << "," << g.potential_value(res.x).to_double() << ","
          << welfare.to_double() << "," << res.gap.to_double() << "\n";
    }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact equilibrium refinements for potential games"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a bundled game");
  std::string gen_kind, gen_out = "game.json", gen_weights;
  int gen_n = 1, gen_vertices = 4;
  long gen_seed = 1, gen_capacity = 0;
  bool gen_ref = false;
  gen->add_option("--kind", gen_kind,
                  "fig1|fig2-myerson|fig3-maxpayoff|fig4-random-gd|"
                  "fig6-symbolic-gd|mp-christmas|double-exp|double-exp-3p|"
                  "maxcut-triplet|maxcut-escape|knapsack-hypercube")
      ->required();
  gen->add_option("--n", gen_n, "size parameter for double-exp kinds");
  gen->add_option("--seed", gen_seed, "random seed for maxcut kinds");
  gen->add_option("--vertices", gen_vertices, "vertex count for maxcut kinds");
  gen->add_option("--weights", gen_weights, "knapsack weights, comma separated");
  gen->add_option("--capacity", gen_capacity, "knapsack capacity");
  gen->add_option("-o,--out", gen_out, "output path");
  gen->add_flag("--with-reference", gen_ref, "write reference sidecar JSON");

  // solve / trace
  std::string solve_game, solve_refinement = "perfect", solve_order, solve_start;
  std::string solve_trace_out, solve_eps, solve_eta;
  long solve_max_steps = -1, solve_iters = 2000;
  auto add_solve_opts = [&](CLI::App* cmd) {
    cmd->add_option("--game", solve_game)->required();
    cmd->add_option("--refinement", solve_refinement,
                    "perfect|proper|efpe|nf-proper");
    cmd->add_option("--max-steps", solve_max_steps);
    cmd->add_option("--order", solve_order, "player order, comma separated");
    cmd->add_option("--start", solve_start, "start favored actions, comma separated");
    cmd->add_option("--trace-out", solve_trace_out, "JSON-lines trace path");
    cmd->add_option("--eps", solve_eps, "numeric eps (polymatrix)");
    cmd->add_option("--eta", solve_eta, "step size (polymatrix)");
    cmd->add_option("--iters", solve_iters, "iterations (polymatrix)");
  };
  auto* solve = app.add_subcommand("solve", "Solve a game file");
  add_solve_opts(solve);
  auto* trace = app.add_subcommand("trace", "Solve and emit the improvement trace");
  add_solve_opts(trace);

  // verify
  auto* verify = app.add_subcommand("verify", "Check a numeric profile");
  std::string verify_game, verify_profile, verify_refinement = "eps-perfect",
              verify_eps;
  verify->add_option("--game", verify_game)->required();
  verify->add_option("--profile", verify_profile)->required();
  verify->add_option("--refinement", verify_refinement, "eps-perfect|eps-proper");
  verify->add_option("--eps", verify_eps);

  // sweep
  auto* sweep = app.add_subcommand("sweep", "Multi-start gradient descent grid");
  std::string sweep_game, sweep_eps, sweep_out = "sweep.csv";
  int sweep_grid = 10;
  long sweep_iters = 4000;
  sweep->add_option("--game", sweep_game)->required();
  sweep->add_option("--eps", sweep_eps, "perturbation (omit for vanilla)");
  sweep->add_option("--grid", sweep_grid);
  sweep->add_option("--iters", sweep_iters);
  sweep->add_option("--out", sweep_out);

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed())
      return cmd_gen(gen_kind, gen_n, gen_seed, gen_vertices, gen_weights,
                     gen_capacity, gen_out, gen_ref);
    if (solve->parsed() || trace->parsed()) {
      GameFile f = parse_game_file(solve_game);
      bool emit_trace = trace->parsed();
      if (f.table || f.potential_circuit)
        return solve_normal_form(f, solve_game, solve_refinement, solve_max_steps,
                                 solve_order, solve_start, solve_trace_out,
                                 emit_trace);
      if (f.efg)
        return solve_efg(f, solve_game, solve_refinement, solve_max_steps,
                         solve_order);
      if (f.matroid || f.network || f.polymatrix) {
        if (solve_refinement != "perfect") {
          std::cerr << "solve: only the perfect refinement applies to this kind\n";
          return kExitValidation;
        }
        if (f.matroid) return solve_matroid(f, solve_game);
        if (f.network) return solve_network_game(f, solve_game);
        return solve_polymatrix(f, solve_game, solve_eps, solve_eta, solve_iters);
      }
      std::cerr << "solve: refinement/kind pairing not supported\n";
      return kExitValidation;
    }
    if (verify->parsed())
      return cmd_verify(verify_game, verify_profile, verify_refinement, verify_eps);
    if (sweep->parsed())
      return cmd_sweep(sweep_game, sweep_eps, sweep_grid, sweep_iters, sweep_out);
  } catch (const SchemaError& e) {
    std::cerr << "schema error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
