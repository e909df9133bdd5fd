#include <doctest.h>

#include "refinery/congestion.h"
#include "refinery/rng.h"
#include "refinery/strongpoly.h"

using namespace refinery;

namespace {

// Bellman-Ford on a fixed arc list; inputs are the arc costs. All
// comparisons go through the context so the branch log captures the piece.
ArithmeticProgram bellman_ford_program(int num_nodes,
                                       std::vector<std::pair<int, int>> arcs,
                                       int source, int sink) {
  ArithmeticProgram prog;
  prog.num_inputs = static_cast<int>(arcs.size());
  prog.num_outputs = 1;
  prog.body = [num_nodes, arcs, source, sink](ProgramContext& ctx) {
    const Rat inf(1000000000L);
    std::vector<Rat> dist(num_nodes, inf);
    dist[source] = Rat(0);
    for (int round = 0; round + 1 < num_nodes; ++round)
      for (std::size_t a = 0; a < arcs.size(); ++a) {
        Rat cand = dist[arcs[a].first] + ctx.in(a);
        if (ctx.less(cand, dist[arcs[a].second])) dist[arcs[a].second] = cand;
      }
    return std::vector<Rat>{dist[sink]};
  };
  return prog;
}

}  // namespace

TEST_CASE("a single comparison program picks the larger branch") {
  ArithmeticProgram prog;
  prog.num_inputs = 2;
  prog.num_outputs = 1;
  prog.body = [](ProgramContext& ctx) {
    return std::vector<Rat>{ctx.less(ctx.in(0), ctx.in(1)) ? ctx.in(1) : ctx.in(0)};
  };
  std::vector<EpsPoly> in{EpsPoly::from_coeffs({Rat(1), Rat(1)}),
                          EpsPoly::from_coeffs({Rat(1), Rat(2)})};
  SymbolicRun run = run_symbolic(prog, in, 2);
  CHECK(run.signature == std::vector<bool>{true});  // the b branch
  CHECK(run.outputs[0].same_function(
      EpsRational{EpsPoly::from_coeffs({Rat(1), Rat(2)}), EpsPoly(Rat(1))}));
}

TEST_CASE("division yields a genuine rational function of eps") {
  ArithmeticProgram prog;
  prog.num_inputs = 3;
  prog.num_outputs = 1;
  prog.body = [](ProgramContext& ctx) {
    return std::vector<Rat>{ctx.in(0) / (ctx.in(1) + ctx.in(2))};
  };
  std::vector<EpsPoly> in{EpsPoly(Rat(1)), EpsPoly::eps(), EpsPoly(Rat(1))};
  SymbolicRun run = run_symbolic(prog, in, 2);
  CHECK(run.outputs[0].same_function(
      EpsRational{EpsPoly(Rat(1)), EpsPoly::from_coeffs({Rat(1), Rat(1)})}));
}

TEST_CASE("interpolated outputs reproduce every sample run") {
  // Indirect: run_symbolic already asserts this; exercise a branchy program.
  ArithmeticProgram prog;
  prog.num_inputs = 2;
  prog.num_outputs = 2;
  prog.body = [](ProgramContext& ctx) {
    Rat lo = ctx.in(0), hi = ctx.in(1);
    if (ctx.less(hi, lo)) std::swap(lo, hi);
    return std::vector<Rat>{lo * hi, hi - lo};
  };
  std::vector<EpsPoly> in{EpsPoly::from_coeffs({Rat(2), Rat(-1)}),
                          EpsPoly::from_coeffs({Rat(2), Rat(3)})};
  SymbolicRun run = run_symbolic(prog, in, 4);
  CHECK(run.outputs[0].same_function(
      EpsRational{in[0] * in[1], EpsPoly(Rat(1))}));
  CHECK(run.outputs[1].same_function(
      EpsRational{in[1] - in[0], EpsPoly(Rat(1))}));
}

TEST_CASE("signature stability under a finer sample scale") {
  ArithmeticProgram prog;
  prog.num_inputs = 2;
  prog.num_outputs = 1;
  prog.body = [](ProgramContext& ctx) {
    return std::vector<Rat>{ctx.less(ctx.in(0), ctx.in(1)) ? ctx.in(1) : ctx.in(0)};
  };
  // Order decided only at second order: 1 + e^2 vs 1 + 2e^2.
  std::vector<EpsPoly> in{EpsPoly::from_coeffs({Rat(1), Rat(0), Rat(1)}),
                          EpsPoly::from_coeffs({Rat(1), Rat(0), Rat(2)})};
  SymbolicRun a = run_symbolic(prog, in, 4);
  SymbolicRun b = run_symbolic(prog, in, 4, a.scale / Rat(8));
  CHECK(a.signature == b.signature);
  CHECK(a.outputs[0].same_function(b.outputs[0]));
}

TEST_CASE("Bellman-Ford runs symbolically and matches the lex shortest path") {
  Rng rng(111);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 4;
    std::vector<std::pair<int, int>> arcs{{0, 1}, {0, 2}, {1, 2}, {1, 3}, {2, 3}};
    std::vector<EpsPoly> costs;
    for (std::size_t a = 0; a < arcs.size(); ++a)
      costs.push_back(EpsPoly::from_coeffs(
          {Rat(rng.range(1, 9)), Rat(rng.range(-3, 3)), Rat(rng.range(-2, 2))}));
    ArithmeticProgram prog = bellman_ford_program(n, arcs, 0, 3);
    // Output degree bound: sums of <= 3 inputs of degree 2.
    SymbolicRun run = run_symbolic(prog, costs, 8);

    std::vector<std::tuple<int, int, EpsPoly>> sym_arcs;
    for (std::size_t a = 0; a < arcs.size(); ++a)
      sym_arcs.emplace_back(arcs[a].first, arcs[a].second, costs[a]);
    auto [path, dist] = symbolic_shortest_path(n, sym_arcs, 0, 3);
    CHECK(run.outputs[0].same_function(EpsRational{dist, EpsPoly(Rat(1))}));
  }
}

TEST_CASE("diverging branch logs trigger the halving retry") {
  ArithmeticProgram prog;
  prog.num_inputs = 2;
  prog.num_outputs = 1;
  prog.body = [](ProgramContext& ctx) {
    return std::vector<Rat>{ctx.less(ctx.in(0), ctx.in(1)) ? ctx.in(1) : ctx.in(0)};
  };
  // 2 - 100e vs 1 + e flips order at e = 1/101. A starting scale of 1/50
  // straddles the flip, so the sampled runs disagree until the scale halves
  // below the piece boundary; near zero the first input stays larger.
  std::vector<EpsPoly> in{EpsPoly::from_coeffs({Rat(2), Rat(-100)}),
                          EpsPoly::from_coeffs({Rat(1), Rat(1)})};
  SymbolicRun run = run_symbolic(prog, in, 2, Rat(1, 50));
  CHECK(run.signature == std::vector<bool>{false});
  CHECK(run.scale < Rat(1, 50));
}
