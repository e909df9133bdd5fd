// Acceptance suite: one deterministic check per shipped guarantee, each
// printed as a pass/fail line with its wall time and compared against a
// fixed time budget. Exits nonzero if any criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <vector>

#include "refinery/br_dynamics.h"
#include "refinery/congestion.h"
#include "refinery/gamegen.h"
#include "refinery/linalg.h"
#include "refinery/oracles.h"
#include "refinery/polymatrix.h"
#include "refinery/rng.h"
#include "refinery/strongpoly.h"
#include "refinery/tree_form.h"

using namespace refinery;

namespace {

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<bool(std::string&)> run;
};

#define REQUIRE_OR_FAIL(cond, msg) \
  do {                             \
    if (!(cond)) {                 \
      why = msg;                   \
      return false;                \
    }                              \
  } while (0)

// ---------------------------------------------------------------- helpers

EpsPoly poly(std::initializer_list<Rat> cs) {
  return EpsPoly::from_coeffs(std::vector<Rat>(cs));
}

WeightedGraph random_graph(Rng& rng, int max_vertices) {
  WeightedGraph g;
  g.num_vertices = static_cast<int>(rng.range(3, max_vertices));
  for (int v = 1; v < g.num_vertices; ++v)
    g.edges.emplace_back(static_cast<int>(rng.below(v)), v, rng.range(1, 6));
  for (int u = 0; u < g.num_vertices; ++u)
    for (int v = u + 1; v < g.num_vertices; ++v) {
      bool present = false;
      for (const auto& [a, b, w] : g.edges)
        if ((a == u && b == v) || (a == v && b == u)) present = true;
      if (!present && rng.below(3) == 0)
        g.edges.emplace_back(u, v, rng.range(1, 6));
    }
  return g;
}

TreeFormDecisionProblem random_tree(Rng& rng, int max_seqs) {
  TfdpBuilder b;
  int seqs = 1;
  std::vector<int> pool{0};
  while (true) {
    int m = static_cast<int>(rng.range(2, 3));
    if (seqs + m > max_seqs) break;
    int parent = pool[rng.below(pool.size())];
    int dp = b.decision_point(parent, m);
    for (int a = 0; a < m; ++a) pool.push_back(b.seq_of(dp, a));
    seqs += m;
    if (rng.below(4) == 0) break;
  }
  TreeFormDecisionProblem t = std::move(b).build();
  if (t.num_decision_points() == 0) {
    TfdpBuilder b2;
    b2.decision_point(0, 2);
    return std::move(b2).build();
  }
  return t;
}

// ------------------------------------------------------------ criterion 1

bool crit1_fig3_potentials(std::string& why) {
  ConcisePotentialGame g =
      *generate(GenSpec::simple(GenSpec::Kind::Fig3MaxPayoff)).concise;
  auto phi = [&](int a, int b) {
    return perturbed_potential(g, EpsPureProfile::box({a, b}),
                               PerturbScheme::PerfectBox);
  };
  REQUIRE_OR_FAIL(phi(0, 0) == poly({Rat(1), Rat(0), Rat(-1)}), "(R1,C1)");
  REQUIRE_OR_FAIL(phi(0, 1) == poly({Rat(1), Rat(-1), Rat(1)}), "(R1,C2)");
  REQUIRE_OR_FAIL(phi(1, 0) == poly({Rat(1), Rat(-1), Rat(1)}), "(R2,C1)");
  REQUIRE_OR_FAIL(phi(1, 1) == poly({Rat(0), Rat(2), Rat(-1)}), "(R2,C2)");
  return true;
}

// ------------------------------------------------------------ criterion 2

bool crit2_refinement_hierarchy(std::string& why) {
  ConcisePotentialGame g =
      *generate(GenSpec::simple(GenSpec::Kind::Fig2Myerson)).concise;
  {
    DynamicsConfig cfg;
    auto res = run_dynamics(g, EpsPureProfile::box({1, 1}), cfg);
    REQUIRE_OR_FAIL(res.steps == 0, "(R2,C2) must be a box fixed point");
  }
  std::vector<int> base{0, 1, 2};
  std::vector<std::vector<int>> all;
  do {
    all.push_back(base);
  } while (std::next_permutation(base.begin(), base.end()));
  int checked = 0;
  for (const auto& p1 : all)
    for (const auto& p2 : all) {
      DynamicsConfig cfg;
      cfg.scheme = PerturbScheme::ProperPermutahedron;
      auto res = run_dynamics(g, EpsPureProfile::permutahedron({p1, p2}), cfg);
      REQUIRE_OR_FAIL(res.terminated == Termination::Converged, "no convergence");
      REQUIRE_OR_FAIL(res.final.favored_action(0) == 0 &&
                          res.final.favored_action(1) == 0,
                      "proper dynamics must reach (R1,C1)");
      ++checked;
    }
  REQUIRE_OR_FAIL(checked == 36, "start enumeration");
  return true;
}

// ------------------------------------------------------------ criterion 3

bool crit3_spanning_sets(std::string& why) {
  Rng rng(303);
  Rat eps_hat = Rat::pow2(-24);
  for (int trial = 0; trial < 200; ++trial) {
    TreeFormDecisionProblem t = random_tree(rng, 12);
    std::vector<Rat> u;
    for (int s = 0; s < t.num_sequences(); ++s) u.push_back(rng.rat(20, 9));
    SpanningSet set = optimal_spanning_set(t, u);
    auto vertices = enumerate_vertices(t);
    auto value = [&](const std::vector<Rat>& x) {
      Rat v(0);
      for (std::size_t i = 0; i < u.size(); ++i) v += u[i] * x[i];
      return v;
    };
    // Exact affine-hull rank test against the weakly better members.
    for (const auto& v : vertices) {
      Rat vv = value(v);
      std::vector<Vec> better;
      for (const auto& m : set.members)
        if (!(value(m) < vv)) better.push_back(m);
      REQUIRE_OR_FAIL(affine_coordinates(better, v).has_value(),
                      "vertex outside affine hull of weakly better members");
    }
    // Dominance certification of the proper best response at 2^-24.
    auto x = proper_best_response(set);
    std::vector<Rat> point;
    for (const EpsPoly& q : x) point.push_back(q.eval(eps_hat));
    auto cert = certify_proper_br(vertices, u, set.members, point, eps_hat);
    REQUIRE_OR_FAIL(cert.pass, "dominance certification failed: " + cert.reason);
  }
  return true;
}

// ------------------------------------------------------------ criterion 4

bool crit4_hypercube_spanning(std::string& why) {
  Rng rng(304);
  for (int d = 1; d <= 10; ++d) {
    for (int rep = 0; rep < 3; ++rep) {
      TreeFormDecisionProblem t = make_hypercube_tfdp(d);
      std::vector<Rat> u(t.num_sequences(), Rat(0));
      for (int j = 0; j < d; ++j) {
        // Distinct magnitudes avoid ties.
        u[1 + 2 * j] = rng.coin() ? Rat(rng.range(1, 90)) + Rat(1, 2 + j)
                                  : -Rat(rng.range(1, 90)) - Rat(1, 2 + j);
        u[2 + 2 * j] = Rat(0);
      }
      SpanningSet s = optimal_spanning_set(t, u);
      REQUIRE_OR_FAIL(s.members.size() == static_cast<std::size_t>(d) + 1,
                      "set size must be d+1");
      for (int j = 0; j < d; ++j) {
        bool up = u[1 + 2 * j] > u[2 + 2 * j];
        REQUIRE_OR_FAIL(s.members[0][1 + 2 * j] == (up ? Rat(1) : Rat(0)),
                        "first member must be the sign optimum");
      }
      for (std::size_t k = 1; k < s.members.size(); ++k) {
        int flips = 0;
        for (int j = 0; j < d; ++j)
          if (s.members[k][1 + 2 * j] != s.members[0][1 + 2 * j]) ++flips;
        REQUIRE_OR_FAIL(flips == 1, "members must be single bit flips");
      }
    }
  }
  return true;
}

// ------------------------------------------------------------ criterion 5

bool crit5_km_knapsack(std::string& why) {
  Rng rng(305);
  for (int trial = 0; trial < 50; ++trial) {
    int d = static_cast<int>(rng.range(2, 12));
    std::vector<long> w;
    long total = 0;
    for (int i = 0; i < d; ++i) {
      w.push_back(rng.range(1, 12));
      total += w.back();
    }
    long cap = rng.range(0, total);
    GeneratedGame g = generate(GenSpec::knapsack(w, cap));
    std::vector<std::vector<Rat>> vertices;
    for (long mask = 0; mask < (1L << (d + 1)); ++mask) {
      std::vector<Rat> v;
      for (int c = 0; c <= d; ++c) v.push_back(Rat(mask >> c & 1));
      vertices.push_back(std::move(v));
    }
    auto km = brute_proper_br(vertices, g.knapsack->u, Rat(1, 1024));
    REQUIRE_OR_FAIL(leading_exponent(km.point[0]) == g.knapsack->count,
                    "leading exponent must equal the knapsack count");
  }
  return true;
}

// ------------------------------------------------------------ criterion 6

bool crit6_matroid_congestion(std::string& why) {
  Rng rng(306);
  Rat eps = Rat::pow2(-24);
  for (int trial = 0; trial < 100; ++trial) {
    int n = static_cast<int>(rng.range(2, 5));
    std::shared_ptr<const Matroid> m;
    switch (rng.below(3)) {
      case 0: {
        int res = static_cast<int>(rng.range(3, 8));
        m = std::make_shared<UniformMatroid>(
            static_cast<int>(rng.range(1, std::min(3, res - 1))), res);
        break;
      }
      case 1: {
        int v = static_cast<int>(rng.range(3, 4));
        std::vector<std::pair<int, int>> edges;
        for (int a = 0; a < v; ++a)
          for (int b = a + 1; b < v; ++b) edges.emplace_back(a, b);
        m = std::make_shared<GraphicMatroid>(v, edges);
        break;
      }
      default: {
        std::vector<std::vector<int>> blocks{{0, 1, 2}, {3, 4}, {5, 6, 7}};
        m = std::make_shared<PartitionMatroid>(blocks, std::vector<int>{1, 1, 2});
        break;
      }
    }
    MatroidCongestionGame g;
    g.n = n;
    g.matroid = m;
    g.delay.assign(m->num_resources(), {});
    for (auto& dr : g.delay) {
      long base = rng.range(1, 8);
      for (int k = 0; k < n; ++k) {
        dr.push_back(Rat(base));
        base += rng.range(0, 3);
      }
    }
    auto bases = enumerate_bases(*m);
    g.basis_count = static_cast<long>(bases.size());
    g.resource_count.assign(m->num_resources(), 0);
    for (const auto& b : bases)
      for (int r : b) ++g.resource_count[r];

    auto res = run_matroid_dynamics(g);
    long bound = static_cast<long>(n) * n * m->num_resources() * m->rank();
    REQUIRE_OR_FAIL(res.steps <= bound, "step bound exceeded");
    for (std::size_t s = 1; s < res.potential_trace.size(); ++s)
      REQUIRE_OR_FAIL(
          lex_less(res.potential_trace[s], res.potential_trace[s - 1]),
          "potential must strictly decrease");
    // Numeric no-deviation check at eps = 2^-24.
    std::vector<int> counts(m->num_resources(), 0);
    for (const auto& b : res.profile)
      for (int r : b) ++counts[r];
    for (int i = 0; i < n; ++i) {
      std::vector<int> others = counts;
      for (int r : res.profile[i]) --others[r];
      auto cost = [&](const std::vector<int>& basis) {
        Rat c(0);
        for (int r : basis) c += perturbed_delay(g, r, others[r] + 1).eval(eps);
        return c;
      };
      Rat cur = cost(res.profile[i]);
      for (const auto& alt : bases)
        REQUIRE_OR_FAIL(cost(alt) >= cur, "profitable numeric deviation found");
    }
  }
  return true;
}

// ------------------------------------------------------------ criterion 7

bool crit7_network_congestion(std::string& why) {
  Rng rng(307);
  for (int trial = 0; trial < 50; ++trial) {
    int nodes = static_cast<int>(rng.range(3, 6));
    int n = static_cast<int>(rng.range(1, 3));
    NetworkCongestionGame g;
    g.num_nodes = nodes;
    g.source = 0;
    g.sink = nodes - 1;
    g.n = n;
    // Random DAG with edges respecting the node order, plus a spine so the
    // sink stays reachable.
    for (int v = 0; v + 1 < nodes; ++v) {
      NetworkCongestionGame::Edge e;
      e.from = v;
      e.to = v + 1;
      long base = rng.range(1, 6);
      for (int k = 0; k < n; ++k) {
        e.delay.push_back(Rat(base));
        base += rng.range(0, 3);
      }
      g.edges.push_back(std::move(e));
    }
    for (int u = 0; u < nodes; ++u)
      for (int v = u + 2; v < nodes; ++v) {
        if (rng.below(2)) continue;
        NetworkCongestionGame::Edge e;
        e.from = u;
        e.to = v;
        long base = rng.range(1, 6);
        for (int k = 0; k < n; ++k) {
          e.delay.push_back(Rat(base));
          base += rng.range(0, 3);
        }
        g.edges.push_back(std::move(e));
      }
    auto res = solve_network(g);
    // Exhaustive minimum over all path profiles.
    NetworkCongestionGame gc = g;
    count_paths_dag(gc);
    std::vector<std::vector<int>> paths;
    std::vector<int> cur;
    auto rec = [&](auto&& self, int v) -> void {
      if (v == g.sink) {
        paths.push_back(cur);
        return;
      }
      for (int e = 0; e < static_cast<int>(g.edges.size()); ++e)
        if (g.edges[e].from == v) {
          cur.push_back(e);
          self(self, g.edges[e].to);
          cur.pop_back();
        }
    };
    rec(rec, 0);
    std::vector<std::size_t> pick(n, 0);
    bool first = true;
    EpsPoly best;
    while (true) {
      std::vector<int> loads(g.edges.size(), 0);
      for (std::size_t i = 0; i < pick.size(); ++i)
        for (int e : paths[pick[i]]) ++loads[e];
      EpsPoly phi;
      for (std::size_t e = 0; e < g.edges.size(); ++e)
        for (int k = 1; k <= loads[e]; ++k)
          phi += network_perturbed_delay(gc, static_cast<int>(e), k);
      if (first || lex_less(phi, best)) {
        best = phi;
        first = false;
      }
      std::size_t i = 0;
      while (i < pick.size() && ++pick[i] == paths.size()) pick[i++] = 0;
      if (i == pick.size()) break;
    }
    REQUIRE_OR_FAIL(res.potential == best,
                    "solver potential must attain the exhaustive minimum");
  }
  return true;
}

// ------------------------------------------------------------ criterion 8

bool crit8_double_exp(std::string& why) {
  for (int n = 1; n <= 4; ++n) {
    GeneratedGame g = generate(GenSpec::double_exp(n));
    const MultilinearCircuit& phi = g.concise->potential();
    Rat eps = Rat::pow2(-(1L << n));
    auto pt = double_exp_point(n, eps);
    const int players = 4 * n + 1;
    std::vector<std::vector<Rat>> x(players);
    for (int p = 0; p < players; ++p) x[p] = {pt[p], Rat(1) - pt[p]};
    // Gradient via circuit probes; the x-block entries are cross-checked
    // against the closed-form derivative of the defining expression.
    std::vector<Rat> grad(players);
    for (int p = 0; p < players; ++p) {
      auto hi = x, lo = x;
      hi[p][0] = Rat(1);
      lo[p][0] = Rat(0);
      grad[p] = phi.eval_rational(hi) - phi.eval_rational(lo);
    }
    {
      const auto& xs = pt;
      auto xpv = [&](int i) { return i == 0 ? Rat(1, 2) : xs[n + i - 1]; };
      Rat t = xs[4 * n];
      for (int i = 1; i <= n; ++i) {
        Rat ci = xs[2 * n + i - 1], di = xs[3 * n + i - 1];
        Rat expect = (t - ci) + (di - Rat(1, 2));
        if (i < n) expect -= (t - xs[2 * n + i]) * xpv(i);
        if (i == n) expect -= Rat(2);
        REQUIRE_OR_FAIL(grad[i - 1] == expect, "x gradient formula mismatch");
      }
    }
    for (int p = 0; p < players; ++p) {
      if (p == n - 1 || p == 2 * n - 1 || p == players - 1) {
        REQUIRE_OR_FAIL(grad[p] < Rat(0), "x_n, x'_n, t need negative gradients");
      } else if (p >= 2 * n && p < 3 * n) {
        REQUIRE_OR_FAIL(grad[p] <= Rat(0), "c gradients must be nonpositive");
      } else {
        REQUIRE_OR_FAIL(grad[p] == Rat(0), "interior gradients must vanish");
      }
    }
    // Every pure profile satisfies the necessary-conditions scan and sits at
    // l-infinity distance >= 1/2 from the reference in the c/d block.
    for (long mask = 0; mask < (1L << players); ++mask) {
      bool necessary = false;
      Rat dist(0);
      for (int i = 0; i < n; ++i) {
        Rat c = Rat(mask >> (2 * n + i) & 1);
        Rat d = Rat(mask >> (3 * n + i) & 1);
        if (c == Rat(1) || d == Rat(0) || d == Rat(1)) necessary = true;
        dist = max(dist, (c - pt[2 * n + i]).abs());
        dist = max(dist, (d - pt[3 * n + i]).abs());
      }
      REQUIRE_OR_FAIL(necessary, "pure profile escaping the necessary scan");
      REQUIRE_OR_FAIL(dist >= Rat(1, 2), "pure profile too close to reference");
    }
  }
  return true;
}

// ------------------------------------------------------------ criterion 9

bool crit9_maxcut_separations(std::string& why) {
  Rng rng(309);
  bool some_bad_plain_fixed_point = false;
  for (int trial = 0; trial < 30; ++trial) {
    WeightedGraph g = random_graph(rng, 6);
    const int nv = g.num_vertices;
    const int players = 3 * nv;

    // Plain fixed points by exhaustive scan over pure profiles.
    std::vector<int> favored(players, 0);
    std::vector<std::vector<int>> plain_fixed;
    for (long mask = 0; mask < (1L << players); ++mask) {
      for (int p = 0; p < players; ++p) favored[p] = mask >> p & 1;
      Rat base = maxcut_triplet_pure_utility(g, favored);
      bool fixed = true;
      for (int p = 0; p < players && fixed; ++p) {
        favored[p] ^= 1;
        if (maxcut_triplet_pure_utility(g, favored) > base) fixed = false;
        favored[p] ^= 1;
      }
      if (fixed) plain_fixed.push_back(favored);
    }
    // Symbolic fixed points are the plain fixed points whose flips also fail
    // lexicographically (a zeroth-order improvement is a fortiori lexicographic).
    std::map<std::vector<int>, EpsPoly> memo;
    auto phi_of = [&](const std::vector<int>& f) -> const EpsPoly& {
      auto it = memo.find(f);
      if (it == memo.end())
        it = memo.emplace(f, maxcut_triplet_perturbed_potential(g, f)).first;
      return it->second;
    };
    int symbolic_count = 0;
    for (auto& prof : plain_fixed) {
      if (!is_flip_local_optimal(g, maxcut_majority_cut(g, prof)))
        some_bad_plain_fixed_point = true;
      bool symbolic_fixed = true;
      const EpsPoly& base = phi_of(prof);
      for (int p = 0; p < players && symbolic_fixed; ++p) {
        auto dev = prof;
        dev[p] ^= 1;
        if (lex_greater(phi_of(dev), base)) symbolic_fixed = false;
      }
      if (symbolic_fixed) {
        ++symbolic_count;
        REQUIRE_OR_FAIL(
            is_flip_local_optimal(g, maxcut_majority_cut(g, prof)),
            "symbolic fixed point mapping to a non-local-optimal cut");
      }
    }
    REQUIRE_OR_FAIL(symbolic_count > 0, "no symbolic fixed point found");
  }
  REQUIRE_OR_FAIL(some_bad_plain_fixed_point,
                  "expected a plain fixed point below local optimality");

  // Escape game: symbolic dynamics reach the escape equilibrium within
  // |V| + 2 sweeps; plain best response never leaves the default actions.
  for (int trial = 0; trial < 5; ++trial) {
    WeightedGraph g = random_graph(rng, 6);
    const int nv = g.num_vertices;
    GeneratedGame gen = generate(GenSpec::maxcut_escape(g));
    const ConcisePotentialGame& cg = *gen.concise;
    std::vector<int> start(nv + 2, 0);
    for (int v = 0; v < nv; ++v) start[v] = static_cast<int>(rng.below(2));

    DynamicsConfig cfg;
    cfg.player_order = gen.recommended_order;
    auto res = run_dynamics(cg, EpsPureProfile::box(start), cfg);
    REQUIRE_OR_FAIL(res.final.favored[nv] == 1 && res.final.favored[nv + 1] == 1,
                    "symbolic dynamics must escape");
    for (int v = 0; v < nv; ++v)
      REQUIRE_OR_FAIL(res.final.favored[v] == 0, "escape profile plays b");
    REQUIRE_OR_FAIL(res.sweeps <= nv + 2, "escape took too many sweeps");

    // Plain best-response loop on pure profiles.
    const std::vector<int> actions(nv + 2, 2);
    auto pure_phi = [&](const std::vector<int>& p) {
      return cg.potential().eval_rational(one_hot_profile(actions, p));
    };
    std::vector<int> prof = start;
    bool escaped = false;
    bool moved = true;
    long steps = 0;
    while (moved && steps < 10000) {
      moved = false;
      for (int p = 0; p < nv + 2 && steps < 10000; ++p) {
        auto dev = prof;
        dev[p] ^= 1;
        ++steps;
        if (pure_phi(dev) > pure_phi(prof)) {
          prof = dev;
          moved = true;
          if (p >= nv && prof[p] == 1) escaped = true;
        }
      }
    }
    REQUIRE_OR_FAIL(!escaped, "plain best response must never play e");
  }
  return true;
}

// ----------------------------------------------------------- criterion 10

bool crit10_symbolic_gd(std::string& why) {
  GeneratedGame fig6 = generate(GenSpec::simple(GenSpec::Kind::Fig6SymbolicGD));
  const PolymatrixGame& g = *fig6.polymatrix;
  std::vector<std::vector<EpsPoly>> x(2);
  for (int i = 0; i < 2; ++i)
    x[i] = {EpsPoly(Rat(1)) - EpsPoly::eps(), EpsPoly::eps()};
  Rat coeff(1);
  for (int t = 1; t <= 30; ++t) {
    x = run_symbolic_gd(g, x, Rat(1), 1).x;
    coeff *= Rat(3, 2);
    for (int i = 0; i < 2; ++i)
      REQUIRE_OR_FAIL(x[i][1] == poly({Rat(0), coeff}),
                      "tremble coefficient must be (3/2)^t exactly");
  }
  return true;
}

// ----------------------------------------------------------- criterion 11

bool crit11_perturbed_gd(std::string& why) {
  GeneratedGame fig4 = generate(GenSpec::simple(GenSpec::Kind::Fig4RandomGD));
  const PolymatrixGame& g = *fig4.polymatrix;
  Rat eta = Rat(1) / g.smoothness_bound();
  const long iters = 9000;
  int vanilla_low_welfare = 0;
  for (int gi = 0; gi < 10; ++gi)
    for (int gj = 0; gj < 10; ++gj) {
      Rat a = Rat(2 * gi + 1, 20), b = Rat(2 * gj + 1, 20);
      std::vector<std::vector<Rat>> start{{a, Rat(1) - a}, {b, Rat(1) - b}};
      // Perturbed run: must land within 0.05 of the perturbed (R1,C1) image.
      GdState pert = run_gd(g, start, Rat(1, 100), eta, iters);
      REQUIRE_OR_FAIL((pert.x[0][0] - Rat(99, 100)).abs() <= Rat(1, 20) &&
                          (pert.x[1][0] - Rat(99, 100)).abs() <= Rat(1, 20),
                      "perturbed run missed the (R1,C1) image");
      // Vanilla run: count low-welfare endpoints. The published separation
      // is a welfare statement; the potential is constant on the R1 face.
      GdState van = run_gd(g, start, Rat(0), eta, iters);
      Rat welfare = g.utility(0, van.x) + g.utility(1, van.x);
      if (welfare < Rat(12) - Rat(1, 2)) ++vanilla_low_welfare;
    }
  REQUIRE_OR_FAIL(vanilla_low_welfare >= 30,
                  "fewer than 30% low-welfare vanilla runs");
  return true;
}

// ----------------------------------------------------------- criterion 12

bool crit12_strongpoly_bf(std::string& why) {
  Rng rng(312);
  for (int trial = 0; trial < 50; ++trial) {
    const int nodes = static_cast<int>(rng.range(4, 6));
    std::vector<std::pair<int, int>> arcs;
    for (int v = 0; v + 1 < nodes; ++v) arcs.emplace_back(v, v + 1);
    for (int u = 0; u < nodes; ++u)
      for (int v = u + 2; v < nodes; ++v)
        if (rng.coin()) arcs.emplace_back(u, v);
    std::vector<EpsPoly> costs;
    for (std::size_t a = 0; a < arcs.size(); ++a)
      costs.push_back(poly(
          {Rat(rng.range(1, 9)), Rat(rng.range(-3, 3)), Rat(rng.range(-2, 2))}));

    ArithmeticProgram prog;
    prog.num_inputs = static_cast<int>(arcs.size());
    prog.num_outputs = 1;
    prog.body = [nodes, arcs](ProgramContext& ctx) {
      const Rat inf(1000000000L);
      std::vector<Rat> dist(nodes, inf);
      dist[0] = Rat(0);
      for (int round = 0; round + 1 < nodes; ++round)
        for (std::size_t a = 0; a < arcs.size(); ++a) {
          Rat cand = dist[arcs[a].first] + ctx.in(a);
          if (ctx.less(cand, dist[arcs[a].second])) dist[arcs[a].second] = cand;
        }
      return std::vector<Rat>{dist[nodes - 1]};
    };
    SymbolicRun run = run_symbolic(prog, costs, 2 * (nodes - 1));

    std::vector<std::tuple<int, int, EpsPoly>> sym_arcs;
    for (std::size_t a = 0; a < arcs.size(); ++a)
      sym_arcs.emplace_back(arcs[a].first, arcs[a].second, costs[a]);
    auto [path, dist] = symbolic_shortest_path(nodes, sym_arcs, 0, nodes - 1);
    REQUIRE_OR_FAIL(
        run.outputs[0].same_function(EpsRational{dist, EpsPoly(Rat(1))}),
        "interpolated distance differs from the lexicographic shortest path");
  }
  return true;
}

// ----------------------------------------------------------- criterion 13

bool crit13_cross_oracle(std::string& why) {
  Rat eps(1, 100);
  {
    // Criteria 1-2 outputs at their documented eps.
    TableGame fig3 = *generate(GenSpec::simple(GenSpec::Kind::Fig3MaxPayoff)).table;
    EpsPureProfile best =
        solve_exhaustive(fig3.to_concise(), PerturbScheme::PerfectBox);
    auto np = embed_numeric(best, PerturbScheme::PerfectBox, fig3.actions, eps);
    REQUIRE_OR_FAIL(check_eps_perfect(fig3, np).pass, "fig3 maximizer not eps-perfect");

    TableGame fig2 = *generate(GenSpec::simple(GenSpec::Kind::Fig2Myerson)).table;
    DynamicsConfig cfg;
    cfg.scheme = PerturbScheme::ProperPermutahedron;
    auto res = run_dynamics(fig2.to_concise(),
                            EpsPureProfile::canonical(cfg.scheme, fig2.actions), cfg);
    auto pp = embed_numeric(res.final, cfg.scheme, fig2.actions, eps);
    REQUIRE_OR_FAIL(check_eps_proper(fig2, pp).pass,
                    "fig2 proper fixed point fails the ratio check");
    auto bad = embed_numeric(EpsPureProfile::box({1, 1}),
                             PerturbScheme::PerfectBox, fig2.actions, eps);
    REQUIRE_OR_FAIL(!check_eps_proper(fig2, bad).pass,
                    "(R2,C2) must fail the proper ratio check");
  }
  {
    // Criterion 9 outputs through the structured expectation evaluator.
    Rng rng(313);
    WeightedGraph g = random_graph(rng, 4);
    GeneratedGame gen = generate(GenSpec::maxcut_triplet(g));
    DynamicsConfig cfg;
    auto res = run_dynamics(
        *gen.concise,
        EpsPureProfile::canonical(PerturbScheme::PerfectBox,
                                  gen.concise->actions()),
        cfg);
    Rat meps = Rat::pow2(-24);
    const int players = 3 * g.num_vertices;
    std::vector<int> actions(players, 2);
    auto np = embed_numeric(res.final, PerturbScheme::PerfectBox, actions, meps);
    auto fn = [&](int player, int action) {
      std::vector<Rat> b_prob;
      for (int p = 0; p < players; ++p) b_prob.push_back(np.x[p][0]);
      b_prob[player] = action == 0 ? Rat(1) : Rat(0);
      return maxcut_triplet_expected_utility(g, b_prob);
    };
    REQUIRE_OR_FAIL(check_eps_perfect_fn(actions, fn, np).pass,
                    "triplet fixed point fails the eps-perfect check");
  }
  {
    // Criterion 10 output: the symbolic-GD limit (R1,R1) is not eps-perfect
    // while the true perfect equilibrium (R2,R2) is.
    TableGame fig6 = *generate(GenSpec::simple(GenSpec::Kind::Fig6SymbolicGD)).table;
    auto bad = embed_numeric(EpsPureProfile::box({0, 0}),
                             PerturbScheme::PerfectBox, fig6.actions, eps);
    REQUIRE_OR_FAIL(!check_eps_perfect(fig6, bad).pass,
                    "(R1,R1) should fail the eps-perfect check");
    auto good = embed_numeric(EpsPureProfile::box({1, 1}),
                              PerturbScheme::PerfectBox, fig6.actions, eps);
    REQUIRE_OR_FAIL(check_eps_perfect(fig6, good).pass,
                    "(R2,R2) should pass the eps-perfect check");
  }
  {
    // Criterion 11 output: the perturbed-GD endpoint is an eps-perfect
    // profile of the Fig. 4 game at eps = 0.01.
    GeneratedGame fig4 = generate(GenSpec::simple(GenSpec::Kind::Fig4RandomGD));
    const PolymatrixGame& g = *fig4.polymatrix;
    Rat eta = Rat(1) / g.smoothness_bound();
    std::vector<std::vector<Rat>> start{{Rat(1, 2), Rat(1, 2)},
                                        {Rat(1, 4), Rat(3, 4)}};
    GdState res = run_gd(g, start, Rat(1, 100), eta, 9000);
    NumericProfile np{res.x, Rat(1, 100)};
    REQUIRE_OR_FAIL(check_eps_perfect(*fig4.table, np).pass,
                    "perturbed GD endpoint fails the eps-perfect check");
  }
  return true;
}

}  // namespace

int main() {
  std::vector<Criterion> criteria{
      {1, "fig3 symbolic potentials", 1.0, crit1_fig3_potentials},
      {2, "refinement hierarchy on fig2", 5.0, crit2_refinement_hierarchy},
      {3, "spanning-set correctness (200 random trees)", 120.0, crit3_spanning_sets},
      {4, "hypercube spanning sets", 10.0, crit4_hypercube_spanning},
      {5, "KM knapsack leading exponents", 60.0, crit5_km_knapsack},
      {6, "matroid congestion dynamics (100 games)", 180.0, crit6_matroid_congestion},
      {7, "network congestion optimality (50 DAGs)", 120.0, crit7_network_congestion},
      {8, "doubly-exponential reference point", 60.0, crit8_double_exp},
      {9, "maxcut separations", 300.0, crit9_maxcut_separations},
      {10, "symbolic GD failure closed form", 1.0, crit10_symbolic_gd},
      {11, "perturbed GD welfare grid", 60.0, crit11_perturbed_gd},
      {12, "strongly-polynomial Bellman-Ford", 60.0, crit12_strongpoly_bf},
      {13, "cross-oracle definitional checks", 120.0, crit13_cross_oracle},
  };
  int failures = 0;
  for (auto& c : criteria) {
    auto t0 = std::chrono::steady_clock::now();
    std::string why;
    bool ok = false;
    try {
      ok = c.run(why);
    } catch (const std::exception& e) {
      why = std::string("exception: ") + e.what();
    }
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    bool in_budget = secs <= c.budget_seconds;
    if (ok && in_budget) {
      std::printf("[PASS] criterion %2d: %s (%.2fs)\n", c.id, c.name, secs);
    } else {
      ++failures;
      std::printf("[FAIL] criterion %2d: %s (%.2fs)%s%s\n", c.id, c.name, secs,
                  why.empty() ? "" : " -- ", why.c_str());
      if (!in_budget)
        std::printf("       exceeded budget of %.0fs\n", c.budget_seconds);
    }
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
