#include "refinery/gamegen.h"

#include <algorithm>

namespace refinery {

GenSpec GenSpec::double_exp(int n) {
  if (n < 1) throw InvalidParameter("double_exp: n >= 1 required");
  GenSpec s;
  s.kind = Kind::DoubleExp;
  s.n = n;
  return s;
}

GenSpec GenSpec::double_exp_3p(int n) {
  if (n < 1) throw InvalidParameter("double_exp_3p: n >= 1 required");
  GenSpec s;
  s.kind = Kind::DoubleExp3Player;
  s.n = n;
  return s;
}

namespace {

void check_graph(const WeightedGraph& g) {
  if (g.num_vertices < 1) throw InvalidParameter("graph: no vertices");
  for (const auto& [u, v, w] : g.edges) {
    if (u < 0 || v < 0 || u >= g.num_vertices || v >= g.num_vertices || u == v)
      throw InvalidParameter("graph: bad edge endpoints");
    if (w <= 0) throw InvalidParameter("graph: weights must be positive");
  }
}

}  // namespace

GenSpec GenSpec::maxcut_triplet(WeightedGraph g) {
  check_graph(g);
  GenSpec s;
  s.kind = Kind::MaxCutTriplet;
  s.graph = std::move(g);
  return s;
}

GenSpec GenSpec::maxcut_escape(WeightedGraph g) {
  check_graph(g);
  GenSpec s;
  s.kind = Kind::MaxCutEscape;
  s.graph = std::move(g);
  return s;
}

GenSpec GenSpec::team_bot(std::vector<int> actions, std::vector<Rat> tensor,
                          Rat r, Rat delta) {
  if (actions.size() != 3) throw InvalidParameter("team_bot: 3-player tensor");
  std::size_t cells = 1;
  for (int m : actions) {
    if (m < 1) throw InvalidParameter("team_bot: empty action set");
    cells *= static_cast<std::size_t>(m);
  }
  if (tensor.size() != cells) throw InvalidParameter("team_bot: tensor size");
  if (delta.sign() <= 0) throw InvalidParameter("team_bot: delta must be positive");
  GenSpec s;
  s.kind = Kind::TeamBot;
  s.team_actions = std::move(actions);
  s.team_tensor = std::move(tensor);
  s.team_r = std::move(r);
  s.team_delta = std::move(delta);
  return s;
}

GenSpec GenSpec::knapsack(std::vector<long> w, long cap) {
  if (w.empty() || w.size() > 20)
    throw InvalidParameter("knapsack: 1 <= d <= 20 weights");
  for (long wi : w)
    if (wi <= 0) throw InvalidParameter("knapsack: weights must be positive");
  GenSpec s;
  s.kind = Kind::KnapsackHypercube;
  s.weights = std::move(w);
  s.capacity = cap;
  return s;
}

int maxcut_triplet_players(const WeightedGraph& g) { return 3 * g.num_vertices; }
long maxcut_lambda(const WeightedGraph& g) { return 6L * g.num_vertices; }

long maxcut_escape_reward(const WeightedGraph& g) {
  long max_w = 0;
  for (const auto& [u, v, w] : g.edges) max_w = std::max(max_w, w);
  return static_cast<long>(g.num_vertices) * g.num_vertices * max_w + 1;
}

std::vector<Rat> double_exp_point(int n, const Rat& eps) {
  std::vector<Rat> point;
  std::vector<Rat> x(n);
  Rat prev(1, 2);  // x_0 = 1/2
  for (int i = 0; i < n; ++i) {
    x[i] = max(eps, prev * prev);
    prev = x[i];
  }
  for (int i = 0; i < n; ++i) point.push_back(x[i]);       // x block
  for (int i = 0; i < n; ++i) point.push_back(x[i]);       // x' block
  for (int i = 0; i < n; ++i) point.push_back(eps);        // c block
  for (int i = 0; i < n; ++i) point.push_back(Rat(1, 2));  // d block
  point.push_back(eps);                                    // t
  return point;
}

TreeFormDecisionProblem make_hypercube_tfdp(int d) {
  TfdpBuilder b;
  for (int j = 0; j < d; ++j) b.decision_point(0, 2);
  return std::move(b).build();
}

TreeFormDecisionProblem make_simplex_tfdp(int m) {
  TfdpBuilder b;
  b.decision_point(0, m);
  return std::move(b).build();
}

namespace {

GeneratedGame make_table(const GenSpec& spec, TableGame table) {
  GeneratedGame g;
  g.spec = spec;
  g.concise = table.to_concise();
  g.table = std::move(table);
  return g;
}

PolymatrixGame two_player_polymatrix(const TableGame& t) {
  PolymatrixGame pm;
  pm.n = 2;
  pm.actions = t.actions;
  PolymatrixGame::Edge e;
  e.i = 0;
  e.j = 1;
  e.p_ij.assign(t.actions[0], std::vector<Rat>(t.actions[1]));
  e.p_ji.assign(t.actions[1], std::vector<Rat>(t.actions[0]));
  for (int a = 0; a < t.actions[0]; ++a)
    for (int b = 0; b < t.actions[1]; ++b) {
      e.p_ij[a][b] = t.utility(0, {a, b});
      e.p_ji[b][a] = t.utility(1, {a, b});
    }
  pm.edges.push_back(std::move(e));
  if (t.potential)
    pm.potential = MultilinearCircuit::from_tensor(t.actions, *t.potential);
  return pm;
}

GeneratedGame gen_mp_christmas(const GenSpec& spec) {
  GeneratedGame g;
  g.spec = spec;
  EfgZeroSum efg;
  // P1: Heads/Tails, then Gift/NoGift after each.
  {
    TfdpBuilder b;
    int root_dp = b.decision_point(0, {"Heads", "Tails"});
    int h = b.seq_of(root_dp, 0), t = b.seq_of(root_dp, 1);
    b.decision_point(h, {"Gift", "NoGift"});
    b.decision_point(t, {"Gift", "NoGift"});
    efg.trees.push_back(std::move(b).build());
  }
  // P2: one information set per observation (Gift / NoGift).
  {
    TfdpBuilder b;
    b.decision_point(0, {"Heads", "Tails"});   // upon Gift
    b.decision_point(0, {"Heads", "Tails"});   // upon NoGift
    efg.trees.push_back(std::move(b).build());
  }
  // u2 = x1^T M x2 on terminal sequence pairs. P1 sequences:
  // 0 root, 1 H, 2 T, 3 HG, 4 HN, 5 TG, 6 TN. P2: 0 root, 1 GH, 2 GT,
  // 3 NH, 4 NT.
  std::vector<std::vector<Rat>> m(7, std::vector<Rat>(5, Rat(0)));
  m[3][1] = Rat(2);  // Heads+Gift, P2 Heads
  m[3][2] = Rat(1);
  m[4][3] = Rat(1);
  m[4][4] = Rat(0);
  m[5][1] = Rat(1);
  m[5][2] = Rat(2);
  m[6][3] = Rat(0);
  m[6][4] = Rat(1);
  efg.p2_payoff = std::move(m);
  g.efg = std::move(efg);
  return g;
}

GeneratedGame gen_double_exp(const GenSpec& spec, bool three_player) {
  const int n = spec.n;
  GeneratedGame g;
  g.spec = spec;
  if (!three_player) {
    // 4n+1 binary players: x_1..x_n, x'_1..x'_n, c, d, t; a player's value
    // is the probability of its first action.
    CircuitBuilder b(4 * n + 1, std::vector<int>(4 * n + 1, 2));
    auto in0 = [&](int p) { return b.input(p, 0); };
    auto neg = [&](int id) { return b.mul(b.constant(Rat(-1)), id); };
    auto sub = [&](int x, int y) { return b.add(x, neg(y)); };
    int t = in0(4 * n);
    std::vector<int> terms;
    for (int i = 1; i <= n; ++i) {
      int xi = in0(i - 1);
      int xpi = in0(n + i - 1);
      int ci = in0(2 * n + i - 1);
      int di = in0(3 * n + i - 1);
      int prev = i == 1 ? b.constant(Rat(1, 4))
                        : b.mul(in0(i - 2), in0(n + i - 2));
      terms.push_back(b.mul(sub(t, ci), sub(xi, prev)));
      terms.push_back(b.mul(sub(di, b.constant(Rat(1, 2))), sub(xi, xpi)));
    }
    terms.push_back(b.mul(b.constant(Rat(-2)), in0(n - 1)));
    terms.push_back(b.mul(b.constant(Rat(-2)), in0(2 * n - 1)));
    terms.push_back(b.mul(b.constant(Rat(-2 * n)), t));
    int out = b.sum(terms);
    g.concise = ConcisePotentialGame(std::move(b).build(out));
    return g;
  }
  // Three players on simplices: x in Delta(n+1), x' in Delta(n+1),
  // (c_1..c_n, d_1..d_n, t, s) in Delta(2n+2).
  std::vector<int> actions{n + 1, n + 1, 2 * n + 2};
  CircuitBuilder b(3, actions);
  auto neg = [&](int id) { return b.mul(b.constant(Rat(-1)), id); };
  auto sub = [&](int x, int y) { return b.add(x, neg(y)); };
  int t = b.input(2, 2 * n);
  std::vector<int> terms;
  for (int i = 1; i <= n; ++i) {
    int xi = b.input(0, i - 1);
    int xpi = b.input(1, i - 1);
    int ci = b.input(2, i - 1);
    int di = b.input(2, n + i - 1);
    int prev = i == 1 ? b.constant(Rat(1, 4))
                      : b.mul(b.input(0, i - 2), b.input(1, i - 2));
    terms.push_back(b.mul(sub(t, ci), sub(xi, prev)));
    terms.push_back(b.mul(sub(di, b.constant(Rat(1, 4 * n))), sub(xi, xpi)));
  }
  terms.push_back(b.mul(b.constant(Rat(-2)), b.input(0, n - 1)));
  terms.push_back(b.mul(b.constant(Rat(-2)), b.input(1, n - 1)));
  terms.push_back(b.mul(b.constant(Rat(-2 * n)), t));
  int out = b.sum(terms);
  g.concise = ConcisePotentialGame(std::move(b).build(out));
  return g;
}

GeneratedGame gen_maxcut_triplet(const GenSpec& spec) {
  const WeightedGraph& graph = spec.graph;
  const int nv = graph.num_vertices;
  const int players = 3 * nv;
  const long lambda = maxcut_lambda(graph);
  GeneratedGame g;
  g.spec = spec;

  CircuitBuilder b(players, std::vector<int>(players, 2));
  auto neg = [&](int id) { return b.mul(b.constant(Rat(-1)), id); };
  auto sub = [&](int x, int y) { return b.add(x, neg(y)); };
  auto one_minus = [&](int id) { return sub(b.constant(Rat(1)), id); };

  // Per vertex: probability the majority of its triplet plays b, and the
  // probability the triplet is non-unanimous.
  std::vector<int> maj(nv), non_unanimous(nv);
  for (int v = 0; v < nv; ++v) {
    int p1 = b.input(3 * v, 0), p2 = b.input(3 * v + 1, 0), p3 = b.input(3 * v + 2, 0);
    int pairs = b.add(b.add(b.mul(p1, p2), b.mul(p1, p3)), b.mul(p2, p3));
    int triple = b.mul(b.mul(p1, p2), p3);
    maj[v] = b.add(pairs, b.mul(b.constant(Rat(-2)), triple));
    int all_c = b.mul(b.mul(one_minus(p1), one_minus(p2)), one_minus(p3));
    non_unanimous[v] = sub(sub(b.constant(Rat(1)), triple), all_c);
  }
  std::vector<int> terms;
  for (const auto& [u, v, w] : graph.edges) {
    // P(opposite sides) = B_u + B_v - 2 B_u B_v
    int cross = b.add(b.add(maj[u], maj[v]),
                      b.mul(b.constant(Rat(-2)), b.mul(maj[u], maj[v])));
    terms.push_back(b.mul(b.constant(Rat(w)), cross));
  }
  // E[psi 1{psi >= 2}] = sum q_v - sum_v q_v prod_{u != v} (1 - q_u),
  // via prefix/suffix products of (1 - q_u).
  std::vector<int> pre(nv + 1), suf(nv + 1);
  pre[0] = b.constant(Rat(1));
  for (int v = 0; v < nv; ++v) pre[v + 1] = b.mul(pre[v], one_minus(non_unanimous[v]));
  suf[nv] = b.constant(Rat(1));
  for (int v = nv; v-- > 0;) suf[v] = b.mul(one_minus(non_unanimous[v]), suf[v + 1]);
  for (int v = 0; v < nv; ++v) {
    int others = b.mul(pre[v], suf[v + 1]);
    int contrib = b.mul(non_unanimous[v], sub(b.constant(Rat(1)), others));
    terms.push_back(b.mul(b.constant(Rat(-1, lambda)), contrib));
  }
  int out = b.sum(terms);
  g.concise = ConcisePotentialGame(std::move(b).build(out));
  return g;
}

GeneratedGame gen_maxcut_escape(const GenSpec& spec) {
  const WeightedGraph& graph = spec.graph;
  const int nv = graph.num_vertices;
  const int players = nv + 2;  // vertices, then w, w'
  const long m_reward = maxcut_escape_reward(graph);
  GeneratedGame g;
  g.spec = spec;

  CircuitBuilder b(players, std::vector<int>(players, 2));
  auto neg = [&](int id) { return b.mul(b.constant(Rat(-1)), id); };
  auto sub = [&](int x, int y) { return b.add(x, neg(y)); };
  // Vertex actions {b, c}: input(v, 0) = P(b). Escape actions {d, e}:
  // input(w, 1) = P(e).
  std::vector<int> bv(nv);
  for (int v = 0; v < nv; ++v) bv[v] = b.input(v, 0);
  int ew = b.input(nv, 1), ewp = b.input(nv + 1, 1);
  int both_escape = b.mul(ew, ewp);

  std::vector<int> cut_terms;
  for (const auto& [u, v, w] : graph.edges) {
    int cross = b.add(b.add(bv[u], bv[v]),
                      b.mul(b.constant(Rat(-2)), b.mul(bv[u], bv[v])));
    cut_terms.push_back(b.mul(b.constant(Rat(w)), cross));
  }
  int cut = b.sum(cut_terms);
  std::vector<int> bonus_terms{b.constant(Rat(m_reward))};
  for (int v = 0; v < nv; ++v) bonus_terms.push_back(bv[v]);
  int bonus = b.sum(bonus_terms);
  int out = b.add(b.mul(sub(b.constant(Rat(1)), both_escape), cut),
                  b.mul(both_escape, bonus));
  g.concise = ConcisePotentialGame(std::move(b).build(out));
  g.recommended_order.push_back(nv);      // w first
  g.recommended_order.push_back(nv + 1);  // then w'
  for (int v = 0; v < nv; ++v) g.recommended_order.push_back(v);
  return g;
}

GeneratedGame gen_team_bot(const GenSpec& spec) {
  const auto& ma = spec.team_actions;
  std::vector<int> actions{ma[0] + 1, ma[1] + 1, ma[2] + 1};
  TableGame t;
  t.actions = actions;
  std::vector<Rat> common;
  common.reserve(static_cast<std::size_t>(actions[0]) * actions[1] * actions[2]);
  TableGame team;
  team.actions = ma;
  team.utilities = {spec.team_tensor, spec.team_tensor, spec.team_tensor};
  for (int a0 = 0; a0 < actions[0]; ++a0)
    for (int a1 = 0; a1 < actions[1]; ++a1)
      for (int a2 = 0; a2 < actions[2]; ++a2) {
        bool bot0 = a0 == ma[0], bot1 = a1 == ma[1], bot_adv = a2 == ma[2];
        if (!bot0 && !bot1 && !bot_adv) {
          common.push_back(team.utility(0, {a0, a1, a2}));
        } else if (bot_adv && (bot0 != bot1)) {
          common.push_back(spec.team_r - spec.team_delta / Rat(2));
        } else {
          common.push_back(spec.team_r);
        }
      }
  return make_table(spec, TableGame::identical(actions, std::move(common)));
}

GeneratedGame gen_knapsack(const GenSpec& spec) {
  GeneratedGame g;
  g.spec = spec;
  KnapsackDemo demo;
  demo.u.push_back(-(Rat(spec.capacity) + Rat(1, 2)));
  for (long w : spec.weights) demo.u.push_back(Rat(-w));
  const int d = static_cast<int>(spec.weights.size());
  demo.count = 0;
  for (long mask = 0; mask < (1L << d); ++mask) {
    long total = 0;
    for (int i = 0; i < d; ++i)
      if (mask >> i & 1) total += spec.weights[i];
    if (total <= spec.capacity) ++demo.count;
  }
  g.knapsack = std::move(demo);
  return g;
}

}  // namespace

GeneratedGame generate(const GenSpec& spec) {
  using K = GenSpec::Kind;
  switch (spec.kind) {
    case K::Fig1:
      return make_table(spec, TableGame::identical(
                                  {2, 2}, {Rat(1), Rat(0), Rat(0), Rat(0)}));
    case K::Fig2Myerson:
      return make_table(spec, TableGame::identical(
                                  {3, 3}, {Rat(1), Rat(0), Rat(-9), Rat(0), Rat(0),
                                           Rat(-7), Rat(-9), Rat(-7), Rat(-7)}));
    case K::Fig3MaxPayoff:
      return make_table(spec, TableGame::identical(
                                  {2, 2}, {Rat(1), Rat(1), Rat(1), Rat(0)}));
    case K::Fig4RandomGD: {
      TableGame t;
      t.actions = {2, 2};
      t.utilities = {{Rat(12), Rat(2), Rat(11), Rat(0)},
                     {Rat(2), Rat(2), Rat(1), Rat(0)}};
      t.potential = std::vector<Rat>{Rat(2), Rat(2), Rat(1), Rat(0)};
      GeneratedGame g = make_table(spec, t);
      g.polymatrix = two_player_polymatrix(t);
      return g;
    }
    case K::Fig6SymbolicGD: {
      TableGame t = TableGame::identical({2, 2}, {Rat(0), Rat(0), Rat(0), Rat(1)});
      GeneratedGame g = make_table(spec, t);
      g.polymatrix = two_player_polymatrix(t);
      return g;
    }
    case K::MPChristmas:
      return gen_mp_christmas(spec);
    case K::DoubleExp:
      return gen_double_exp(spec, false);
    case K::DoubleExp3Player:
      return gen_double_exp(spec, true);
    case K::MaxCutTriplet:
      return gen_maxcut_triplet(spec);
    case K::MaxCutEscape:
      return gen_maxcut_escape(spec);
    case K::TeamBot:
      return gen_team_bot(spec);
    case K::KnapsackHypercube:
      return gen_knapsack(spec);
  }
  throw InvalidParameter("generate: unknown kind");
}

ReferenceSolutions reference_solutions(const GenSpec& spec) {
  using K = GenSpec::Kind;
  ReferenceSolutions r;
  switch (spec.kind) {
    case K::Fig1:
      r.entries.push_back({"perfect", {0, 0}, "unique perfect equilibrium"});
      return r;
    case K::Fig2Myerson:
      r.entries.push_back({"proper", {0, 0}, "unique proper equilibrium"});
      r.entries.push_back({"perfect", {1, 1}, "perfect but not proper"});
      return r;
    case K::Fig3MaxPayoff:
      r.entries.push_back({"perfect", {0, 0}, "unique perfect equilibrium"});
      return r;
    case K::Fig4RandomGD:
      r.entries.push_back({"perfect", {0, 0}, "welfare-optimal perfect equilibrium"});
      return r;
    case K::Fig6SymbolicGD:
      r.entries.push_back({"perfect", {1, 1}, "unique perfect equilibrium"});
      return r;
    case K::MPChristmas: {
      ReferenceEntry e;
      e.refinement = "nf-proper";
      e.note =
          "P1 mixes Heads/Tails 1/2-1/2 and refuses the gift at both "
          "decision points; sequence-form x = (1, 1/2, 1/2, 0, 1/2, 0, 1/2)";
      r.entries.push_back(std::move(e));
      return r;
    }
    case K::DoubleExp: {
      ReferenceEntry e;
      e.refinement = "perturbed-equilibrium";
      e.note =
          "t = eps, d = 1/2, c = eps, x_i = x'_i = max(eps, 1/2^(2^i)) for "
          "eps in [1/2^(2^n), 1/2]";
      r.entries.push_back(std::move(e));
      return r;
    }
    default:
      throw NoReferenceAvailable("reference_solutions: none for this kind");
  }
}

}  // namespace refinery
