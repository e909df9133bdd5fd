#include "refinery/congestion.h"

#include <algorithm>
#include <numeric>
#include <tuple>

namespace refinery {

bool UniformMatroid::independent(const std::vector<int>& set) const {
  return static_cast<int>(set.size()) <= rank_;
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) { return parent[x] == x ? x : parent[x] = find(parent[x]); }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

}  // namespace

GraphicMatroid::GraphicMatroid(int num_vertices,
                               std::vector<std::pair<int, int>> edges)
    : num_vertices_(num_vertices), edges_(std::move(edges)) {
  UnionFind uf(num_vertices_);
  rank_ = 0;
  for (const auto& [u, v] : edges_)
    if (uf.unite(u, v)) ++rank_;
}

bool GraphicMatroid::independent(const std::vector<int>& set) const {
  UnionFind uf(num_vertices_);
  for (int e : set)
    if (!uf.unite(edges_[e].first, edges_[e].second)) return false;
  return true;
}

PartitionMatroid::PartitionMatroid(std::vector<std::vector<int>> blocks,
                                   std::vector<int> quotas)
    : quotas_(std::move(quotas)) {
  m_ = 0;
  for (const auto& b : blocks) m_ += static_cast<int>(b.size());
  block_of_.assign(m_, -1);
  for (std::size_t b = 0; b < blocks.size(); ++b)
    for (int r : blocks[b]) block_of_[r] = static_cast<int>(b);
  rank_ = 0;
  for (std::size_t b = 0; b < blocks.size(); ++b)
    rank_ += std::min<int>(quotas_[b], static_cast<int>(blocks[b].size()));
}

bool PartitionMatroid::independent(const std::vector<int>& set) const {
  std::vector<int> used(quotas_.size(), 0);
  for (int r : set) {
    int b = block_of_[r];
    if (b < 0 || ++used[b] > quotas_[b]) return false;
  }
  return true;
}

void MatroidCongestionGame::validate() const {
  const int m = num_resources();
  if (static_cast<int>(delay.size()) != m)
    throw IndexOutOfRange("matroid game: delay table size mismatch");
  for (const auto& dr : delay) {
    if (static_cast<int>(dr.size()) != n)
      throw IndexOutOfRange("matroid game: delay table must cover k = 1..n");
    for (const Rat& d : dr)
      if (d.sign() <= 0) throw IndexOutOfRange("matroid game: delays must be positive");
  }
  if (static_cast<int>(resource_count.size()) != m)
    throw IndexOutOfRange("matroid game: per-resource basis counts missing");
  for (const mpz_class& br : resource_count)
    if (br > basis_count)
      throw IndexOutOfRange("matroid game: B_r exceeds |B|");
}

std::vector<std::vector<int>> enumerate_bases(const Matroid& m) {
  std::vector<std::vector<int>> bases;
  const int R = m.num_resources();
  const int rk = m.rank();
  std::vector<int> cur;
  // Depth-first over independent sets in index order; bases have size rk.
  auto rec = [&](auto&& self, int next) -> void {
    if (static_cast<int>(cur.size()) == rk) {
      bases.push_back(cur);
      return;
    }
    for (int r = next; r < R; ++r) {
      cur.push_back(r);
      if (m.independent(cur)) self(self, r + 1);
      cur.pop_back();
    }
  };
  rec(rec, 0);
  return bases;
}

EpsPoly perturbed_delay(const MatroidCongestionGame& g, int r, int k) {
  const int n = g.n;
  if (r < 0 || r >= g.num_resources() || k < 0 || k > n)
    throw IndexOutOfRange("perturbed_delay: index out of range");
  // h_r = 1 - (|B| - B_r) eps, f_r = B_r eps. The paper's printed form has
  // the sign flipped; its own derivation line gives this one.
  Rat br(g.resource_count[r]);
  Rat b(g.basis_count);
  EpsPoly h = EpsPoly::from_coeffs({Rat(1), -(b - br)});
  EpsPoly f = EpsPoly::from_coeffs({Rat(0), br});
  EpsPoly one_minus_h = EpsPoly(Rat(1)) - h;
  EpsPoly one_minus_f = EpsPoly(Rat(1)) - f;

  auto powers = [&](const EpsPoly& p, int top) {
    std::vector<EpsPoly> pw(top + 1);
    pw[0] = EpsPoly(Rat(1));
    for (int i = 1; i <= top; ++i) pw[i] = pw[i - 1] * p;
    return pw;
  };
  auto hp = powers(h, n), hq = powers(one_minus_h, n);
  auto fp = powers(f, n), fq = powers(one_minus_f, n);

  auto binom = [](int a, int c) {
    mpz_class out;
    mpz_bin_uiui(out.get_mpz_t(), a, c);
    return Rat(out);
  };

  EpsPoly total;
  for (int i = 1; i <= n; ++i) {
    EpsPoly prob;  // P~_{r,k}(i)
    const int lo = std::max(0, i - (n - k));
    const int hi = std::min(i, k);
    for (int j = lo; j <= hi; ++j) {
      EpsPoly term = binom(k, j) * (hp[j] * hq[k - j]);
      term = term * (binom(n - k, i - j) * (fp[i - j] * fq[n - k - (i - j)]));
      prob += term;
    }
    total += g.delay[r][i - 1] * prob;
  }
  return total;
}

std::vector<EpsPoly> count_distribution(const std::vector<EpsPoly>& weights) {
  const std::size_t n = weights.size();
  std::vector<EpsPoly> s(n + 1);
  s[0] = EpsPoly(Rat(1));
  for (std::size_t l = 0; l < n; ++l) {
    const EpsPoly& w = weights[l];
    EpsPoly not_w = EpsPoly(Rat(1)) - w;
    for (std::size_t k = l + 1; k-- > 0;) {
      // s[k+1] gains mass from s[k]; in-place right-to-left sweep.
      s[k + 1] = s[k + 1] * not_w + s[k] * w;
    }
    s[0] = s[0] * not_w;
  }
  return s;
}

std::vector<int> matroid_br(const Matroid& m, const std::vector<EpsPoly>& costs) {
  std::vector<int> order(costs.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return lex_less(costs[a], costs[b]);
  });
  std::vector<int> basis;
  for (int r : order) {
    basis.push_back(r);
    std::vector<int> probe = basis;
    std::sort(probe.begin(), probe.end());
    if (!m.independent(probe))
      basis.pop_back();
    if (static_cast<int>(basis.size()) == m.rank()) break;
  }
  if (static_cast<int>(basis.size()) != m.rank())
    throw OracleInconsistency("matroid_br: greedy could not complete a basis");
  std::sort(basis.begin(), basis.end());
  return basis;
}

namespace {

std::vector<int> usage_counts(int m, const std::vector<std::vector<int>>& profile) {
  std::vector<int> cnt(m, 0);
  for (const auto& basis : profile)
    for (int r : basis) ++cnt[r];
  return cnt;
}

}  // namespace

EpsPoly matroid_potential(const MatroidCongestionGame& g,
                          const std::vector<std::vector<int>>& profile) {
  auto cnt = usage_counts(g.num_resources(), profile);
  EpsPoly phi;
  for (int r = 0; r < g.num_resources(); ++r)
    for (int k = 1; k <= cnt[r]; ++k) phi += perturbed_delay(g, r, k);
  return phi;
}

MatroidDynamicsResult run_matroid_dynamics(const MatroidCongestionGame& g) {
  g.validate();
  const int m = g.num_resources();
  // Precompute the perturbed delay table once.
  std::vector<std::vector<EpsPoly>> dt(m);
  for (int r = 0; r < m; ++r)
    for (int k = 1; k <= g.n; ++k) dt[r].push_back(perturbed_delay(g, r, k));

  // Canonical start: every player on the lexicographically first basis.
  std::vector<EpsPoly> zero_costs(m);
  for (int r = 0; r < m; ++r) zero_costs[r] = EpsPoly(Rat(r));  // index order
  std::vector<int> first = matroid_br(*g.matroid, zero_costs);
  MatroidDynamicsResult res;
  res.profile.assign(g.n, first);

  const long bound = static_cast<long>(g.n) * g.n * m * g.matroid->rank();
  auto cost_of = [&](const std::vector<int>& basis, const std::vector<int>& others) {
    EpsPoly c;
    for (int r : basis) c += dt[r][others[r]];  // others[r] + 1 players total
    return c;
  };

  bool moved = true;
  while (moved) {
    moved = false;
    for (int i = 0; i < g.n; ++i) {
      auto cnt = usage_counts(m, res.profile);
      std::vector<int> others(m);
      for (int r = 0; r < m; ++r) {
        others[r] = cnt[r];
        for (int rr : res.profile[i])
          if (rr == r) --others[r];
      }
      std::vector<EpsPoly> marginal(m);
      for (int r = 0; r < m; ++r) marginal[r] = dt[r][others[r]];
      std::vector<int> best = matroid_br(*g.matroid, marginal);
      EpsPoly cur = cost_of(res.profile[i], others);
      EpsPoly nxt = cost_of(best, others);
      if (lex_less(nxt, cur)) {
        res.profile[i] = std::move(best);
        ++res.steps;
        res.potential_trace.push_back(matroid_potential(g, res.profile));
        moved = true;
        if (res.steps > bound)
          throw BoundViolation("matroid dynamics exceeded n^2 |R| rk(M) steps");
      }
    }
  }
  return res;
}

void NetworkCongestionGame::validate() const {
  for (const auto& e : edges) {
    if (e.from < 0 || e.from >= num_nodes || e.to < 0 || e.to >= num_nodes)
      throw IndexOutOfRange("network game: edge endpoint out of range");
    if (static_cast<int>(e.delay.size()) != n)
      throw IndexOutOfRange("network game: delay table must cover k = 1..n");
    for (const Rat& d : e.delay)
      if (d.sign() <= 0)
        throw IndexOutOfRange("network game: delays must be positive");
  }
  // Reachability source -> sink.
  std::vector<bool> seen(num_nodes, false);
  std::vector<int> stack{source};
  seen[source] = true;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (const auto& e : edges)
      if (e.from == u && !seen[e.to]) {
        seen[e.to] = true;
        stack.push_back(e.to);
      }
  }
  if (!seen[sink]) throw Disconnected("network game: sink unreachable");
}

void count_paths_dag(NetworkCongestionGame& g) {
  // Topological order; throws if the graph has a cycle.
  std::vector<int> indeg(g.num_nodes, 0);
  for (const auto& e : g.edges) ++indeg[e.to];
  std::vector<int> order;
  std::vector<int> q;
  for (int v = 0; v < g.num_nodes; ++v)
    if (indeg[v] == 0) q.push_back(v);
  while (!q.empty()) {
    int u = q.back();
    q.pop_back();
    order.push_back(u);
    for (const auto& e : g.edges)
      if (e.from == u && --indeg[e.to] == 0) q.push_back(e.to);
  }
  if (static_cast<int>(order.size()) != g.num_nodes)
    throw Disconnected("count_paths_dag: graph is not acyclic");

  // ways_from[v]: #paths v -> sink; ways_to[v]: #paths source -> v.
  std::vector<mpz_class> ways_from(g.num_nodes, 0), ways_to(g.num_nodes, 0);
  ways_from[g.sink] = 1;
  for (auto it = order.rbegin(); it != order.rend(); ++it)
    for (const auto& e : g.edges)
      if (e.from == *it) ways_from[e.from] += ways_from[e.to];
  ways_to[g.source] = 1;
  for (int u : order)
    for (const auto& e : g.edges)
      if (e.from == u) ways_to[e.to] += ways_to[e.from];

  g.path_count = ways_from[g.source];
  std::vector<mpz_class> per_edge;
  for (const auto& e : g.edges) per_edge.push_back(ways_to[e.from] * ways_from[e.to]);
  g.edge_path_counts = std::move(per_edge);
}

EpsPoly network_perturbed_delay(const NetworkCongestionGame& g, int e, int k) {
  if (!g.path_count || !g.edge_path_counts)
    throw IndexOutOfRange("network: path counts missing (supply or run count_paths_dag)");
  MatroidCongestionGame proxy;  // reuse the two-binomial formula
  proxy.n = g.n;
  proxy.delay = {g.edges[e].delay};
  proxy.matroid = std::make_shared<UniformMatroid>(1, 1);
  proxy.basis_count = *g.path_count;
  proxy.resource_count = {(*g.edge_path_counts)[e]};
  return perturbed_delay(proxy, 0, k);
}

std::pair<std::vector<int>, EpsPoly> symbolic_shortest_path(
    int num_nodes, const std::vector<std::tuple<int, int, EpsPoly>>& arcs,
    int source, int sink) {
  // Bellman-Ford under cmp_lex.
  std::vector<std::optional<EpsPoly>> dist(num_nodes);
  std::vector<int> via(num_nodes, -1);
  dist[source] = EpsPoly();
  for (int round = 0; round < num_nodes; ++round) {
    bool changed = false;
    for (std::size_t a = 0; a < arcs.size(); ++a) {
      const auto& [u, v, c] = arcs[a];
      if (!dist[u]) continue;
      EpsPoly cand = *dist[u] + c;
      if (!dist[v] || lex_less(cand, *dist[v])) {
        dist[v] = std::move(cand);
        via[v] = static_cast<int>(a);
        changed = true;
      }
    }
    if (!changed) break;
    if (round == num_nodes - 1 && changed)
      throw NegativeSymbolicCost("symbolic_shortest_path: negative cycle");
  }
  if (!dist[sink]) throw Disconnected("symbolic_shortest_path: sink unreachable");
  std::vector<int> path;
  for (int v = sink; v != source;) {
    path.push_back(via[v]);
    v = std::get<0>(arcs[via[v]]);
  }
  std::reverse(path.begin(), path.end());
  return {path, *dist[sink]};
}

NetworkSolveResult solve_network(const NetworkCongestionGame& game) {
  NetworkCongestionGame g = game;
  g.validate();
  if (!g.path_count || !g.edge_path_counts) count_paths_dag(g);

  const int m = static_cast<int>(g.edges.size());
  // Copy costs: using the k-th copy of edge e costs d~_e(k); the increments
  // must be lexicographically nondecreasing for the gadget to load copies in
  // order, checked at selection time below.
  std::vector<std::vector<EpsPoly>> dt(m);
  for (int e = 0; e < m; ++e)
    for (int k = 1; k <= g.n; ++k) dt[e].push_back(network_perturbed_delay(g, e, k));

  std::vector<int> flow(m, 0);  // units routed on each original edge
  // Successive shortest paths: arc cost of pushing one more unit on e is
  // dt[e][flow[e]]; the residual arc refunds dt[e][flow[e]-1].
  for (int unit = 0; unit < g.n; ++unit) {
    std::vector<std::tuple<int, int, EpsPoly>> arcs;
    std::vector<int> arc_edge;   // original edge id
    std::vector<int> arc_sign;   // +1 forward, -1 residual
    for (int e = 0; e < m; ++e) {
      if (flow[e] < g.n) {
        if (flow[e] + 1 < g.n &&
            lex_greater(dt[e][flow[e]], dt[e][flow[e] + 1]))
          throw NegativeSymbolicCost(
              "solve_network: perturbed delays not nondecreasing in load");
        arcs.emplace_back(g.edges[e].from, g.edges[e].to, dt[e][flow[e]]);
        arc_edge.push_back(e);
        arc_sign.push_back(1);
      }
      if (flow[e] > 0) {
        arcs.emplace_back(g.edges[e].to, g.edges[e].from, -dt[e][flow[e] - 1]);
        arc_edge.push_back(e);
        arc_sign.push_back(-1);
      }
    }
    auto [path, cost] = symbolic_shortest_path(g.num_nodes, arcs, g.source, g.sink);
    for (int a : path) flow[arc_edge[a]] += arc_sign[a];
  }

  // Decompose the integral flow into n source->sink paths.
  NetworkSolveResult res;
  std::vector<int> rem = flow;
  for (int unit = 0; unit < g.n; ++unit) {
    std::vector<int> path;
    int v = g.source;
    while (v != g.sink) {
      int chosen = -1;
      for (int e = 0; e < m; ++e)
        if (rem[e] > 0 && g.edges[e].from == v) {
          chosen = e;
          break;
        }
      if (chosen < 0)
        throw Disconnected("solve_network: flow decomposition stuck");
      --rem[chosen];
      path.push_back(chosen);
      v = g.edges[chosen].to;
    }
    res.paths.push_back(std::move(path));
  }
  EpsPoly phi;
  for (int e = 0; e < m; ++e)
    for (int k = 1; k <= flow[e]; ++k) phi += dt[e][k - 1];
  res.potential = std::move(phi);
  return res;
}

}  // namespace refinery
