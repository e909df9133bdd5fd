#include "refinery/tree_form.h"

#include <algorithm>
#include <numeric>

namespace refinery {

TfdpBuilder::TfdpBuilder() {
  t_.seqs.push_back(TreeFormDecisionProblem::Sequence{});  // root
}

int TfdpBuilder::decision_point(int parent_seq, std::vector<std::string> actions) {
  if (parent_seq < 0 || parent_seq >= static_cast<int>(t_.seqs.size()))
    throw OrphanSequence("tfdp builder: unknown parent sequence");
  const int j = static_cast<int>(t_.dps.size());
  TreeFormDecisionProblem::DecisionPoint dp;
  dp.parent_seq = parent_seq;
  dp.actions = std::move(actions);
  for (int a = 0; a < static_cast<int>(dp.actions.size()); ++a) {
    const int s = static_cast<int>(t_.seqs.size());
    t_.seqs.push_back(TreeFormDecisionProblem::Sequence{j, a, {}});
    dp.child_seq.push_back(s);
  }
  t_.seqs[parent_seq].child_dps.push_back(j);
  t_.dps.push_back(std::move(dp));
  return j;
}

int TfdpBuilder::decision_point(int parent_seq, int num_actions) {
  std::vector<std::string> names;
  for (int a = 0; a < num_actions; ++a) names.push_back("a" + std::to_string(a));
  return decision_point(parent_seq, std::move(names));
}

TreeFormDecisionProblem TfdpBuilder::build() && {
  return validate_tfdp(std::move(t_));
}

TreeFormDecisionProblem validate_tfdp(TreeFormDecisionProblem t) {
  const int ns = t.num_sequences();
  const int nd = t.num_decision_points();
  if (ns == 0 || t.seqs[0].parent_dp != -1)
    throw NotATree("tfdp: sequence 0 must be the root");

  // Rebuild child lists from parent pointers and check single-parent-ness.
  for (auto& s : t.seqs) s.child_dps.clear();
  std::vector<std::vector<int>> seq_of_dp(nd);
  for (int s = 1; s < ns; ++s) {
    const auto& seq = t.seqs[s];
    if (seq.parent_dp < 0 || seq.parent_dp >= nd)
      throw OrphanSequence("tfdp: sequence " + std::to_string(s) +
                           " has no parent decision point");
    const auto& dp = t.dps[seq.parent_dp];
    if (seq.action < 0 || seq.action >= static_cast<int>(dp.actions.size()) ||
        dp.child_seq[seq.action] != s)
      throw OrphanSequence("tfdp: sequence " + std::to_string(s) +
                           " inconsistent with decision point " +
                           std::to_string(seq.parent_dp));
  }
  std::vector<int> seq_child_count(ns, 0);
  for (int j = 0; j < nd; ++j) {
    const auto& dp = t.dps[j];
    if (dp.parent_seq < 0 || dp.parent_seq >= ns)
      throw NotATree("tfdp: decision point " + std::to_string(j) +
                     " has no parent sequence");
    if (dp.actions.empty() || dp.child_seq.size() != dp.actions.size())
      throw NotATree("tfdp: decision point " + std::to_string(j) +
                     " has malformed actions");
    std::vector<bool> seen(ns, false);
    for (int a = 0; a < static_cast<int>(dp.child_seq.size()); ++a) {
      int s = dp.child_seq[a];
      if (s <= 0 || s >= ns || t.seqs[s].parent_dp != j || t.seqs[s].action != a)
        throw NotATree("tfdp: decision point " + std::to_string(j) +
                       " child sequence " + std::to_string(s) + " is shared");
      if (seen[s]) throw NotATree("tfdp: duplicate child sequence");
      seen[s] = true;
      ++seq_child_count[s];
    }
    t.seqs[dp.parent_seq].child_dps.push_back(j);
  }
  for (int s = 1; s < ns; ++s)
    if (seq_child_count[s] != 1)
      throw NotATree("tfdp: sequence " + std::to_string(s) +
                     " has " + std::to_string(seq_child_count[s]) + " parents");

  // Depth via parent chains; a cycle shows up as an over-long chain.
  std::vector<int> depth(nd, -1);
  for (int j = 0; j < nd; ++j) {
    int cur = j, d = 0;
    while (true) {
      int ps = t.dps[cur].parent_seq;
      if (ps == 0) break;
      cur = t.seqs[ps].parent_dp;
      if (++d > nd)
        throw NotATree("tfdp: cycle through decision point " + std::to_string(j));
    }
    depth[j] = d;
  }
  t.dp_bottom_up.resize(nd);
  std::iota(t.dp_bottom_up.begin(), t.dp_bottom_up.end(), 0);
  std::stable_sort(t.dp_bottom_up.begin(), t.dp_bottom_up.end(),
                   [&](int a, int b) { return depth[a] > depth[b]; });
  t.validated = true;
  return t;
}

namespace {

void enumerate_rec(const TreeFormDecisionProblem& t, std::vector<int>& active,
                   std::vector<Rat>& x, std::vector<std::vector<Rat>>& out) {
  if (active.empty()) {
    out.push_back(x);
    return;
  }
  int j = active.back();
  active.pop_back();
  const auto& dp = t.dps[j];
  for (int s : dp.child_seq) {
    x[s] = Rat(1);
    std::size_t mark = active.size();
    for (int cj : t.seqs[s].child_dps) active.push_back(cj);
    enumerate_rec(t, active, x, out);
    active.resize(mark);
    x[s] = Rat(0);
  }
  active.push_back(j);
}

}  // namespace

std::vector<std::vector<Rat>> enumerate_vertices(const TreeFormDecisionProblem& t) {
  std::vector<Rat> x(t.num_sequences(), Rat(0));
  x[0] = Rat(1);
  std::vector<int> active = t.seqs[0].child_dps;
  std::vector<std::vector<Rat>> out;
  enumerate_rec(t, active, x, out);
  return out;
}

bool sequence_form_feasible(const TreeFormDecisionProblem& t,
                            const std::vector<EpsPoly>& x) {
  if (x.size() != static_cast<std::size_t>(t.num_sequences())) return false;
  if (x[0] != EpsPoly(Rat(1))) return false;
  for (const auto& dp : t.dps) {
    EpsPoly sum;
    for (int s : dp.child_seq) sum += x[s];
    if (sum != x[dp.parent_seq]) return false;
  }
  return true;
}

namespace {

// Bottom-up continuation values: for each decision point, the lex-best
// action and its value u[ja] + children values.
struct ValuePass {
  std::vector<EpsPoly> best_value;  // per decision point
  std::vector<int> best_action;
  std::vector<EpsPoly> seq_value;   // continuation value of each sequence
};

ValuePass value_pass(const TreeFormDecisionProblem& t,
                     const std::vector<EpsPoly>& u) {
  ValuePass v;
  v.best_value.resize(t.num_decision_points());
  v.best_action.assign(t.num_decision_points(), 0);
  v.seq_value.resize(t.num_sequences());
  for (int j : t.dp_bottom_up) {
    const auto& dp = t.dps[j];
    for (int a = 0; a < static_cast<int>(dp.child_seq.size()); ++a) {
      int s = dp.child_seq[a];
      EpsPoly val = u[s];
      for (int cj : t.seqs[s].child_dps) val += v.best_value[cj];
      v.seq_value[s] = std::move(val);
      if (a == 0 || lex_greater(v.seq_value[s], v.best_value[j])) {
        v.best_value[j] = v.seq_value[s];
        v.best_action[j] = a;
      }
    }
  }
  return v;
}

// Fills the best pure plan below sequence s into x (0/1 entries).
void assemble_best(const TreeFormDecisionProblem& t, const ValuePass& v, int s,
                   std::vector<Rat>& x) {
  for (int j : t.seqs[s].child_dps) {
    int cs = t.dps[j].child_seq[v.best_action[j]];
    x[cs] = Rat(1);
    assemble_best(t, v, cs, x);
  }
}

void zero_subtree(const TreeFormDecisionProblem& t, int s, std::vector<Rat>& x) {
  for (int j : t.seqs[s].child_dps)
    for (int cs : t.dps[j].child_seq) {
      x[cs] = Rat(0);
      zero_subtree(t, cs, x);
    }
}

EpsPoly inner(const std::vector<EpsPoly>& u, const std::vector<Rat>& x) {
  EpsPoly v;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (!x[i].is_zero()) v += x[i] * u[i];
  return v;
}

// Sequences ordered root-first by tree depth.
std::vector<int> sequences_top_down(const TreeFormDecisionProblem& t) {
  std::vector<int> depth(t.num_sequences(), 0);
  std::vector<int> order(t.num_sequences());
  std::iota(order.begin(), order.end(), 0);
  for (int s = 1; s < t.num_sequences(); ++s) {
    int j = t.seqs[s].parent_dp;
    depth[s] = depth[t.dps[j].parent_seq] + 1;
  }
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return depth[a] < depth[b]; });
  return order;
}

}  // namespace

std::vector<EpsPoly> efpe_best_response(const TreeFormDecisionProblem& t,
                                        const std::vector<EpsPoly>& u) {
  std::vector<EpsPoly> ell(t.num_sequences(), EpsPoly::eps());
  return lower_bound_best_response(t, u, ell);
}

std::vector<EpsPoly> lower_bound_best_response(const TreeFormDecisionProblem& t,
                                               const std::vector<EpsPoly>& u,
                                               const std::vector<EpsPoly>& ell) {
  // Bottom-up: each action's value folds in its own tremble allocation.
  std::vector<EpsPoly> dp_value(t.num_decision_points());
  std::vector<int> dp_best(t.num_decision_points(), 0);
  std::vector<EpsPoly> seq_value(t.num_sequences());
  for (int j : t.dp_bottom_up) {
    const auto& dp = t.dps[j];
    const int m = static_cast<int>(dp.child_seq.size());
    EpsPoly others_sum;  // sum over non-best actions of ell * value
    // First compute each action's continuation value.
    for (int a = 0; a < m; ++a) {
      int s = dp.child_seq[a];
      EpsPoly val = u[s];
      for (int cj : t.seqs[s].child_dps) val += dp_value[cj];
      seq_value[s] = std::move(val);
    }
    int best = 0;
    for (int a = 1; a < m; ++a)
      if (lex_greater(seq_value[dp.child_seq[a]], seq_value[dp.child_seq[best]]))
        best = a;
    dp_best[j] = best;
    EpsPoly top(Rat(1));
    for (int a = 0; a < m; ++a)
      if (a != best) top -= ell[dp.child_seq[a]];
    EpsPoly total = top * seq_value[dp.child_seq[best]];
    for (int a = 0; a < m; ++a)
      if (a != best) total += ell[dp.child_seq[a]] * seq_value[dp.child_seq[a]];
    dp_value[j] = std::move(total);
  }
  // Top-down assembly of realization probabilities.
  std::vector<EpsPoly> x(t.num_sequences());
  x[0] = EpsPoly(Rat(1));
  for (int s : sequences_top_down(t)) {
    for (int j : t.seqs[s].child_dps) {
      const auto& dp = t.dps[j];
      const int m = static_cast<int>(dp.child_seq.size());
      EpsPoly top(Rat(1));
      for (int a = 0; a < m; ++a)
        if (a != dp_best[j]) top -= ell[dp.child_seq[a]];
      for (int a = 0; a < m; ++a) {
        int cs = dp.child_seq[a];
        x[cs] = x[s] * (a == dp_best[j] ? top : ell[cs]);
      }
    }
  }
  return x;
}

SpanningSet optimal_spanning_set(const TreeFormDecisionProblem& t,
                                 const std::vector<EpsPoly>& u) {
  ValuePass v = value_pass(t, u);
  const int ns = t.num_sequences();
  std::vector<std::vector<Rat>> y(ns);

  // y^root: pure best response.
  y[0].assign(ns, Rat(0));
  y[0][0] = Rat(1);
  assemble_best(t, v, 0, y[0]);

  // y^{ja}: copy of y^{p_j} with decision point j switched to a and the new
  // subtree re-optimized.
  for (int s : sequences_top_down(t)) {
    if (s == 0) continue;
    int j = t.seqs[s].parent_dp;
    int ps = t.dps[j].parent_seq;
    y[s] = y[ps];
    for (int cs : t.dps[j].child_seq) {
      y[s][cs] = Rat(0);
      zero_subtree(t, cs, y[s]);
    }
    y[s][s] = Rat(1);
    assemble_best(t, v, s, y[s]);
  }

  SpanningSet set;
  set.utility = u;
  std::vector<int> order(ns);
  std::iota(order.begin(), order.end(), 0);
  std::vector<EpsPoly> vals(ns);
  for (int s = 0; s < ns; ++s) vals[s] = inner(u, y[s]);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return lex_greater(vals[a], vals[b]);
  });
  // Distinct vertices only: duplicates add nothing to the affine hulls and
  // would shift the eps powers of the proper best response.
  for (int s : order) {
    if (std::find(set.members.begin(), set.members.end(), y[s]) !=
        set.members.end())
      continue;
    set.members.push_back(std::move(y[s]));
    set.values.push_back(std::move(vals[s]));
  }
  return set;
}

SpanningSet optimal_spanning_set(const TreeFormDecisionProblem& t,
                                 const std::vector<Rat>& u) {
  std::vector<EpsPoly> ue;
  ue.reserve(u.size());
  for (const Rat& r : u) ue.emplace_back(r);
  return optimal_spanning_set(t, ue);
}

std::vector<EpsPoly> proper_best_response(const SpanningSet& s) {
  const std::size_t dim = s.members.front().size();
  std::vector<EpsPoly> x(dim);
  for (std::size_t c = 0; c < dim; ++c) x[c] = EpsPoly(s.members[0][c]);
  for (std::size_t i = 1; i < s.members.size(); ++i) {
    EpsPoly e = EpsPoly::eps(i);
    for (std::size_t c = 0; c < dim; ++c) {
      Rat diff = s.members[i][c] - s.members[0][c];
      if (!diff.is_zero()) x[c] += diff * e;
    }
  }
  return x;
}

std::vector<EpsPoly> efg_utility_vector(const EfgPotentialGame& g, int player,
                                        const std::vector<std::vector<EpsPoly>>& x) {
  int deg = 1;
  for (const auto& xs : x)
    for (const EpsPoly& q : xs) deg = std::max(deg, q.degree());
  auto probe = x;
  const int d = g.trees[player].num_sequences();
  std::vector<EpsPoly> zero(d);
  probe[player] = zero;
  EpsPoly base = g.potential.eval_symbolic(probe, deg);
  std::vector<EpsPoly> u(d);
  for (int s = 0; s < d; ++s) {
    probe[player][s] = EpsPoly(Rat(1));
    u[s] = g.potential.eval_symbolic(probe, deg) - base;
    probe[player][s] = EpsPoly();
  }
  return u;
}

EfgDynamicsResult run_efg_dynamics(const EfgPotentialGame& g,
                                   const EfgDynamicsConfig& cfg) {
  const int n = static_cast<int>(g.trees.size());
  std::vector<int> order = cfg.player_order;
  if (order.empty()) {
    order.resize(n);
    std::iota(order.begin(), order.end(), 0);
  }

  auto respond = [&](int i, const std::vector<EpsPoly>& u) {
    if (cfg.scheme == EfgScheme::NfProper)
      return proper_best_response(optimal_spanning_set(g.trees[i], u));
    return efpe_best_response(g.trees[i], u);
  };

  EfgDynamicsResult res;
  res.profile.resize(n);
  for (int i = 0; i < n; ++i) {
    std::vector<EpsPoly> bias(g.trees[i].num_sequences());
    if (cfg.start_bias) bias = (*cfg.start_bias)[i];
    res.profile[i] = respond(i, bias);
  }

  auto value_of = [](const std::vector<EpsPoly>& u,
                     const std::vector<EpsPoly>& x) {
    EpsPoly v;
    for (std::size_t s = 0; s < u.size(); ++s) v += u[s] * x[s];
    return v;
  };

  bool moved = true;
  while (moved) {
    moved = false;
    ++res.sweeps;
    for (int i : order) {
      if (cfg.max_steps && res.steps >= *cfg.max_steps) {
        res.converged = false;
        return res;
      }
      auto u = efg_utility_vector(g, i, res.profile);
      auto cand = respond(i, u);
      if (lex_greater(value_of(u, cand), value_of(u, res.profile[i]))) {
        res.profile[i] = std::move(cand);
        ++res.steps;
        moved = true;
        if (cfg.trace) {
          int deg = 1;
          for (const auto& xs : res.profile)
            for (const EpsPoly& q : xs) deg = std::max(deg, q.degree());
          res.trace.push_back(
              EfgTraceStep{i, g.potential.eval_symbolic(res.profile, deg)});
        }
      }
    }
  }
  return res;
}

}  // namespace refinery
