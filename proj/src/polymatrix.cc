#include "refinery/polymatrix.h"

#include <algorithm>
#include <numeric>

namespace refinery {

bool PolymatrixGame::identical_interest() const {
  for (const auto& e : edges) {
    const std::size_t mi = e.p_ij.size(), mj = e.p_ij.empty() ? 0 : e.p_ij[0].size();
    if (e.p_ji.size() != mj) return false;
    for (std::size_t a = 0; a < mi; ++a)
      for (std::size_t b = 0; b < mj; ++b)
        if (e.p_ji[b][a] != e.p_ij[a][b]) return false;
  }
  return true;
}

Rat PolymatrixGame::utility(int player, const std::vector<std::vector<Rat>>& x) const {
  Rat u(0);
  for (const auto& e : edges) {
    if (e.i == player) {
      for (std::size_t a = 0; a < e.p_ij.size(); ++a)
        for (std::size_t b = 0; b < e.p_ij[a].size(); ++b)
          u += x[e.i][a] * e.p_ij[a][b] * x[e.j][b];
    } else if (e.j == player) {
      for (std::size_t a = 0; a < e.p_ji.size(); ++a)
        for (std::size_t b = 0; b < e.p_ji[a].size(); ++b)
          u += x[e.j][a] * e.p_ji[a][b] * x[e.i][b];
    }
  }
  return u;
}

Rat PolymatrixGame::potential_value(const std::vector<std::vector<Rat>>& x) const {
  if (potential) return potential->eval_rational(x);
  // Identical interest: the common utility plays the role of the potential.
  Rat phi(0);
  for (const auto& e : edges)
    for (std::size_t a = 0; a < e.p_ij.size(); ++a)
      for (std::size_t b = 0; b < e.p_ij[a].size(); ++b)
        phi += x[e.i][a] * e.p_ij[a][b] * x[e.j][b];
  return phi;
}

std::vector<std::vector<Rat>> PolymatrixGame::potential_gradient(
    const std::vector<std::vector<Rat>>& x) const {
  std::vector<std::vector<Rat>> grad(n);
  for (int i = 0; i < n; ++i) grad[i].assign(actions[i], Rat(0));
  if (!edges.empty()) {
    // In a potential game the i-block gradient of Phi equals that of u_i.
    for (const auto& e : edges) {
      for (std::size_t a = 0; a < e.p_ij.size(); ++a)
        for (std::size_t b = 0; b < e.p_ij[a].size(); ++b)
          grad[e.i][a] += e.p_ij[a][b] * x[e.j][b];
      for (std::size_t a = 0; a < e.p_ji.size(); ++a)
        for (std::size_t b = 0; b < e.p_ji[a].size(); ++b)
          grad[e.j][a] += e.p_ji[a][b] * x[e.i][b];
    }
    return grad;
  }
  if (!potential) return grad;
  auto probe = x;
  for (int i = 0; i < n; ++i) {
    probe[i].assign(actions[i], Rat(0));
    Rat base = potential->eval_rational(probe);
    for (int a = 0; a < actions[i]; ++a) {
      probe[i][a] = Rat(1);
      grad[i][a] = potential->eval_rational(probe) - base;
      probe[i][a] = Rat(0);
    }
    probe[i] = x[i];
  }
  return grad;
}

Rat PolymatrixGame::smoothness_bound() const {
  Rat sum(0);
  int max_m = 1;
  for (int m : actions) max_m = std::max(max_m, m);
  for (const auto& e : edges) {
    Rat m(0);
    for (const auto& row : e.p_ij)
      for (const Rat& v : row) m = max(m, v.abs());
    for (const auto& row : e.p_ji)
      for (const Rat& v : row) m = max(m, v.abs());
    sum += m;
  }
  return max(Rat(1), Rat(2 * max_m) * sum);
}

std::vector<Rat> project_truncated_simplex(const std::vector<Rat>& v,
                                           const Rat& eps) {
  const int m = static_cast<int>(v.size());
  Rat total = Rat(1) - Rat(m) * eps;
  if (total.sign() < 0)
    throw InfeasibleFloor("project_truncated_simplex: m * eps > 1");
  if (total.is_zero()) return std::vector<Rat>(m, eps);
  // Shift by the floor and project onto the scaled simplex {y >= 0, sum = T}.
  std::vector<Rat> u;
  u.reserve(m);
  for (const Rat& vi : v) u.push_back(vi - eps);
  std::vector<Rat> sorted = u;
  std::sort(sorted.begin(), sorted.end(), [](const Rat& a, const Rat& b) { return b < a; });
  Rat cum(0), theta(0);
  int rho = 0;
  Rat run(0);
  for (int k = 0; k < m; ++k) {
    run += sorted[k];
    Rat cand = (run - total) / Rat(k + 1);
    if (sorted[k] > cand) {
      rho = k + 1;
      cum = run;
    }
  }
  theta = (cum - total) / Rat(rho);
  std::vector<Rat> out(m);
  for (int i = 0; i < m; ++i) {
    Rat y = u[i] - theta;
    out[i] = (y.sign() > 0 ? y : Rat(0)) + eps;
  }
  return out;
}

namespace {

std::vector<Rat> grid_round_feasible(const std::vector<Rat>& x, const Rat& eps,
                                     long grid_bits) {
  mpz_class scale = Rat::pow2(grid_bits).num() * eps.den();
  std::vector<Rat> r(x.size());
  int anchor = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mpq_class excess = (x[i] - eps).mpq() * scale;
    mpz_class fl = excess.get_num() / excess.get_den();  // >= 0
    r[i] = Rat(fl, scale) + eps;
    if (x[i] > x[anchor]) anchor = static_cast<int>(i);
  }
  Rat deficit(1);
  for (const Rat& ri : r) deficit -= ri;
  r[anchor] += deficit;
  return r;
}

}  // namespace

Rat stationarity_gap(const PolymatrixGame& g,
                     const std::vector<std::vector<Rat>>& x, const Rat& eps_num) {
  auto grad = g.potential_gradient(x);
  Rat gap(0);
  for (int i = 0; i < g.n; ++i) {
    const int m = g.actions[i];
    Rat best = grad[i][0], sum(0), cur(0);
    for (int a = 0; a < m; ++a) {
      best = max(best, grad[i][a]);
      sum += grad[i][a];
      cur += grad[i][a] * x[i][a];
    }
    Rat top = eps_num * sum + (Rat(1) - Rat(m) * eps_num) * best;
    gap = max(gap, top - cur);
  }
  return gap;
}

GdState run_gd(const PolymatrixGame& g, const std::vector<std::vector<Rat>>& start,
               const Rat& eps_num, const Rat& eta, long iters,
               const GdOptions& opts) {
  GdState st;
  st.x = start;
  if (opts.record_trajectory) st.trajectory.push_back(st.x);
  Rat phi = g.potential_value(st.x);
  for (long t = 0; t < iters; ++t) {
    auto grad = g.potential_gradient(st.x);
    std::vector<std::vector<Rat>> next(g.n);
    for (int i = 0; i < g.n; ++i) {
      std::vector<Rat> v(g.actions[i]);
      for (int a = 0; a < g.actions[i]; ++a)
        v[a] = st.x[i][a] + eta * grad[i][a];
      next[i] = project_truncated_simplex(v, eps_num);
    }
    Rat phi_next = g.potential_value(next);
    if (phi_next < phi)
      throw StepSizeTooLarge("run_gd: potential decreased; eta too large for L");
    if (opts.grid_bits > 0) {
      std::vector<std::vector<Rat>> rounded(g.n);
      for (int i = 0; i < g.n; ++i)
        rounded[i] = grid_round_feasible(next[i], eps_num, opts.grid_bits);
      Rat phi_rounded = g.potential_value(rounded);
      if (phi_rounded >= phi) {
        next = std::move(rounded);
        phi_next = phi_rounded;
      }
    }
    st.x = std::move(next);
    phi = phi_next;
    ++st.iters;
    if (opts.record_trajectory) {
      st.trajectory.push_back(st.x);
      st.potential_trace.push_back(phi);
    }
  }
  st.gap = stationarity_gap(g, st.x, eps_num);
  return st;
}

SymbolicGdResult run_symbolic_gd(const PolymatrixGame& g,
                                 const std::vector<std::vector<EpsPoly>>& start,
                                 const Rat& eta, long iters) {
  for (int m : g.actions)
    if (m != 2)
      throw UnsupportedDimension("run_symbolic_gd: 2-action players only");
  SymbolicGdResult res;
  res.x = start;
  const Rat half(1, 2);
  for (long t = 0; t < iters; ++t) {
    // Gradient from the edge matrices, eps-polynomial valued.
    std::vector<std::vector<EpsPoly>> grad(g.n, std::vector<EpsPoly>(2));
    for (const auto& e : g.edges) {
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          if (!e.p_ij[a][b].is_zero())
            grad[e.i][a] += e.p_ij[a][b] * res.x[e.j][b];
          if (!e.p_ji[a][b].is_zero())
            grad[e.j][a] += e.p_ji[a][b] * res.x[e.i][b];
        }
    }
    for (int i = 0; i < g.n; ++i) {
      EpsPoly v0 = res.x[i][0] + eta * grad[i][0];
      EpsPoly v1 = res.x[i][1] + eta * grad[i][1];
      // Line projection onto sum = 1, then the small-eps floor branch.
      EpsPoly shift = half * (v0 + v1 - EpsPoly(Rat(1)));
      v0 -= shift;
      v1 -= shift;
      EpsPoly floor = EpsPoly::eps();
      if (lex_less(v0, floor)) {
        v0 = floor;
        v1 = EpsPoly(Rat(1)) - floor;
      } else if (lex_less(v1, floor)) {
        v1 = floor;
        v0 = EpsPoly(Rat(1)) - floor;
      }
      res.x[i][0] = std::move(v0);
      res.x[i][1] = std::move(v1);
    }
  }
  for (int i = 0; i < g.n; ++i)
    res.limit_profile.push_back(res.x[i][1].at_zero() > res.x[i][0].at_zero() ? 1 : 0);
  return res;
}

}  // namespace refinery
