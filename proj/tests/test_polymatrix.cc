#include <doctest.h>

#include <algorithm>

#include "refinery/gamegen.h"
#include "refinery/polymatrix.h"
#include "refinery/rng.h"

using namespace refinery;

namespace {

Rat sq_dist(const std::vector<Rat>& a, const std::vector<Rat>& b) {
  Rat d(0);
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] - b[i]) * (a[i] - b[i]);
  return d;
}

// Exhaustive active-set projection oracle: try every subset of clamped
// coordinates, solve for theta, keep the KKT-feasible candidate.
std::vector<Rat> projection_oracle(const std::vector<Rat>& v, const Rat& eps) {
  const int m = static_cast<int>(v.size());
  std::optional<std::vector<Rat>> best;
  Rat best_d(0);
  for (int mask = 0; mask < (1 << m); ++mask) {
    int free_count = 0;
    Rat free_sum(0);
    for (int i = 0; i < m; ++i)
      if (!(mask >> i & 1)) {
        ++free_count;
        free_sum += v[i];
      }
    if (free_count == 0) continue;
    // sum_i (v_i - theta) + clamped * eps = 1
    Rat theta = (free_sum - (Rat(1) - Rat(m - free_count) * eps)) / Rat(free_count);
    std::vector<Rat> x(m);
    bool ok = true;
    for (int i = 0; i < m; ++i) {
      if (mask >> i & 1) {
        x[i] = eps;
        if (v[i] - theta > eps) ok = false;  // KKT: clamped only if below floor
      } else {
        x[i] = v[i] - theta;
        if (x[i] < eps) ok = false;
      }
    }
    if (!ok) continue;
    Rat d = sq_dist(x, v);
    if (!best || d < best_d) {
      best = x;
      best_d = d;
    }
  }
  return *best;
}

}  // namespace

TEST_CASE("projection basics") {
  std::vector<Rat> feasible{Rat(3, 10), Rat(7, 10)};
  CHECK(project_truncated_simplex(feasible, Rat(1, 10)) == feasible);
  std::vector<Rat> v{Rat(2), Rat(0)};
  auto p = project_truncated_simplex(v, Rat(1, 10));
  CHECK(p == std::vector<Rat>{Rat(9, 10), Rat(1, 10)});
  CHECK(project_truncated_simplex(p, Rat(1, 10)) == p);  // idempotent
  CHECK_THROWS_AS(project_truncated_simplex(v, Rat(3, 5)), InfeasibleFloor);
}

TEST_CASE("projection equals the exhaustive active-set argmin") {
  Rng rng(81);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Rat> v;
    for (int i = 0; i < 5; ++i) v.push_back(rng.rat(8, 4));
    Rat eps(1, 20);
    auto fast = project_truncated_simplex(v, eps);
    auto slow = projection_oracle(v, eps);
    CHECK(fast == slow);
    // First-order optimality against sampled feasible points.
    for (int probe = 0; probe < 5; ++probe) {
      std::vector<Rat> y(5, eps);
      int top = static_cast<int>(rng.below(5));
      y[top] = Rat(1) - Rat(4) * eps;
      Rat ip(0);
      for (int i = 0; i < 5; ++i) ip += (v[i] - fast[i]) * (y[i] - fast[i]);
      CHECK(ip <= Rat(0));
    }
  }
}

TEST_CASE("gradient descent on the zero game stays put") {
  PolymatrixGame g;
  g.n = 2;
  g.actions = {2, 2};
  PolymatrixGame::Edge e;
  e.i = 0;
  e.j = 1;
  e.p_ij.assign(2, std::vector<Rat>(2, Rat(0)));
  e.p_ji.assign(2, std::vector<Rat>(2, Rat(0)));
  g.edges.push_back(e);
  std::vector<std::vector<Rat>> start{{Rat(1, 2), Rat(1, 2)}, {Rat(1, 4), Rat(3, 4)}};
  GdState res = run_gd(g, start, Rat(1, 100), Rat(1, 4), 10);
  CHECK(res.x == start);
  CHECK(res.gap == Rat(0));
}

TEST_CASE("monotone ascent inequality holds along unrounded runs") {
  GeneratedGame fig4 = generate(GenSpec::simple(GenSpec::Kind::Fig4RandomGD));
  const PolymatrixGame& g = *fig4.polymatrix;
  Rat eta = Rat(1) / g.smoothness_bound();
  Rat eps(1, 100);
  GdOptions opts;
  opts.grid_bits = 0;  // exact, no rounding
  opts.record_trajectory = true;
  std::vector<std::vector<Rat>> start{{Rat(1, 5), Rat(4, 5)}, {Rat(2, 5), Rat(3, 5)}};
  GdState res = run_gd(g, start, eps, eta, 25, opts);
  for (std::size_t t = 1; t < res.trajectory.size(); ++t) {
    Rat dphi = g.potential_value(res.trajectory[t]) -
               g.potential_value(res.trajectory[t - 1]);
    Rat step(0);
    for (int i = 0; i < g.n; ++i)
      step += sq_dist(res.trajectory[t][i], res.trajectory[t - 1][i]);
    CHECK(dphi >= step / (Rat(2) * eta));
  }
}

TEST_CASE("reported gap equals the direct linear maximization") {
  GeneratedGame fig4 = generate(GenSpec::simple(GenSpec::Kind::Fig4RandomGD));
  const PolymatrixGame& g = *fig4.polymatrix;
  Rat eps(1, 100);
  std::vector<std::vector<Rat>> x{{Rat(3, 5), Rat(2, 5)}, {Rat(1, 2), Rat(1, 2)}};
  Rat gap = stationarity_gap(g, x, eps);
  // Direct maximization: the perturbed simplex's vertices put 1-(m-1)eps on
  // one coordinate and eps on the rest.
  auto grad = g.potential_gradient(x);
  Rat expect(0);
  for (int i = 0; i < g.n; ++i) {
    Rat cur(0);
    for (int a = 0; a < 2; ++a) cur += grad[i][a] * x[i][a];
    for (int top = 0; top < 2; ++top) {
      Rat val(0);
      for (int a = 0; a < 2; ++a)
        val += grad[i][a] * (a == top ? Rat(1) - eps : eps);
      expect = max(expect, val - cur);
    }
  }
  CHECK(gap == expect);
}

TEST_CASE("perturbed descent lands at the perturbed coordination image") {
  GeneratedGame fig4 = generate(GenSpec::simple(GenSpec::Kind::Fig4RandomGD));
  const PolymatrixGame& g = *fig4.polymatrix;
  Rat eps(1, 100);
  Rat eta = Rat(1) / g.smoothness_bound();
  std::vector<std::vector<Rat>> start{{Rat(1, 2), Rat(1, 2)}, {Rat(1, 20), Rat(19, 20)}};
  GdState res = run_gd(g, start, eps, eta, 9000);
  CHECK((res.x[0][0] - Rat(99, 100)).abs() <= Rat(1, 20));
  CHECK((res.x[1][0] - Rat(99, 100)).abs() <= Rat(1, 20));
}

TEST_CASE("symbolic descent reproduces the 3/2 tremble recurrence") {
  GeneratedGame fig6 = generate(GenSpec::simple(GenSpec::Kind::Fig6SymbolicGD));
  const PolymatrixGame& g = *fig6.polymatrix;
  std::vector<std::vector<EpsPoly>> start(2);
  for (int i = 0; i < 2; ++i)
    start[i] = {EpsPoly(Rat(1)) - EpsPoly::eps(), EpsPoly::eps()};

  auto res1 = run_symbolic_gd(g, start, Rat(1), 1);
  CHECK(res1.x[0][0] == EpsPoly::from_coeffs({Rat(1), Rat(-3, 2)}));
  CHECK(res1.x[0][1] == EpsPoly::from_coeffs({Rat(0), Rat(3, 2)}));

  auto res10 = run_symbolic_gd(g, start, Rat(1), 10);
  CHECK(res10.x[0][1] == EpsPoly::from_coeffs({Rat(0), Rat(59049, 1024)}));

  // Closed form eps * (3/2)^t for t <= 30, and the wrong limit profile.
  Rat coeff(1);
  auto cur = start;
  for (int t = 1; t <= 30; ++t) {
    cur = run_symbolic_gd(g, cur, Rat(1), 1).x;
    coeff *= Rat(3, 2);
    CHECK(cur[0][1] == EpsPoly::from_coeffs({Rat(0), coeff}));
    CHECK(cur[1][1] == EpsPoly::from_coeffs({Rat(0), coeff}));
  }
  CHECK(res10.limit_profile == std::vector<int>{0, 0});  // not the perfect (R2, C2)
}

TEST_CASE("symbolic descent on a zero-gradient game stays put") {
  PolymatrixGame g;
  g.n = 2;
  g.actions = {2, 2};
  PolymatrixGame::Edge e;
  e.i = 0;
  e.j = 1;
  e.p_ij.assign(2, std::vector<Rat>(2, Rat(0)));
  e.p_ji.assign(2, std::vector<Rat>(2, Rat(0)));
  g.edges.push_back(e);
  std::vector<std::vector<EpsPoly>> start(2);
  for (int i = 0; i < 2; ++i)
    start[i] = {EpsPoly(Rat(1)) - EpsPoly::eps(), EpsPoly::eps()};
  auto res = run_symbolic_gd(g, start, Rat(1), 5);
  CHECK(res.x == start);
}

TEST_CASE("symbolic descent rejects wide players") {
  PolymatrixGame g;
  g.n = 1;
  g.actions = {3};
  CHECK_THROWS_AS(run_symbolic_gd(g, {{EpsPoly(Rat(1)), EpsPoly(), EpsPoly()}},
                                  Rat(1), 1),
                  UnsupportedDimension);
}
