#pragma once

#include <optional>
#include <vector>

#include "refinery/circuits.h"
#include "refinery/eps_poly.h"

namespace refinery {

struct InfeasibleFloor : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct StepSizeTooLarge : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct UnsupportedDimension : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Graph game with a payoff matrix per directed pair on each edge.
struct PolymatrixGame {
  struct Edge {
    int i = 0, j = 0;
    std::vector<std::vector<Rat>> p_ij;  // |A_i| x |A_j|, payoff to i
    std::vector<std::vector<Rat>> p_ji;  // |A_j| x |A_i|, payoff to j
  };
  int n = 0;
  std::vector<int> actions;
  std::vector<Edge> edges;
  // Potential over the joint mixed profile; synthesized as the common
  // utility for identical-interest input (p_ji = p_ij^T everywhere).
  std::optional<MultilinearCircuit> potential;

  bool identical_interest() const;
  // Gradient of the potential at x, one vector per player. Uses the circuit
  // when present, else the identical-interest polymatrix formula.
  std::vector<std::vector<Rat>> potential_gradient(
      const std::vector<std::vector<Rat>>& x) const;
  Rat potential_value(const std::vector<std::vector<Rat>>& x) const;
  Rat utility(int player, const std::vector<std::vector<Rat>>& x) const;
  // Safe smoothness bound from matrix norms.
  Rat smoothness_bound() const;
};

// Euclidean projection onto {x : x >= eps, sum x = 1} by sort-based
// waterfilling with the eps floor.
std::vector<Rat> project_truncated_simplex(const std::vector<Rat>& v,
                                           const Rat& eps);

struct GdOptions {
  // Round iterates to a fixed denominator grid (0 disables). Keeps
  // coefficient growth bounded across iterations; a rounded step is kept
  // only when the exact potential does not decrease.
  long grid_bits = 48;
  bool record_trajectory = false;
};

struct GdState {
  std::vector<std::vector<Rat>> x;
  long iters = 0;
  Rat gap;                       // first-order stationarity gap
  std::vector<Rat> potential_trace;
  std::vector<std::vector<std::vector<Rat>>> trajectory;
};

// Projected gradient ascent on the perturbed product polytope,
// x <- Proj(x + eta grad Phi(x)). Requires eta <= 1/L.
GdState run_gd(const PolymatrixGame& g, const std::vector<std::vector<Rat>>& start,
               const Rat& eps_num, const Rat& eta, long iters,
               const GdOptions& opts = {});

// The reported gap recomputed by direct linear maximization over the
// perturbed simplices at the final point.
Rat stationarity_gap(const PolymatrixGame& g,
                     const std::vector<std::vector<Rat>>& x, const Rat& eps_num);

struct SymbolicGdResult {
  std::vector<std::vector<EpsPoly>> x;
  std::vector<int> limit_profile;  // favored action per player at eps -> 0
};

// Symbolic projected gradient step with the small-eps branch of the
// projection; 2-action players only.
SymbolicGdResult run_symbolic_gd(const PolymatrixGame& g,
                                 const std::vector<std::vector<EpsPoly>>& start,
                                 const Rat& eta, long iters);

}  // namespace refinery
