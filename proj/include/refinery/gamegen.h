#pragma once

#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "refinery/games.h"
#include "refinery/polymatrix.h"
#include "refinery/tree_form.h"

namespace refinery {

struct InvalidParameter : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NoReferenceAvailable : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct WeightedGraph {
  int num_vertices = 0;
  std::vector<std::tuple<int, int, long>> edges;  // (u, v, weight > 0)
};

struct GenSpec {
  enum class Kind {
    Fig1,
    Fig2Myerson,
    Fig3MaxPayoff,
    Fig4RandomGD,
    Fig6SymbolicGD,
    MPChristmas,
    DoubleExp,
    DoubleExp3Player,
    MaxCutTriplet,
    MaxCutEscape,
    TeamBot,
    KnapsackHypercube,
  };
  Kind kind = Kind::Fig1;
  int n = 1;           // DoubleExp, DoubleExp3Player
  WeightedGraph graph; // MaxCutTriplet, MaxCutEscape
  // TeamBot: 3-player team game tensor (adversary = player 2), value r, gap delta.
  std::vector<int> team_actions;
  std::vector<Rat> team_tensor;
  Rat team_r, team_delta;
  // KnapsackHypercube
  std::vector<long> weights;
  long capacity = 0;

  static GenSpec simple(Kind k) { GenSpec s; s.kind = k; return s; }
  static GenSpec double_exp(int n);
  static GenSpec double_exp_3p(int n);
  static GenSpec maxcut_triplet(WeightedGraph g);
  static GenSpec maxcut_escape(WeightedGraph g);
  static GenSpec team_bot(std::vector<int> actions, std::vector<Rat> tensor,
                          Rat r, Rat delta);
  static GenSpec knapsack(std::vector<long> w, long cap);
};

// Two-player zero-sum EFG shipped as trees plus P2's sequence-form payoff
// matrix (u2 = x1^T M x2, u1 = -u2).
struct EfgZeroSum {
  std::vector<TreeFormDecisionProblem> trees;
  std::vector<std::vector<Rat>> p2_payoff;
};

struct KnapsackDemo {
  std::vector<Rat> u;  // (-(W+1/2), -w)
  long count = 0;      // #subsets with <w, z> <= W
};

struct GeneratedGame {
  GenSpec spec;
  std::optional<TableGame> table;
  std::optional<ConcisePotentialGame> concise;
  std::optional<PolymatrixGame> polymatrix;
  std::optional<EfgZeroSum> efg;
  std::optional<KnapsackDemo> knapsack;
  std::vector<int> recommended_order;  // MaxCutEscape player order
};

GeneratedGame generate(const GenSpec& spec);

struct ReferenceEntry {
  std::string refinement;          // "perfect", "proper", "nf-proper"
  std::vector<int> favored;        // pure favored profile, when applicable
  std::string note;
};

struct ReferenceSolutions {
  std::vector<ReferenceEntry> entries;
};

ReferenceSolutions reference_solutions(const GenSpec& spec);

// The perturbed-game equilibrium point of the doubly-exponential family at a
// numeric eps: per-player probability of the first action, in player order
// x_1..x_n, x'_1..x'_n, c, d, t.  x_i = x'_i = max(eps, 1/2^{2^i}), c = eps,
// d = 1/2, t = eps.
std::vector<Rat> double_exp_point(int n, const Rat& eps);

// Hypercube as d independent binary decision points under the root.
TreeFormDecisionProblem make_hypercube_tfdp(int d);

// Single decision point with m actions (simplex polytope).
TreeFormDecisionProblem make_simplex_tfdp(int m);

// Identical-interest triplet game circuit helpers, shared with the tests'
// structured evaluator: majority and non-unanimity probabilities of one
// triplet as polynomials in the members' b-probabilities.
int maxcut_triplet_players(const WeightedGraph& g);
long maxcut_lambda(const WeightedGraph& g);

// Escape-game reward constant M = |V|^2 max_w + 1.
long maxcut_escape_reward(const WeightedGraph& g);

}  // namespace refinery
