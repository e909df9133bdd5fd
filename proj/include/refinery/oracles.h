#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "refinery/br_dynamics.h"
#include "refinery/gamegen.h"
#include "refinery/games.h"

namespace refinery {

struct NotFullyMixed : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct TooManyVertices : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Fully mixed rational strategy profile and the eps it is checked against.
struct NumericProfile {
  std::vector<std::vector<Rat>> x;
  Rat eps;
};

struct CheckResult {
  bool pass = true;
  int player = -1;
  int action = -1;      // a_i of the witness
  int better = -1;      // a_i'
  Rat eps_used;
};

// Independent simplex-expectation evaluator: full tensor sum over opponents'
// pure profiles (never routed through circuit evaluation).
Rat expected_utility_bruteforce(const TableGame& g, int player, int action,
                                const std::vector<std::vector<Rat>>& x);

// u_i(a_i, x_-i) < u_i(a_i', x_-i)  =>  x_i(a_i) <= eps, exhaustively over
// ordered action pairs, exact arithmetic.
CheckResult check_eps_perfect(const TableGame& g, const NumericProfile& p);
// Ratio variant: x_i(a_i) <= eps * x_i(a_i').
CheckResult check_eps_proper(const TableGame& g, const NumericProfile& p);

// Same checks against a caller-supplied expected-utility function
// (player, action) -> u_i(action, x_-i), for games too large to tabulate.
using ExpectedUtilityFn = std::function<Rat(int player, int action)>;
CheckResult check_eps_perfect_fn(const std::vector<int>& actions,
                                 const ExpectedUtilityFn& u,
                                 const NumericProfile& p);
CheckResult check_eps_proper_fn(const std::vector<int>& actions,
                                const ExpectedUtilityFn& u,
                                const NumericProfile& p);

// Numeric embedding of an eps-pure profile; the permutahedron embedding is
// normalized into a distribution.
NumericProfile embed_numeric(const EpsPureProfile& p, PerturbScheme scheme,
                             const std::vector<int>& actions, const Rat& eps);

struct KmResponse {
  std::vector<std::size_t> order;   // vertex indices, best first
  std::vector<EpsPoly> point;       // sum_i eps^i v_{order[i]}
  std::vector<Rat> point_numeric;   // evaluated at the given eps
};

// Sorts vertices by <u, .> descending (index tie-break) and returns the
// fully sorted Kohlberg-Mertens response.
KmResponse brute_proper_br(const std::vector<std::vector<Rat>>& vertices,
                           const std::vector<Rat>& u, const Rat& eps);

// Smallest power of eps with a nonzero coefficient; -1 for the zero poly.
int leading_exponent(const EpsPoly& p);

// Symbolic perturbed potential of an explicit game by direct expectation
// over pure profiles (embedding-weight polynomial products; independent of
// the circuit + interpolation path).
EpsPoly brute_perturbed_potential(const TableGame& g, const EpsPureProfile& p,
                                  PerturbScheme scheme);

// Exhaustive cmp_lex argmax of the perturbed potential.
EpsPureProfile brute_max_perturbed_potential(const TableGame& g,
                                             PerturbScheme scheme,
                                             std::uint64_t cap = 1000000);

// --- Proper-best-response certification -----------------------------------

struct ProperBrCertificate {
  bool pass = false;
  Rat ratio;          // the eps of the dominance condition that certified
  std::string reason; // failure description
};

// Reconstructs a full-support vertex distribution for the point
// x0 + sum_i eps_hat^i (x_i - x0) evaluated at the numeric eps_hat, following
// the spanning-set lemma's explicit lambda assignment, and checks the
// dominance condition exactly. Ratios 1/2, 3/4, ... are tried in turn.
ProperBrCertificate certify_proper_br(
    const std::vector<std::vector<Rat>>& vertices, const std::vector<Rat>& u,
    const std::vector<std::vector<Rat>>& sorted_spanning,
    const std::vector<Rat>& point, const Rat& eps_hat);

// --- MaxCut structured evaluators (oracle side) ----------------------------

// Expected utility of the triplet game at an independent product profile
// given per-player b-probabilities, via per-vertex outcome probabilities and
// the non-unanimity product expansion. Exact.
Rat maxcut_triplet_expected_utility(const WeightedGraph& g,
                                    const std::vector<Rat>& b_prob);

// Same value as a polynomial in eps for a box-perturbed favored profile
// (favored[p] = 0 means action b).
EpsPoly maxcut_triplet_perturbed_potential(const WeightedGraph& g,
                                           const std::vector<int>& favored);

// Majority cut induced by a triplet-game profile.
std::vector<int> maxcut_majority_cut(const WeightedGraph& g,
                                     const std::vector<int>& favored);

Rat cut_weight(const WeightedGraph& g, const std::vector<int>& side);
bool is_flip_local_optimal(const WeightedGraph& g, const std::vector<int>& side);

// Unperturbed triplet-game utility of a pure profile.
Rat maxcut_triplet_pure_utility(const WeightedGraph& g,
                                const std::vector<int>& favored);

}  // namespace refinery
