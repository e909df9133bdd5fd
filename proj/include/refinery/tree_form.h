#pragma once

#include <optional>
#include <string>
#include <vector>

#include "refinery/circuits.h"
#include "refinery/eps_poly.h"

namespace refinery {

struct NotATree : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct OrphanSequence : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct StepCapHit : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One player's tree-form decision problem. Nodes alternate between decision
// points and sequences; the root is sequence 0. Several decision points may
// follow the same sequence (independent sub-decisions).
struct TreeFormDecisionProblem {
  struct DecisionPoint {
    int parent_seq = -1;
    std::vector<std::string> actions;
    std::vector<int> child_seq;  // one sequence per action
  };
  struct Sequence {
    int parent_dp = -1;  // -1 for the root
    int action = -1;
    std::vector<int> child_dps;
  };

  std::vector<DecisionPoint> dps;
  std::vector<Sequence> seqs;
  std::vector<int> dp_bottom_up;  // leaves first; filled by validate_tfdp
  bool validated = false;

  int num_sequences() const { return static_cast<int>(seqs.size()); }
  int num_decision_points() const { return static_cast<int>(dps.size()); }
};

// Appends decision points; each action allocates the next sequence id.
class TfdpBuilder {
 public:
  TfdpBuilder();
  // Returns the new decision point's id.
  int decision_point(int parent_seq, std::vector<std::string> actions);
  int decision_point(int parent_seq, int num_actions);
  int seq_of(int dp, int action) const { return t_.dps[dp].child_seq[action]; }
  TreeFormDecisionProblem build() &&;

 private:
  TreeFormDecisionProblem t_;
};

// Checks the rooted-tree invariants and fills traversal orders. Throws
// NotATree or OrphanSequence naming the offending node.
TreeFormDecisionProblem validate_tfdp(TreeFormDecisionProblem t);

// All vertices of the sequence-form polytope: deterministic reduced plans as
// 0/1 vectors indexed by sequence.
std::vector<std::vector<Rat>> enumerate_vertices(const TreeFormDecisionProblem& t);

// Exact sequence-form feasibility (x[root] = 1 and flow conservation), as
// polynomial identities.
bool sequence_form_feasible(const TreeFormDecisionProblem& t,
                            const std::vector<EpsPoly>& x);

// Best response in the EFPE-perturbed sequence form (x[ja] >= eps x[p_j]):
// one bottom-up pass; the best action at each decision point receives local
// probability 1-(|A_j|-1)eps, the others eps. Ties to the lowest index.
std::vector<EpsPoly> efpe_best_response(const TreeFormDecisionProblem& t,
                                        const std::vector<EpsPoly>& u);

// Best response under a configurable per-sequence local lower bound
// ell[sigma] (the QPE hook): the best action at j receives local probability
// 1 - sum of the other actions' bounds, the others ell[ja].
std::vector<EpsPoly> lower_bound_best_response(const TreeFormDecisionProblem& t,
                                               const std::vector<EpsPoly>& u,
                                               const std::vector<EpsPoly>& ell);

// Ordered vertex list (best first under <u, .>) with one member per
// sequence: y^root is a pure best response and y^{ja} is the best vertex
// playing to ja that agrees with y^{p_j} outside decision point j.
struct SpanningSet {
  std::vector<std::vector<Rat>> members;  // descending by value
  std::vector<EpsPoly> values;            // <u, member>
  std::vector<EpsPoly> utility;           // the u it was built for
};

SpanningSet optimal_spanning_set(const TreeFormDecisionProblem& t,
                                 const std::vector<EpsPoly>& u);
SpanningSet optimal_spanning_set(const TreeFormDecisionProblem& t,
                                 const std::vector<Rat>& u);

// x0 + sum_i eps^i (x_i - x0) over the sorted spanning set.
std::vector<EpsPoly> proper_best_response(const SpanningSet& s);

// n tree-form decision problems with a multilinear potential over the
// concatenated sequence coordinates (player blocks disjoint).
struct EfgPotentialGame {
  std::vector<TreeFormDecisionProblem> trees;
  MultilinearCircuit potential;
};

enum class EfgScheme { NfProper, Efpe };

struct EfgDynamicsConfig {
  EfgScheme scheme = EfgScheme::NfProper;
  std::vector<int> player_order;  // empty -> 0..n-1
  std::optional<long> max_steps;
  bool trace = false;
  // Seed utilities used to build the initial perturbed responses; zero
  // vectors (lowest-index plans) when absent.
  std::optional<std::vector<std::vector<EpsPoly>>> start_bias;
};

struct EfgTraceStep {
  int player = 0;
  EpsPoly potential;
};

struct EfgDynamicsResult {
  std::vector<std::vector<EpsPoly>> profile;
  long steps = 0;
  long sweeps = 0;
  bool converged = true;
  std::vector<EfgTraceStep> trace;
};

// Symbolic utility vector of one player induced by the others' strategies:
// u[sigma] = Phi(e_sigma, x_-i) - Phi(0, x_-i).
std::vector<EpsPoly> efg_utility_vector(const EfgPotentialGame& g, int player,
                                        const std::vector<std::vector<EpsPoly>>& x);

// Round-robin symbolic proper (or EFPE) best-response dynamics; a player
// moves only on strict lexicographic improvement.
EfgDynamicsResult run_efg_dynamics(const EfgPotentialGame& g,
                                   const EfgDynamicsConfig& cfg);

}  // namespace refinery
