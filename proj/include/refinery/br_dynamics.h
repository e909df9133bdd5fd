#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "refinery/games.h"

namespace refinery {

struct EnumerationCapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Termination { Converged, StepCapHit };

struct DynamicsConfig {
  PerturbScheme scheme = PerturbScheme::PerfectBox;
  std::vector<int> player_order;  // empty -> 0..n-1 round robin
  std::optional<long> max_steps;
  bool trace = false;
};

struct TraceStep {
  int player = 0;
  std::vector<int> old_ranks;  // favored action as a singleton, or permutation
  std::vector<int> new_ranks;
  EpsPoly potential;
};

struct DynamicsResult {
  EpsPureProfile final;
  long steps = 0;   // improvement steps
  long sweeps = 0;  // full round-robin passes
  Termination terminated = Termination::Converged;
  std::vector<TraceStep> trace;
};

// Expected utility of every own action against the embedded opponents.
std::vector<EpsPoly> action_utilities(const ConcisePotentialGame& g,
                                      const EpsPureProfile& profile, int player);

struct PerfectBr {
  int action = 0;
  EpsPoly utility;
};
// Argmax over eps-pure deviations under cmp_lex; ties to the lowest index.
PerfectBr symbolic_br_perfect(const ConcisePotentialGame& g,
                              const EpsPureProfile& profile, int player);

struct ProperBr {
  std::vector<int> perm;  // rank per action
  EpsPoly utility;
};
// Sorts the per-action utilities descending under cmp_lex (ties to the lowest
// action index) and assigns rank k to the k-th best action.
ProperBr symbolic_br_proper(const ConcisePotentialGame& g,
                            const EpsPureProfile& profile, int player);

// Round-robin eps-symbolic best-response dynamics; a player moves only on a
// strict lexicographic improvement of their own utility. Converged iff a full
// sweep produces no move.
DynamicsResult run_dynamics(const ConcisePotentialGame& g,
                            const EpsPureProfile& start,
                            const DynamicsConfig& cfg);

// Profile whose perturbed potential is cmp_lex-maximal. PerfectBox ranges
// over pure profiles, Proper over permutation profiles (falling back to
// dynamics from the canonical start when the permutation count exceeds the
// cap). Cap default 10^6, overridable via REFINERY_ENUM_CAP.
EpsPureProfile solve_exhaustive(const ConcisePotentialGame& g,
                                PerturbScheme scheme,
                                std::optional<std::uint64_t> cap = std::nullopt);

std::uint64_t enumeration_cap();

}  // namespace refinery
