#pragma once

#include <optional>
#include <string>
#include <vector>

#include "refinery/circuits.h"

namespace refinery {

struct SchemeMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class PerturbScheme { PerfectBox, ProperPermutahedron };

// One favored action per player (box trembles), or one full rank permutation
// per player (permutahedron vertices). perm[i][a] is the rank of action a;
// rank 0 receives eps^0 = 1.
struct EpsPureProfile {
  PerturbScheme scheme = PerturbScheme::PerfectBox;
  std::vector<int> favored;                // PerfectBox
  std::vector<std::vector<int>> perm;      // ProperPermutahedron

  static EpsPureProfile box(std::vector<int> favored);
  static EpsPureProfile permutahedron(std::vector<std::vector<int>> perm);
  // All players favor action 0 / identity permutations.
  static EpsPureProfile canonical(PerturbScheme scheme,
                                  const std::vector<int>& actions);
  // Favored action of a player (rank-0 action under the proper scheme).
  int favored_action(int player) const;
  bool operator==(const EpsPureProfile&) const = default;
};

// Concise normal-form potential game: potential as a multilinear circuit,
// optional per-player utility circuits, optional explicit tables.
class ConcisePotentialGame {
 public:
  ConcisePotentialGame(MultilinearCircuit potential,
                       std::optional<std::vector<MultilinearCircuit>> utilities =
                           std::nullopt);

  int num_players() const { return potential_.num_players(); }
  const std::vector<int>& actions() const { return potential_.actions(); }
  const MultilinearCircuit& potential() const { return potential_; }
  bool has_utilities() const { return utilities_.has_value(); }
  // Utility circuit of a player; the potential when utilities are omitted
  // (identical-interest view).
  const MultilinearCircuit& utility(int player) const;

  // Largest embedding degree for a scheme: 1 for the box, max_i(m_i - 1) for
  // the permutahedron.
  int embed_degree(PerturbScheme scheme) const;

 private:
  MultilinearCircuit potential_;
  std::optional<std::vector<MultilinearCircuit>> utilities_;
};

// Per-player eps-polynomial strategy vectors of an eps-pure profile.
// PerfectBox: favored -> 1-(m-1)eps, others -> eps. Permutahedron: action a
// -> eps^{rank(a)}, unnormalized.
std::vector<std::vector<EpsPoly>> embed_profile(const EpsPureProfile& p,
                                                PerturbScheme scheme,
                                                const std::vector<int>& actions);

// Exact symbolic potential at the embedded profile.
EpsPoly perturbed_potential(const ConcisePotentialGame& g,
                            const EpsPureProfile& p, PerturbScheme scheme);

// Expected utility of one player at the embedded profile, with own strategy
// replaced by the given eps-polynomial vector.
EpsPoly perturbed_utility(const ConcisePotentialGame& g, int player,
                          const std::vector<EpsPoly>& own,
                          const EpsPureProfile& others, PerturbScheme scheme);

struct PotentialPropertyResult {
  bool pass = true;
  // First violating (profile, player, deviation) witness.
  std::vector<int> profile;
  int player = -1;
  int deviation = -1;
};

// Samples random (pure profile, player, deviation) triples and checks the
// exact potential identity Phi(a'_i,a_-i) - Phi(a) = u_i(a'_i,a_-i) - u_i(a).
PotentialPropertyResult check_potential_property(const ConcisePotentialGame& g,
                                                 int trials,
                                                 std::uint64_t seed);

// Pure-profile one-hot input vectors.
std::vector<std::vector<Rat>> one_hot_profile(const std::vector<int>& actions,
                                              const std::vector<int>& profile);

// Explicit normal-form game: one flat payoff tensor per player (row-major
// over profiles, last player fastest), optional potential tensor.
struct TableGame {
  std::vector<int> actions;
  std::vector<std::vector<Rat>> utilities;
  std::optional<std::vector<Rat>> potential;

  int num_players() const { return static_cast<int>(actions.size()); }
  std::size_t num_cells() const;
  std::size_t cell_index(const std::vector<int>& profile) const;
  Rat utility(int player, const std::vector<int>& profile) const;
  bool identical_interest() const;

  // Tensor circuits for the potential and utilities.
  ConcisePotentialGame to_concise() const;

  static TableGame identical(std::vector<int> actions, std::vector<Rat> common);
};

// Potential tensor by path integration of utility differences, when one
// exists (first cell anchored at 0).
std::optional<std::vector<Rat>> derive_potential(const TableGame& g);

// Explicit tables from a concise game by evaluating the circuits at every
// pure profile. Throws EnumerationCapExceeded past the cap.
TableGame materialize_table(const ConcisePotentialGame& g, std::uint64_t cap);

}  // namespace refinery
