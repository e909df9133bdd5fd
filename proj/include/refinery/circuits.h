#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "refinery/eps_poly.h"
#include "refinery/rational.h"

namespace refinery {

struct MultilinearityViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct CycleDetected : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DimensionMismatch : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Gate {
  enum class Kind { Input, Const, Add, Mul };
  Kind kind = Kind::Const;
  int player = 0, action = 0;  // Input
  Rat value;                   // Const
  int lhs = -1, rhs = -1;      // Add / Mul, indices of earlier gates

  static Gate input(int player, int action);
  static Gate constant(Rat v);
  static Gate add(int lhs, int rhs);
  static Gate mul(int lhs, int rhs);
};

// Arithmetic circuit over per-player input coordinates, with multilinearity
// enforced structurally: the two operands of every Mul gate must involve
// disjoint sets of players. Gates are topologically ordered; operands
// reference earlier gates only (a forward reference is a cycle).
class MultilinearCircuit {
 public:
  MultilinearCircuit() = default;
  MultilinearCircuit(int num_players, std::vector<int> actions,
                     std::vector<Gate> gates, int output);

  int num_players() const { return num_players_; }
  const std::vector<int>& actions() const { return actions_; }
  const std::vector<Gate>& gates() const { return gates_; }
  int output() const { return output_; }
  bool validated() const { return validated_; }

  // Annotates each gate with its player set and checks disjointness at every
  // Mul gate. Throws MultilinearityViolation or CycleDetected.
  void validate_multilinear();

  // Players appearing in the sub-DAG of a gate (valid after validation).
  std::vector<int> gate_players(int gate) const;

  Rat eval_rational(const std::vector<std::vector<Rat>>& x) const;

  // Exact composite polynomial, computed by rational evaluation at the
  // integer nodes 0..degree_x*num_players and interpolation. Inputs of
  // degree <= degree_x.
  EpsPoly eval_symbolic(const std::vector<std::vector<EpsPoly>>& x,
                        int degree_x) const;

  // Explicit payoff tensor (row-major over action profiles, last player
  // fastest) as a circuit.
  static MultilinearCircuit from_tensor(const std::vector<int>& actions,
                                        const std::vector<Rat>& table);

 private:
  void check_shape(std::size_t players, const std::vector<int>* dims) const;

  int num_players_ = 0;
  std::vector<int> actions_;
  std::vector<Gate> gates_;
  int output_ = -1;
  bool validated_ = false;
  // Player-set bitmask per gate, 64 players per word.
  std::vector<std::vector<std::uint64_t>> masks_;
};

// Incremental builder; returns gate ids.
class CircuitBuilder {
 public:
  CircuitBuilder(int num_players, std::vector<int> actions)
      : num_players_(num_players), actions_(std::move(actions)) {}

  int input(int player, int action);
  int constant(Rat v);
  int add(int a, int b);
  int mul(int a, int b);
  int zero() { return constant(Rat(0)); }
  // Convenience: fold of add over a list (empty -> const 0).
  int sum(const std::vector<int>& ids);

  MultilinearCircuit build(int output) &&;

 private:
  int num_players_;
  std::vector<int> actions_;
  std::vector<Gate> gates_;
};

}  // namespace refinery
