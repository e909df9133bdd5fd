#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "refinery/eps_poly.h"

namespace refinery {

struct IndexOutOfRange : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct OracleInconsistency : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct BoundViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct Disconnected : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NegativeSymbolicCost : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Independence oracle. Sets are sorted resource-index lists.
class Matroid {
 public:
  virtual ~Matroid() = default;
  virtual bool independent(const std::vector<int>& set) const = 0;
  virtual int rank() const = 0;
  virtual int num_resources() const = 0;
};

class UniformMatroid : public Matroid {
 public:
  UniformMatroid(int rank, int m) : rank_(rank), m_(m) {}
  bool independent(const std::vector<int>& set) const override;
  int rank() const override { return rank_; }
  int num_resources() const override { return m_; }

 private:
  int rank_, m_;
};

// Resources are the edges of a graph; independent sets are forests.
class GraphicMatroid : public Matroid {
 public:
  GraphicMatroid(int num_vertices, std::vector<std::pair<int, int>> edges);
  bool independent(const std::vector<int>& set) const override;
  int rank() const override { return rank_; }
  int num_resources() const override { return static_cast<int>(edges_.size()); }
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }

 private:
  int num_vertices_, rank_;
  std::vector<std::pair<int, int>> edges_;
};

// Independent iff at most quota[b] resources from each block.
class PartitionMatroid : public Matroid {
 public:
  PartitionMatroid(std::vector<std::vector<int>> blocks, std::vector<int> quotas);
  bool independent(const std::vector<int>& set) const override;
  int rank() const override { return rank_; }
  int num_resources() const override { return m_; }

 private:
  std::vector<int> block_of_;
  std::vector<int> quotas_;
  int rank_, m_;
};

struct MatroidCongestionGame {
  int n = 0;                            // players
  std::vector<std::vector<Rat>> delay;  // delay[r][k-1] for k = 1..n
  std::shared_ptr<const Matroid> matroid;
  mpz_class basis_count;                   // |B|
  std::vector<mpz_class> resource_count;   // B_r

  int num_resources() const { return matroid->num_resources(); }
  void validate() const;
};

// Enumerates all bases of a matroid (desk-scale resource counts).
std::vector<std::vector<int>> enumerate_bases(const Matroid& m);

// Expected delay of resource r when exactly k players use it in their
// eps-pure strategy: the two-binomial convolution over h_r = 1-(|B|-B_r)eps
// and f_r = B_r eps.
EpsPoly perturbed_delay(const MatroidCongestionGame& g, int r, int k);

// Exact distribution of the number of players using a resource, given each
// player's usage weight; the simple dynamic-programming recurrence.
std::vector<EpsPoly> count_distribution(const std::vector<EpsPoly>& weights);

// Greedy minimum-cost basis under cmp_lex; costs[r] is the symbolic marginal
// cost of adding r (ties to the lowest resource index).
std::vector<int> matroid_br(const Matroid& m, const std::vector<EpsPoly>& costs);

struct MatroidDynamicsResult {
  std::vector<std::vector<int>> profile;  // one basis per player
  long steps = 0;
  std::vector<EpsPoly> potential_trace;   // perturbed Rosenthal potential per step
};

// Round-robin best-response dynamics in the perturbed game; the symbolic
// Rosenthal potential strictly decreases each improvement step and the step
// count stays within n^2 |R| rk(M) (BoundViolation otherwise).
MatroidDynamicsResult run_matroid_dynamics(const MatroidCongestionGame& g);

// Perturbed Rosenthal potential of a basis profile.
EpsPoly matroid_potential(const MatroidCongestionGame& g,
                          const std::vector<std::vector<int>>& profile);

struct NetworkCongestionGame {
  struct Edge {
    int from = 0, to = 0;
    std::vector<Rat> delay;  // delay[k-1] for k = 1..n
  };
  int num_nodes = 0;
  std::vector<Edge> edges;
  int source = 0, sink = 0;
  int n = 0;
  // Path counts: |B| and per-edge B_e; computed by the acyclic DP when absent.
  std::optional<mpz_class> path_count;
  std::optional<std::vector<mpz_class>> edge_path_counts;

  void validate() const;
};

// Counts source->sink paths (total and per edge) for an acyclic graph.
void count_paths_dag(NetworkCongestionGame& g);

EpsPoly network_perturbed_delay(const NetworkCongestionGame& g, int e, int k);

struct NetworkSolveResult {
  std::vector<std::vector<int>> paths;  // n paths as edge-index lists
  EpsPoly potential;                    // perturbed Rosenthal potential
};

// Min-cost integral flow of value n on the n-parallel-copy expansion, by
// successive shortest paths with Bellman-Ford under cmp_lex, decomposed into
// one path per player.
NetworkSolveResult solve_network(const NetworkCongestionGame& g);

// Lexicographic shortest path from source to sink with symbolic edge costs;
// returns the edge list and its cost. Used for the n = 1 case and for
// no-deviation checks.
std::pair<std::vector<int>, EpsPoly> symbolic_shortest_path(
    int num_nodes, const std::vector<std::tuple<int, int, EpsPoly>>& arcs,
    int source, int sink);

}  // namespace refinery
