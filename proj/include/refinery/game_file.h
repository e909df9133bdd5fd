#pragma once

#include <memory>
#include <optional>
#include <string>

#include <json.hpp>

#include "refinery/congestion.h"
#include "refinery/gamegen.h"
#include "refinery/games.h"
#include "refinery/polymatrix.h"
#include "refinery/tree_form.h"

namespace refinery {

using Json = nlohmann::ordered_json;

struct SchemaError : std::runtime_error {
  SchemaError(const std::string& path, const std::string& pointer,
              const std::string& what)
      : std::runtime_error(path + ": " + pointer + ": " + what) {}
};
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Serializable matroid description; builds the independence oracle.
struct MatroidDesc {
  std::string type;  // "uniform" | "graphic" | "partition"
  int rank = 0;
  int resources = 0;
  int vertices = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::vector<int>> blocks;
  std::vector<int> quotas;

  std::shared_ptr<const Matroid> build() const;
};

struct GameFile {
  int version = 1;
  std::string kind;

  std::optional<TableGame> table;                       // normal_form_table
  std::optional<MultilinearCircuit> potential_circuit;  // normal_form_circuit
  std::optional<std::vector<MultilinearCircuit>> utility_circuits;
  std::optional<EfgPotentialGame> efg;                  // efg
  std::optional<EfgZeroSum> efg_zero_sum;               // efg_zero_sum
  std::optional<MatroidDesc> matroid_desc;              // matroid_congestion
  std::optional<MatroidCongestionGame> matroid;
  std::optional<NetworkCongestionGame> network;         // network_congestion
  std::optional<PolymatrixGame> polymatrix;             // polymatrix

  // The concise view of table / circuit kinds (built at load).
  ConcisePotentialGame concise() const;
};

Json circuit_to_json(const MultilinearCircuit& c);
MultilinearCircuit circuit_from_json(const Json& j);
Json tree_to_json(const TreeFormDecisionProblem& t);
TreeFormDecisionProblem tree_from_json(const Json& j);

Json serialize_game(const GameFile& g);
GameFile parse_game_json(const Json& j, const std::string& path_for_errors);
GameFile parse_game_file(const std::string& path);
void write_game_file(const GameFile& g, const std::string& path);

GameFile from_generated(const GeneratedGame& g);
Json reference_to_json(const ReferenceSolutions& r);

// Numeric profile file: {"eps": "1/100", "strategies": [["99/100", ...], ...]}
struct ProfileFile {
  Rat eps;
  std::vector<std::vector<Rat>> strategies;
};
ProfileFile parse_profile_file(const std::string& path);

// FNV-1a 64-bit digest of a file's bytes, as hex.
std::string file_digest(const std::string& path);

std::string rat_str(const Rat& r);
Rat rat_from_json(const Json& j);

}  // namespace refinery
