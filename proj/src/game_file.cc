#include "refinery/game_file.h"

#include <fstream>
#include <sstream>

namespace refinery {

std::string rat_str(const Rat& r) { return r.str(); }

Rat rat_from_json(const Json& j) {
  if (j.is_number_integer()) return Rat(static_cast<long>(j.get<long long>()));
  if (j.is_string()) return Rat::parse(j.get<std::string>());
  throw ValidationError("expected rational as integer or \"num/den\" string");
}

namespace {

Json rat_json(const Rat& r) { return Json(r.str()); }

Json rat_vec_json(const std::vector<Rat>& v) {
  Json a = Json::array();
  for (const Rat& r : v) a.push_back(rat_json(r));
  return a;
}

std::vector<Rat> rat_vec_from(const Json& j) {
  std::vector<Rat> v;
  for (const auto& e : j) v.push_back(rat_from_json(e));
  return v;
}

Json mpz_json(const mpz_class& z) { return Json(z.get_str()); }

mpz_class mpz_from(const Json& j) {
  if (j.is_number_integer()) return mpz_class(static_cast<long>(j.get<long long>()));
  return mpz_class(j.get<std::string>());
}

}  // namespace

Json circuit_to_json(const MultilinearCircuit& c) {
  Json j;
  j["players"] = c.num_players();
  j["actions"] = c.actions();
  Json gates = Json::array();
  for (const Gate& g : c.gates()) {
    Json e;
    switch (g.kind) {
      case Gate::Kind::Input:
        e["op"] = "in";
        e["player"] = g.player;
        e["action"] = g.action;
        break;
      case Gate::Kind::Const:
        e["op"] = "const";
        e["value"] = rat_json(g.value);
        break;
      case Gate::Kind::Add:
        e["op"] = "add";
        e["lhs"] = g.lhs;
        e["rhs"] = g.rhs;
        break;
      case Gate::Kind::Mul:
        e["op"] = "mul";
        e["lhs"] = g.lhs;
        e["rhs"] = g.rhs;
        break;
    }
    gates.push_back(std::move(e));
  }
  j["gates"] = std::move(gates);
  j["output"] = c.output();
  return j;
}

MultilinearCircuit circuit_from_json(const Json& j) {
  std::vector<Gate> gates;
  for (const auto& e : j.at("gates")) {
    std::string op = e.at("op").get<std::string>();
    if (op == "in")
      gates.push_back(Gate::input(e.at("player").get<int>(), e.at("action").get<int>()));
    else if (op == "const")
      gates.push_back(Gate::constant(rat_from_json(e.at("value"))));
    else if (op == "add")
      gates.push_back(Gate::add(e.at("lhs").get<int>(), e.at("rhs").get<int>()));
    else if (op == "mul")
      gates.push_back(Gate::mul(e.at("lhs").get<int>(), e.at("rhs").get<int>()));
    else
      throw ValidationError("circuit: unknown gate op '" + op + "'");
  }
  MultilinearCircuit c(j.at("players").get<int>(),
                       j.at("actions").get<std::vector<int>>(), std::move(gates),
                       j.at("output").get<int>());
  c.validate_multilinear();
  return c;
}

Json tree_to_json(const TreeFormDecisionProblem& t) {
  Json j;
  Json dps = Json::array();
  for (const auto& dp : t.dps) {
    Json e;
    e["parent_seq"] = dp.parent_seq;
    e["actions"] = dp.actions;
    dps.push_back(std::move(e));
  }
  j["decision_points"] = std::move(dps);
  return j;
}

TreeFormDecisionProblem tree_from_json(const Json& j) {
  TfdpBuilder b;
  for (const auto& e : j.at("decision_points"))
    b.decision_point(e.at("parent_seq").get<int>(),
                     e.at("actions").get<std::vector<std::string>>());
  return std::move(b).build();
}

std::shared_ptr<const Matroid> MatroidDesc::build() const {
  if (type == "uniform") return std::make_shared<UniformMatroid>(rank, resources);
  if (type == "graphic") return std::make_shared<GraphicMatroid>(vertices, edges);
  if (type == "partition") return std::make_shared<PartitionMatroid>(blocks, quotas);
  throw ValidationError("matroid: unknown type '" + type + "'");
}

namespace {

Json matroid_desc_json(const MatroidDesc& d) {
  Json j;
  j["type"] = d.type;
  if (d.type == "uniform") {
    j["rank"] = d.rank;
    j["resources"] = d.resources;
  } else if (d.type == "graphic") {
    j["vertices"] = d.vertices;
    Json edges = Json::array();
    for (const auto& [u, v] : d.edges) edges.push_back(Json::array({u, v}));
    j["edges"] = std::move(edges);
  } else {
    j["blocks"] = d.blocks;
    j["quotas"] = d.quotas;
  }
  return j;
}

MatroidDesc matroid_desc_from(const Json& j) {
  MatroidDesc d;
  d.type = j.at("type").get<std::string>();
  if (d.type == "uniform") {
    d.rank = j.at("rank").get<int>();
    d.resources = j.at("resources").get<int>();
  } else if (d.type == "graphic") {
    d.vertices = j.at("vertices").get<int>();
    for (const auto& e : j.at("edges"))
      d.edges.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
  } else if (d.type == "partition") {
    d.blocks = j.at("blocks").get<std::vector<std::vector<int>>>();
    d.quotas = j.at("quotas").get<std::vector<int>>();
  } else {
    throw ValidationError("matroid: unknown type '" + d.type + "'");
  }
  return d;
}

}  // namespace

ConcisePotentialGame GameFile::concise() const {
  if (table) return table->to_concise();
  if (potential_circuit)
    return ConcisePotentialGame(*potential_circuit, utility_circuits);
  throw ValidationError("game has no normal-form view");
}

Json serialize_game(const GameFile& g) {
  Json j;
  j["version"] = g.version;
  j["kind"] = g.kind;
  if (g.kind == "normal_form_table") {
    j["actions"] = g.table->actions;
    Json utils = Json::array();
    for (const auto& u : g.table->utilities) utils.push_back(rat_vec_json(u));
    j["utilities"] = std::move(utils);
    if (g.table->potential) j["potential"] = rat_vec_json(*g.table->potential);
  } else if (g.kind == "normal_form_circuit") {
    j["potential"] = circuit_to_json(*g.potential_circuit);
    if (g.utility_circuits) {
      Json utils = Json::array();
      for (const auto& u : *g.utility_circuits) utils.push_back(circuit_to_json(u));
      j["utilities"] = std::move(utils);
    }
  } else if (g.kind == "efg") {
    Json trees = Json::array();
    for (const auto& t : g.efg->trees) trees.push_back(tree_to_json(t));
    j["trees"] = std::move(trees);
    j["potential"] = circuit_to_json(g.efg->potential);
  } else if (g.kind == "efg_zero_sum") {
    Json trees = Json::array();
    for (const auto& t : g.efg_zero_sum->trees) trees.push_back(tree_to_json(t));
    j["trees"] = std::move(trees);
    Json rows = Json::array();
    for (const auto& r : g.efg_zero_sum->p2_payoff) rows.push_back(rat_vec_json(r));
    j["p2_payoff"] = std::move(rows);
  } else if (g.kind == "matroid_congestion") {
    j["players"] = g.matroid->n;
    Json delays = Json::array();
    for (const auto& d : g.matroid->delay) delays.push_back(rat_vec_json(d));
    j["delays"] = std::move(delays);
    j["matroid"] = matroid_desc_json(*g.matroid_desc);
    j["basis_count"] = mpz_json(g.matroid->basis_count);
    Json counts = Json::array();
    for (const auto& c : g.matroid->resource_count) counts.push_back(mpz_json(c));
    j["resource_counts"] = std::move(counts);
  } else if (g.kind == "network_congestion") {
    j["nodes"] = g.network->num_nodes;
    Json edges = Json::array();
    for (const auto& e : g.network->edges) {
      Json je;
      je["from"] = e.from;
      je["to"] = e.to;
      je["delays"] = rat_vec_json(e.delay);
      edges.push_back(std::move(je));
    }
    j["edges"] = std::move(edges);
    j["source"] = g.network->source;
    j["sink"] = g.network->sink;
    j["players"] = g.network->n;
    if (g.network->path_count) j["path_count"] = mpz_json(*g.network->path_count);
    if (g.network->edge_path_counts) {
      Json counts = Json::array();
      for (const auto& c : *g.network->edge_path_counts) counts.push_back(mpz_json(c));
      j["edge_path_counts"] = std::move(counts);
    }
  } else if (g.kind == "polymatrix") {
    j["actions"] = g.polymatrix->actions;
    Json edges = Json::array();
    for (const auto& e : g.polymatrix->edges) {
      Json je;
      je["i"] = e.i;
      je["j"] = e.j;
      Json pij = Json::array(), pji = Json::array();
      for (const auto& row : e.p_ij) pij.push_back(rat_vec_json(row));
      for (const auto& row : e.p_ji) pji.push_back(rat_vec_json(row));
      je["p_ij"] = std::move(pij);
      je["p_ji"] = std::move(pji);
      edges.push_back(std::move(je));
    }
    j["edges"] = std::move(edges);
    if (g.polymatrix->potential)
      j["potential"] = circuit_to_json(*g.polymatrix->potential);
  } else {
    throw ValidationError("serialize_game: unknown kind '" + g.kind + "'");
  }
  return j;
}

namespace {

void validate_table(const TableGame& t) {
  if (t.actions.empty()) throw ValidationError("table: no players");
  for (int m : t.actions)
    if (m < 1) throw ValidationError("table: empty action set");
  const std::size_t cells = t.num_cells();
  if (t.utilities.size() != t.actions.size())
    throw ValidationError("table: one utility tensor per player required");
  for (const auto& u : t.utilities)
    if (u.size() != cells) throw ValidationError("table: tensor size mismatch");
  if (t.potential && t.potential->size() != cells)
    throw ValidationError("table: potential size mismatch");
  if (!t.potential && !t.identical_interest() && !derive_potential(t))
    throw ValidationError("table: game admits no potential");
}

}  // namespace

GameFile parse_game_json(const Json& j, const std::string& path) {
  GameFile g;
  try {
    g.version = j.value("version", 1);
    g.kind = j.at("kind").get<std::string>();
    if (g.kind == "normal_form_table") {
      TableGame t;
      t.actions = j.at("actions").get<std::vector<int>>();
      for (const auto& u : j.at("utilities")) t.utilities.push_back(rat_vec_from(u));
      if (j.contains("potential")) t.potential = rat_vec_from(j.at("potential"));
      validate_table(t);
      g.table = std::move(t);
      g.table->to_concise();  // force circuit validation
    } else if (g.kind == "normal_form_circuit") {
      g.potential_circuit = circuit_from_json(j.at("potential"));
      if (j.contains("utilities")) {
        std::vector<MultilinearCircuit> utils;
        for (const auto& u : j.at("utilities")) utils.push_back(circuit_from_json(u));
        g.utility_circuits = std::move(utils);
      }
      g.concise();
    } else if (g.kind == "efg") {
      EfgPotentialGame e{{}, circuit_from_json(j.at("potential"))};
      for (const auto& t : j.at("trees")) e.trees.push_back(tree_from_json(t));
      int total = 0;
      for (const auto& t : e.trees) total += t.num_sequences();
      if (e.potential.num_players() != static_cast<int>(e.trees.size()))
        throw ValidationError("efg: potential player count mismatch");
      for (std::size_t i = 0; i < e.trees.size(); ++i)
        if (e.potential.actions()[i] != e.trees[i].num_sequences())
          throw ValidationError("efg: potential coordinate blocks mismatch");
      (void)total;
      g.efg = std::move(e);
    } else if (g.kind == "efg_zero_sum") {
      EfgZeroSum e;
      for (const auto& t : j.at("trees")) e.trees.push_back(tree_from_json(t));
      for (const auto& r : j.at("p2_payoff")) e.p2_payoff.push_back(rat_vec_from(r));
      if (e.trees.size() != 2 ||
          e.p2_payoff.size() != static_cast<std::size_t>(e.trees[0].num_sequences()))
        throw ValidationError("efg_zero_sum: payoff shape mismatch");
      g.efg_zero_sum = std::move(e);
    } else if (g.kind == "matroid_congestion") {
      MatroidCongestionGame m;
      m.n = j.at("players").get<int>();
      for (const auto& d : j.at("delays")) m.delay.push_back(rat_vec_from(d));
      MatroidDesc desc = matroid_desc_from(j.at("matroid"));
      m.matroid = desc.build();
      if (j.contains("basis_count")) {
        m.basis_count = mpz_from(j.at("basis_count"));
        for (const auto& c : j.at("resource_counts"))
          m.resource_count.push_back(mpz_from(c));
      } else {
        auto bases = enumerate_bases(*m.matroid);
        m.basis_count = static_cast<long>(bases.size());
        m.resource_count.assign(m.matroid->num_resources(), 0);
        for (const auto& basis : bases)
          for (int r : basis) ++m.resource_count[r];
      }
      m.validate();
      g.matroid_desc = std::move(desc);
      g.matroid = std::move(m);
    } else if (g.kind == "network_congestion") {
      NetworkCongestionGame net;
      net.num_nodes = j.at("nodes").get<int>();
      for (const auto& e : j.at("edges")) {
        NetworkCongestionGame::Edge edge;
        edge.from = e.at("from").get<int>();
        edge.to = e.at("to").get<int>();
        edge.delay = rat_vec_from(e.at("delays"));
        net.edges.push_back(std::move(edge));
      }
      net.source = j.at("source").get<int>();
      net.sink = j.at("sink").get<int>();
      net.n = j.at("players").get<int>();
      if (j.contains("path_count")) {
        net.path_count = mpz_from(j.at("path_count"));
        std::vector<mpz_class> counts;
        for (const auto& c : j.at("edge_path_counts")) counts.push_back(mpz_from(c));
        net.edge_path_counts = std::move(counts);
      }
      net.validate();
      g.network = std::move(net);
    } else if (g.kind == "polymatrix") {
      PolymatrixGame pm;
      pm.actions = j.at("actions").get<std::vector<int>>();
      pm.n = static_cast<int>(pm.actions.size());
      for (const auto& e : j.at("edges")) {
        PolymatrixGame::Edge edge;
        edge.i = e.at("i").get<int>();
        edge.j = e.at("j").get<int>();
        for (const auto& row : e.at("p_ij")) edge.p_ij.push_back(rat_vec_from(row));
        for (const auto& row : e.at("p_ji")) edge.p_ji.push_back(rat_vec_from(row));
        if (edge.p_ij.size() != static_cast<std::size_t>(pm.actions[edge.i]) ||
            edge.p_ji.size() != static_cast<std::size_t>(pm.actions[edge.j]))
          throw ValidationError("polymatrix: matrix shape mismatch");
        pm.edges.push_back(std::move(edge));
      }
      if (j.contains("potential"))
        pm.potential = circuit_from_json(j.at("potential"));
      if (!pm.potential && !pm.identical_interest())
        throw ValidationError("polymatrix: potential required unless identical interest");
      g.polymatrix = std::move(pm);
    } else {
      throw ValidationError("unknown game kind '" + g.kind + "'");
    }
  } catch (const Json::exception& e) {
    throw SchemaError(path, "json", e.what());
  }
  return g;
}

GameFile parse_game_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path, "/", "cannot open file");
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw SchemaError(path, "/", e.what());
  }
  return parse_game_json(j, path);
}

void write_game_file(const GameFile& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open '" + path + "' for writing");
  out << serialize_game(g).dump(2) << "\n";
}

GameFile from_generated(const GeneratedGame& g) {
  GameFile f;
  using K = GenSpec::Kind;
  switch (g.spec.kind) {
    case K::Fig1:
    case K::Fig2Myerson:
    case K::Fig3MaxPayoff:
    case K::TeamBot:
      f.kind = "normal_form_table";
      f.table = g.table;
      break;
    case K::Fig4RandomGD:
    case K::Fig6SymbolicGD:
      f.kind = "polymatrix";
      f.polymatrix = g.polymatrix;
      break;
    case K::MPChristmas:
      f.kind = "efg_zero_sum";
      f.efg_zero_sum = g.efg;
      break;
    case K::DoubleExp:
    case K::DoubleExp3Player:
    case K::MaxCutTriplet:
    case K::MaxCutEscape:
      f.kind = "normal_form_circuit";
      f.potential_circuit = g.concise->potential();
      break;
    case K::KnapsackHypercube:
      throw ValidationError("knapsack demo has no game-file form; use --with-reference");
  }
  return f;
}

Json reference_to_json(const ReferenceSolutions& r) {
  Json j = Json::array();
  for (const auto& e : r.entries) {
    Json je;
    je["refinement"] = e.refinement;
    if (!e.favored.empty()) je["favored"] = e.favored;
    if (!e.note.empty()) je["note"] = e.note;
    j.push_back(std::move(je));
  }
  return j;
}

ProfileFile parse_profile_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError(path, "/", "cannot open file");
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw SchemaError(path, "/", e.what());
  }
  ProfileFile p;
  try {
    p.eps = rat_from_json(j.at("eps"));
    for (const auto& row : j.at("strategies")) p.strategies.push_back(rat_vec_from(row));
  } catch (const Json::exception& e) {
    throw SchemaError(path, "/strategies", e.what());
  }
  return p;
}

std::string file_digest(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemaError(path, "/", "cannot open file");
  std::uint64_t h = 1469598103934665603ULL;
  char c;
  while (in.get(c)) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << h;
  return os.str();
}

}  // namespace refinery
