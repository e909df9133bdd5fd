#include "refinery/circuits.h"

#include <utility>

namespace refinery {

Gate Gate::input(int player, int action) {
  Gate g;
  g.kind = Kind::Input;
  g.player = player;
  g.action = action;
  return g;
}

Gate Gate::constant(Rat v) {
  Gate g;
  g.kind = Kind::Const;
  g.value = std::move(v);
  return g;
}

Gate Gate::add(int lhs, int rhs) {
  Gate g;
  g.kind = Kind::Add;
  g.lhs = lhs;
  g.rhs = rhs;
  return g;
}

Gate Gate::mul(int lhs, int rhs) {
  Gate g;
  g.kind = Kind::Mul;
  g.lhs = lhs;
  g.rhs = rhs;
  return g;
}

MultilinearCircuit::MultilinearCircuit(int num_players, std::vector<int> actions,
                                       std::vector<Gate> gates, int output)
    : num_players_(num_players),
      actions_(std::move(actions)),
      gates_(std::move(gates)),
      output_(output) {
  if (num_players_ < 0 || actions_.size() != static_cast<std::size_t>(num_players_))
    throw DimensionMismatch("circuit: actions list does not match player count");
  if (output_ < 0 || output_ >= static_cast<int>(gates_.size()))
    throw DimensionMismatch("circuit: output gate out of range");
}

void MultilinearCircuit::validate_multilinear() {
  const std::size_t words = (static_cast<std::size_t>(num_players_) + 63) / 64;
  masks_.assign(gates_.size(), std::vector<std::uint64_t>(words, 0));
  for (std::size_t i = 0; i < gates_.size(); ++i) {
    const Gate& g = gates_[i];
    switch (g.kind) {
      case Gate::Kind::Input: {
        if (g.player < 0 || g.player >= num_players_ || g.action < 0 ||
            g.action >= actions_[g.player])
          throw DimensionMismatch("circuit: input coordinate out of range at gate " +
                                  std::to_string(i));
        masks_[i][g.player / 64] |= std::uint64_t(1) << (g.player % 64);
        break;
      }
      case Gate::Kind::Const:
        break;
      case Gate::Kind::Add:
      case Gate::Kind::Mul: {
        if (g.lhs < 0 || g.rhs < 0 || g.lhs >= static_cast<int>(i) ||
            g.rhs >= static_cast<int>(i))
          throw CycleDetected("circuit: operand does not precede gate " +
                              std::to_string(i));
        const auto& a = masks_[g.lhs];
        const auto& b = masks_[g.rhs];
        if (g.kind == Gate::Kind::Mul) {
          for (std::size_t w = 0; w < words; ++w)
            if (a[w] & b[w])
              throw MultilinearityViolation(
                  "circuit: Mul gate " + std::to_string(i) +
                  " shares players between its operands");
        }
        for (std::size_t w = 0; w < words; ++w) masks_[i][w] = a[w] | b[w];
        break;
      }
    }
  }
  validated_ = true;
}

std::vector<int> MultilinearCircuit::gate_players(int gate) const {
  std::vector<int> out;
  if (!validated_) return out;
  const auto& m = masks_[gate];
  for (int p = 0; p < num_players_; ++p)
    if (m[p / 64] >> (p % 64) & 1) out.push_back(p);
  return out;
}

void MultilinearCircuit::check_shape(std::size_t players,
                                     const std::vector<int>* dims) const {
  if (players != static_cast<std::size_t>(num_players_))
    throw DimensionMismatch("circuit eval: wrong number of players");
  if (dims)
    for (int p = 0; p < num_players_; ++p)
      if ((*dims)[p] != actions_[p])
        throw DimensionMismatch("circuit eval: wrong vector length for player " +
                                std::to_string(p));
}

Rat MultilinearCircuit::eval_rational(const std::vector<std::vector<Rat>>& x) const {
  check_shape(x.size(), nullptr);
  for (int p = 0; p < num_players_; ++p)
    if (x[p].size() != static_cast<std::size_t>(actions_[p]))
      throw DimensionMismatch("circuit eval: wrong vector length for player " +
                              std::to_string(p));
  std::vector<Rat> v(gates_.size());
  for (std::size_t i = 0; i < gates_.size(); ++i) {
    const Gate& g = gates_[i];
    switch (g.kind) {
      case Gate::Kind::Input: v[i] = x[g.player][g.action]; break;
      case Gate::Kind::Const: v[i] = g.value; break;
      case Gate::Kind::Add: v[i] = v[g.lhs] + v[g.rhs]; break;
      case Gate::Kind::Mul: v[i] = v[g.lhs] * v[g.rhs]; break;
    }
  }
  return v[output_];
}

EpsPoly MultilinearCircuit::eval_symbolic(const std::vector<std::vector<EpsPoly>>& x,
                                          int degree_x) const {
  check_shape(x.size(), nullptr);
  const int d = degree_x * num_players_;
  std::vector<std::pair<Rat, Rat>> samples;
  samples.reserve(d + 1);
  std::vector<std::vector<Rat>> point(x.size());
  for (int node = 0; node <= d; ++node) {
    Rat e(node);
    for (std::size_t p = 0; p < x.size(); ++p) {
      point[p].clear();
      point[p].reserve(x[p].size());
      for (const EpsPoly& q : x[p]) {
        if (q.degree() > degree_x)
          throw DimensionMismatch("eval_symbolic: input degree exceeds bound");
        point[p].push_back(q.eval(e));
      }
    }
    samples.emplace_back(e, eval_rational(point));
  }
  return interpolate_poly(samples, d);
}

MultilinearCircuit MultilinearCircuit::from_tensor(const std::vector<int>& actions,
                                                   const std::vector<Rat>& table) {
  const int n = static_cast<int>(actions.size());
  std::size_t cells = 1;
  for (int m : actions) cells *= static_cast<std::size_t>(m);
  if (table.size() != cells)
    throw DimensionMismatch("from_tensor: table size mismatch");
  CircuitBuilder b(n, actions);
  std::vector<int> terms;
  std::vector<int> idx(n, 0);
  for (std::size_t cell = 0; cell < cells; ++cell) {
    if (!table[cell].is_zero()) {
      int prod = b.constant(table[cell]);
      for (int p = 0; p < n; ++p) prod = b.mul(prod, b.input(p, idx[p]));
      terms.push_back(prod);
    }
    for (int p = n - 1; p >= 0; --p) {
      if (++idx[p] < actions[p]) break;
      idx[p] = 0;
    }
  }
  int out = b.sum(terms);
  return std::move(b).build(out);
}

int CircuitBuilder::input(int player, int action) {
  gates_.push_back(Gate::input(player, action));
  return static_cast<int>(gates_.size()) - 1;
}

int CircuitBuilder::constant(Rat v) {
  gates_.push_back(Gate::constant(std::move(v)));
  return static_cast<int>(gates_.size()) - 1;
}

int CircuitBuilder::add(int a, int b) {
  gates_.push_back(Gate::add(a, b));
  return static_cast<int>(gates_.size()) - 1;
}

int CircuitBuilder::mul(int a, int b) {
  gates_.push_back(Gate::mul(a, b));
  return static_cast<int>(gates_.size()) - 1;
}

int CircuitBuilder::sum(const std::vector<int>& ids) {
  if (ids.empty()) return zero();
  int acc = ids[0];
  for (std::size_t i = 1; i < ids.size(); ++i) acc = add(acc, ids[i]);
  return acc;
}

MultilinearCircuit CircuitBuilder::build(int output) && {
  MultilinearCircuit c(num_players_, std::move(actions_), std::move(gates_), output);
  c.validate_multilinear();
  return c;
}

}  // namespace refinery
