#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "refinery/eps_poly.h"

namespace refinery {

struct BranchInstability : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Execution context handed to an arithmetic program: exact rationals with
// every comparison logged. The branch log is the piece signature.
class ProgramContext {
 public:
  ProgramContext(std::span<const Rat> inputs, std::vector<bool>* log)
      : inputs_(inputs), log_(log) {}

  const Rat& in(std::size_t i) const { return inputs_[i]; }
  std::size_t num_inputs() const { return inputs_.size(); }

  bool less(const Rat& a, const Rat& b) {
    bool r = a < b;
    log_->push_back(r);
    return r;
  }

 private:
  std::span<const Rat> inputs_;
  std::vector<bool>* log_;
};

// Straight-line / branching program over {+, -, *, /, <}: a body evaluated
// on exact rationals, with all control flow routed through ctx.less.
struct ArithmeticProgram {
  int num_inputs = 0;
  int num_outputs = 0;
  std::function<std::vector<Rat>(ProgramContext&)> body;
};

struct SymbolicRun {
  std::vector<EpsRational> outputs;
  std::vector<bool> signature;  // branch log shared by all sample runs
  Rat scale;                    // sample scale at which stability held
};

// Executes the program numerically at degree_bound+1 small distinct points,
// requires identical branch signatures, and reconstructs each output by
// fractional interpolation. On signature divergence the sample scale is
// halved and the run retried (bounded retries).
SymbolicRun run_symbolic(const ArithmeticProgram& prog,
                         const std::vector<EpsPoly>& inputs, int degree_bound,
                         Rat initial_scale = Rat(1, 1 << 16),
                         int max_retries = 64);

}  // namespace refinery
