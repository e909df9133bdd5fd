#include "refinery/strongpoly.h"

namespace refinery {

SymbolicRun run_symbolic(const ArithmeticProgram& prog,
                         const std::vector<EpsPoly>& inputs, int degree_bound,
                         Rat initial_scale, int max_retries) {
  if (static_cast<int>(inputs.size()) != prog.num_inputs)
    throw std::invalid_argument("run_symbolic: input arity mismatch");
  Rat scale = initial_scale;
  const int points = degree_bound + 1;
  for (int attempt = 0; attempt <= max_retries; ++attempt, scale /= Rat(2)) {
    std::vector<Rat> nodes;
    nodes.reserve(points);
    for (int j = 0; j < points; ++j) nodes.push_back(scale / Rat(j + 1));

    std::vector<std::vector<Rat>> results;  // per node, program outputs
    std::vector<bool> signature;
    bool stable = true;
    for (int j = 0; j < points && stable; ++j) {
      std::vector<Rat> point;
      point.reserve(inputs.size());
      for (const EpsPoly& p : inputs) point.push_back(p.eval(nodes[j]));
      std::vector<bool> log;
      ProgramContext ctx(point, &log);
      std::vector<Rat> out = prog.body(ctx);
      if (static_cast<int>(out.size()) != prog.num_outputs)
        throw std::invalid_argument("run_symbolic: output arity mismatch");
      if (j == 0)
        signature = std::move(log);
      else if (log != signature)
        stable = false;
      results.push_back(std::move(out));
    }
    if (!stable) continue;

    SymbolicRun run;
    run.signature = std::move(signature);
    run.scale = scale;
    for (int o = 0; o < prog.num_outputs; ++o) {
      std::vector<std::pair<Rat, Rat>> samples;
      samples.reserve(points);
      for (int j = 0; j < points; ++j)
        samples.emplace_back(nodes[j], results[j][o]);
      run.outputs.push_back(interpolate_rational(samples, degree_bound));
    }
    // The interpolant must reproduce every sampled run exactly.
    for (int o = 0; o < prog.num_outputs; ++o)
      for (int j = 0; j < points; ++j)
        if (run.outputs[o].eval(nodes[j]) != results[j][o])
          throw BranchInstability("run_symbolic: interpolant mismatch at sample");
    return run;
  }
  throw BranchInstability("run_symbolic: branch signature never stabilized");
}

}  // namespace refinery
