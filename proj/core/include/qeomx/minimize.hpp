#pragma once

#include <functional>
#include <span>
#include <vector>

namespace qeomx {

struct BfgsOptions {
  double gradient_tol = 1e-3;  // L2 norm of the gradient
  int max_iterations = 500;
};

struct MinimizeResult {
  std::vector<double> x;
  double f = 0.0;
  double gradient_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// fg(x, g) evaluates the objective at x and writes the gradient into g.
/// Line-search probes pass an empty gradient span: implementations may
/// then skip the gradient work.
using ObjectiveFn = std::function<double(std::span<const double>, std::span<double>)>;

/// Dense BFGS with backtracking Armijo line search.
MinimizeResult minimize_bfgs(const ObjectiveFn& fg, std::vector<double> x0,
                             const BfgsOptions& opt = {});

}  // namespace qeomx
