#include "qeomx/minimize.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace qeomx {

MinimizeResult minimize_bfgs(const ObjectiveFn& fg, std::vector<double> x0,
                             const BfgsOptions& opt) {
  const long n = static_cast<long>(x0.size());
  MinimizeResult result;
  result.x = std::move(x0);
  if (n == 0) {
    std::vector<double> g0;
    result.f = fg(result.x, g0);
    result.converged = true;
    return result;
  }

  Eigen::Map<Eigen::VectorXd> x(result.x.data(), n);
  Eigen::VectorXd g(n);
  std::vector<double> gbuf(static_cast<std::size_t>(n));
  auto eval = [&](const Eigen::VectorXd& pt, Eigen::VectorXd& grad) {
    std::span<const double> xs(pt.data(), static_cast<std::size_t>(n));
    double f = fg(xs, gbuf);
    grad = Eigen::Map<Eigen::VectorXd>(gbuf.data(), n);
    return f;
  };
  auto eval_f = [&](const Eigen::VectorXd& pt) {
    std::span<const double> xs(pt.data(), static_cast<std::size_t>(n));
    return fg(xs, std::span<double>{});
  };

  double f = eval(x, g);
  Eigen::MatrixXd Hinv = Eigen::MatrixXd::Identity(n, n);

  for (int it = 0; it < opt.max_iterations; ++it) {
    result.iterations = it;
    result.f = f;
    result.gradient_norm = g.norm();
    if (result.gradient_norm < opt.gradient_tol) {
      result.converged = true;
      return result;
    }

    Eigen::VectorXd p = -(Hinv * g);
    double slope = g.dot(p);
    if (slope >= 0.0) {  // lost positive definiteness; restart steepest descent
      Hinv.setIdentity();
      p = -g;
      slope = g.dot(p);
    }
    // Trust-region style cap; rotation-like parameters never need more.
    const double max_step = 4.0;
    if (p.norm() > max_step) {
      p *= max_step / p.norm();
      slope = g.dot(p);
    }

    // Backtracking Armijo line search; probes are energy-only, the
    // gradient is evaluated once at the accepted point.
    const double c1 = 1e-4;
    double alpha = 1.0;
    Eigen::VectorXd x_new;
    Eigen::VectorXd g_new(n);
    double f_new = f;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      x_new = x + alpha * p;
      f_new = eval_f(x_new);
      if (std::isfinite(f_new) && f_new <= f + c1 * alpha * slope) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      // Step collapsed; gradient norm is the honest answer.
      result.converged = result.gradient_norm < opt.gradient_tol;
      return result;
    }
    f_new = eval(x_new, g_new);

    Eigen::VectorXd s = x_new - x;
    Eigen::VectorXd y = g_new - g;
    double sy = s.dot(y);
    if (sy > 1e-12 * s.norm() * y.norm()) {
      double rho = 1.0 / sy;
      Eigen::MatrixXd I = Eigen::MatrixXd::Identity(n, n);
      Hinv = (I - rho * s * y.transpose()) * Hinv * (I - rho * y * s.transpose()) +
             rho * s * s.transpose();
    }
    x = x_new;
    g = g_new;
    f = f_new;
  }
  result.f = f;
  result.gradient_norm = g.norm();
  result.converged = result.gradient_norm < opt.gradient_tol;
  return result;
}

}  // namespace qeomx
