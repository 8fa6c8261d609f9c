#pragma once

#include <stdexcept>

#include "semiflow/energy.hpp"

namespace semiflow {

/// Unique v with v + tau*beta(v) containing z; closed forms where known,
/// monotone bisection otherwise (1e-14 absolute).
double scalar_resolvent(const GraphSpec& j, double tau, double z);

/// Implicit-Euler subproblem: minimize phi(v) + ||v - z||^2 / (2 tau).
struct ProxProblem {
  const EnergyFunctional* energy = nullptr;
  double tau = 0.0;
  GridFunction anchor;  // z, already containing tau * forcing
  double tol = 1e-10;   // fixed-point residual in the H-norm
  int max_iterations = 20000;
};

struct ProxResult {
  GridFunction minimizer;   // v
  GridFunction selection;   // g = (z - v)/tau, a tol-accurate element of dphi(v)
  double residual = 0.0;
  int iterations = 0;
  double objective = 0.0;   // phi(v) + ||v - z||^2/(2 tau)
};

class ProxError : public std::runtime_error {
 public:
  ProxError(const std::string& what, double residual, int iterations)
      : std::runtime_error(what), residual(residual), iterations(iterations) {}
  double residual;
  int iterations;
};

/// Forward-backward splitting with backtracking; the subproblem is strongly
/// convex with modulus 1/tau - omega, which must be positive.
ProxResult solve_prox(const ProxProblem& problem);

}  // namespace semiflow
