#pragma once

#include <functional>
#include <vector>

#include "semiflow/prox.hpp"

namespace semiflow {

/// Strictly increasing time nodes 0 = t0 < ... < tN = T.
struct TimeMesh {
  std::vector<double> t;

  static TimeMesh uniform(int steps, double T);
  // tn = T*(n/N)^gamma, concentrating steps near t = 0
  static TimeMesh graded(int steps, double T, double gamma);

  int steps() const { return static_cast<int>(t.size()) - 1; }
  double tau(int n) const { return t[n + 1] - t[n]; }
  double horizon() const { return t.back(); }
};

using ForcingSampler = std::function<GridFunction(double)>;

/// Implicit-Euler trajectory. By construction each step satisfies
/// (u^{n+1} - u^n)/tau_n + g^{n+1} = f^{n+1} with g^{n+1} a tol-accurate
/// element of dphi(u^{n+1}).
struct Trajectory {
  TimeMesh mesh;
  std::vector<GridFunction> state;      // N+1 entries
  std::vector<double> energy;           // phi(u^n), may be +inf at n = 0
  std::vector<GridFunction> forcing;    // f^{n+1}, one per step
  std::vector<GridFunction> selection;  // g^{n+1}, one per step
  std::vector<double> residual;         // prox residual per step
  std::vector<int> iterations;          // prox iterations per step

  int steps() const { return mesh.steps(); }
};

class EvolveError : public std::runtime_error {
 public:
  EvolveError(const std::string& what, int step)
      : std::runtime_error(what), step(step) {}
  int step;
};

Trajectory evolve(const EnergyFunctional& phi, const GridFunction& u0,
                  const ForcingSampler& f, const TimeMesh& mesh,
                  double prox_tol = 1e-10, int max_iterations = 20000);

// forcing given as samples at the mesh nodes (size N+1; sample n+1 is used
// on step n, matching the fully implicit convention)
Trajectory evolve(const EnergyFunctional& phi, const GridFunction& u0,
                  const std::vector<GridFunction>& forcing_samples,
                  const TimeMesh& mesh, double prox_tol = 1e-10,
                  int max_iterations = 20000);

/// Per-step convexity defects of the shifted energy:
/// delta_n = phi_w(u^n) - phi_w(u^{n+1}) - (g_w^{n+1}, u^n - u^{n+1}).
std::vector<double> chain_rule_residuals(const EnergyFunctional& phi,
                                         const Trajectory& tr);

struct DissipationReport {
  bool pass = true;
  double worst_violation = 0.0;
  int worst_step = -1;
  std::vector<int> violations;
};

/// For unforced convex flows: phi(u^{n+1}) + ||u^{n+1}-u^n||^2/(2 tau_n)
/// must not exceed phi(u^n) + slack.
DissipationReport dissipation_check(const EnergyFunctional& phi,
                                    const Trajectory& tr, double slack = 1e-8);

}  // namespace semiflow
