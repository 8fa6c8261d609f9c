#include "semiflow/evolution.hpp"

#include <cmath>

namespace semiflow {

TimeMesh TimeMesh::uniform(int steps, double T) {
  if (steps < 1 || !(T > 0.0)) throw std::invalid_argument("bad time mesh");
  TimeMesh m;
  m.t.resize(steps + 1);
  for (int n = 0; n <= steps; ++n) m.t[n] = T * n / steps;
  m.t.back() = T;
  return m;
}

TimeMesh TimeMesh::graded(int steps, double T, double gamma) {
  if (steps < 1 || !(T > 0.0) || !(gamma >= 1.0)) {
    throw std::invalid_argument("bad graded time mesh");
  }
  TimeMesh m;
  m.t.resize(steps + 1);
  for (int n = 0; n <= steps; ++n) {
    m.t[n] = T * std::pow(static_cast<double>(n) / steps, gamma);
  }
  m.t.back() = T;
  return m;
}

Trajectory evolve(const EnergyFunctional& phi, const GridFunction& u0,
                  const ForcingSampler& f, const TimeMesh& mesh,
                  double prox_tol, int max_iterations) {
  std::vector<GridFunction> samples;
  samples.reserve(mesh.steps() + 1);
  for (double t : mesh.t) {
    samples.push_back(f ? f(t) : GridFunction(u0.grid));
  }
  return evolve(phi, u0, samples, mesh, prox_tol, max_iterations);
}

Trajectory evolve(const EnergyFunctional& phi, const GridFunction& u0,
                  const std::vector<GridFunction>& forcing_samples,
                  const TimeMesh& mesh, double prox_tol, int max_iterations) {
  if (u0.grid != phi.grid()) throw std::invalid_argument("grid mismatch");
  if (static_cast<int>(forcing_samples.size()) != mesh.steps() + 1) {
    throw std::invalid_argument("forcing samples must align with the time mesh");
  }
  for (int n = 0; n < mesh.steps(); ++n) {
    if (mesh.tau(n) * phi.omega() >= 1.0) {
      throw std::invalid_argument("time step violates tau*omega < 1");
    }
  }

  Trajectory tr;
  tr.mesh = mesh;
  tr.state.push_back(u0);
  tr.energy.push_back(phi.evaluate(u0));

  for (int n = 0; n < mesh.steps(); ++n) {
    const double tau = mesh.tau(n);
    const GridFunction& fn = forcing_samples[n + 1];
    ProxProblem problem;
    problem.energy = &phi;
    problem.tau = tau;
    problem.anchor = tr.state.back();
    axpy(tau, fn, problem.anchor);
    problem.tol = prox_tol;
    problem.max_iterations = max_iterations;
    try {
      ProxResult res = solve_prox(problem);
      // g = (anchor - u^{n+1})/tau satisfies (u^{n+1}-u^n)/tau + g = f
      tr.state.push_back(std::move(res.minimizer));
      tr.energy.push_back(phi.evaluate(tr.state.back()));
      tr.forcing.push_back(fn);
      tr.selection.push_back(std::move(res.selection));
      tr.residual.push_back(res.residual);
      tr.iterations.push_back(res.iterations);
    } catch (const ProxError& e) {
      throw EvolveError(std::string("prox failed at step ") +
                            std::to_string(n) + ": " + e.what(),
                        n);
    }
  }
  return tr;
}

std::vector<double> chain_rule_residuals(const EnergyFunctional& phi,
                                         const Trajectory& tr) {
  const double w = phi.omega();
  std::vector<double> delta(tr.steps());
  for (int n = 0; n < tr.steps(); ++n) {
    const double en = w == 0.0 ? tr.energy[n] : phi.evaluate_shifted(tr.state[n]);
    const double en1 =
        w == 0.0 ? tr.energy[n + 1] : phi.evaluate_shifted(tr.state[n + 1]);
    if (!std::isfinite(en) || !std::isfinite(en1)) {
      throw std::invalid_argument("chain rule needs finite energies");
    }
    const GridFunction diff = lin_comb(1.0, tr.state[n], -1.0, tr.state[n + 1]);
    GridFunction g = tr.selection[n];
    if (w != 0.0) axpy(w, tr.state[n + 1], g);
    delta[n] = en - en1 - inner_product(g, diff);
  }
  return delta;
}

DissipationReport dissipation_check(const EnergyFunctional& phi,
                                    const Trajectory& tr, double slack) {
  DissipationReport report;
  for (int n = 0; n < tr.steps(); ++n) {
    const GridFunction diff =
        lin_comb(1.0, tr.state[n + 1], -1.0, tr.state[n]);
    const double lhs =
        tr.energy[n + 1] + inner_product(diff, diff) / (2.0 * tr.mesh.tau(n));
    const double violation = lhs - tr.energy[n];
    if (violation > report.worst_violation) {
      report.worst_violation = violation;
      report.worst_step = n;
    }
    if (violation > slack) {
      report.pass = false;
      report.violations.push_back(n);
    }
  }
  return report;
}

}  // namespace semiflow
