#pragma once

#include <map>
#include <string>

#include "semiflow/evolution.hpp"

namespace semiflow {

/// One verified inequality: pass iff ratio <= slack.
struct EstimateEntry {
  std::string name;
  double ratio = 0.0;
  double slack = 1.0;
  bool pass = true;
  int worst_time_index = -1;
};

struct EstimateReport {
  std::vector<EstimateEntry> entries;

  bool all_pass() const;
  const EstimateEntry* find(const std::string& name) const;
};

// Each check measures worst (left side / right side) over the trajectory.
// Time integrals use the left-endpoint rule; the forcing record is treated
// as piecewise constant on (t_n, t_{n+1}], so its integrals are exact.

/// ||u(t)|| <= (||u0||^2 + int ||f||^2)^{1/2} exp((1 + 2 omega) t / 2).
EstimateEntry check_apriori(const Trajectory& tr, double omega,
                            double slack = 1.1);

/// int phi(u) <= 1/2 ||f||_He^2 + (1+omega)/2 ||u||_He^2 + 1/2 ||u0||^2.
EstimateEntry check_energy_integral(const Trajectory& tr, double omega,
                                    double slack = 1.1);

/// t phi(u(t)) <= int phi(u) + 1/2 ||sqrt(t) f||_He^2.
EstimateEntry check_smoothing(const Trajectory& tr, double slack = 1.1);

/// ||sqrt(t) du/dt||_He^2 <= 2 int phi(u) + ||sqrt(t) f||_He^2.
EstimateEntry check_timeweighted_velocity(const Trajectory& tr,
                                          double slack = 1.1);

/// ||u1(t)-u2(t)|| <= e^{omega t} ||u1(0)-u2(0)||
///                    + int_0^t e^{omega (t-s)} ||f1-f2|| ds.
/// Requires matching meshes and grids.
EstimateEntry check_contraction(const Trajectory& tr1, const Trajectory& tr2,
                                double omega, double slack);

/// phi(u^{n+1}) + ||u^{n+1}-u^n||^2 / (2 tau_n) <= phi(u^n) + tol.
/// Reported ratio is worst violation / tol with slack 1.
EstimateEntry check_dissipation(const EnergyFunctional& phi,
                                const Trajectory& tr, double tol = 1e-8);

/// Convexity defect of the chain-rule identity along the trajectory,
/// normalized by tol * (1 + energy scale); slack 1.
EstimateEntry check_chain_rule(const EnergyFunctional& phi,
                               const Trajectory& tr, double tol = 1e-8);

/// Subgradient inequality of the shifted energy for every recorded
/// selection against seeded random directions; violation normalized by
/// tol * (1 + ||direction||); slack 1.
EstimateEntry check_subgradient(const EnergyFunctional& phi,
                                const Trajectory& tr, unsigned seed = 0,
                                int directions_per_step = 4,
                                double tol = 1e-8);

/// Re-solves sampled implicit steps at tight tolerance and measures the
/// H-distance to the recorded states, normalized by tol * (1 + ||u||);
/// slack 1. Catches trajectories produced with a loosened inner solver.
EstimateEntry check_selection_accuracy(const EnergyFunctional& phi,
                                       const Trajectory& tr,
                                       double tol = 1e-8,
                                       int max_samples = 16,
                                       double resolve_tol = 1e-11);

struct ReportOptions {
  double slack = 1.1;            // Eqs.-style integral/pointwise bounds
  double smoothing_slack = 1.1;  // rough data wants 1.2
  double velocity_slack = 1.1;
  double selection_tol = 1e-8;
  double dissipation_tol = 1e-8;
  unsigned seed = 0;
  int directions_per_step = 4;
  bool include_dissipation = false;  // meaningful for unforced convex runs
  std::map<std::string, double> slack_overrides;
};

/// Runs every check applicable to a single trajectory.
EstimateReport full_report(const EnergyFunctional& phi, const Trajectory& tr,
                           const ReportOptions& opt = {});

}  // namespace semiflow
