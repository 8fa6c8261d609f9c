#pragma once

#include "semiflow/perturbation.hpp"

namespace semiflow {

/// Picard iteration over trajectories for du/dt + dphi(u) contains Gu.
struct PicardConfig {
  double tol = 1e-8;  // sup-in-time H-norm distance between iterates
  int max_outer = 200;
  double theta = 1.0;  // relaxation, (0, 1]
  enum class Seed { zero, frozen_initial, constant, custom } seed = Seed::zero;
  double constant_value = 0.0;
  std::vector<GridFunction> custom_samples;
};

struct FixedPointReport {
  std::vector<double> distances;  // d_k = max_n ||u_k(t_n) - u_{k-1}(t_n)||
  bool converged = false;
  int iterations = 0;
  double schaefer_worst_ratio = 0.0;
  GrowthAudit audit;
};

struct PerturbedSolution {
  Trajectory trajectory;
  FixedPointReport report;
};

PerturbedSolution solve_perturbed(const EnergyFunctional& phi,
                                  const Nemytskii& G, const GridFunction& u0,
                                  const TimeMesh& mesh, double prox_tol,
                                  const PicardConfig& cfg,
                                  int max_prox_iterations = 20000);

/// Worst over mesh nodes of ||u(t_n)|| against the a priori growth bound
/// (||u0||^2 + |Omega| * int b^2)^{1/2} * exp((2L + 1 + 2 omega) t / 2).
double schaefer_monitor(const Trajectory& tr, double L,
                        const std::function<double(double)>& b, double omega,
                        const GridFunction& u0);

}  // namespace semiflow
