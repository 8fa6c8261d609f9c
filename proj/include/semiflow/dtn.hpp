#pragma once

#include "semiflow/fixedpoint.hpp"

namespace semiflow {

/// H = L2 of the boundary of a parent grid, with the trace map as the
/// (non-injective) reduction j.
class TraceSpace {
 public:
  explicit TraceSpace(GridPtr grid);

  GridPtr grid() const { return grid_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  int node(int k) const { return nodes_[k]; }
  double weight(int k) const { return weights_[k]; }
  double measure() const;

 private:
  GridPtr grid_;
  std::vector<int> nodes_;
  std::vector<double> weights_;
};

using TracePtr = std::shared_ptr<const TraceSpace>;

struct BoundaryFunction {
  TracePtr space;
  std::vector<double> v;

  BoundaryFunction() = default;
  explicit BoundaryFunction(TracePtr s, double fill = 0.0)
      : space(std::move(s)), v(space->size(), fill) {}
  int size() const { return static_cast<int>(v.size()); }
};

double boundary_inner_product(const BoundaryFunction& a,
                              const BoundaryFunction& b);
double boundary_norm(const BoundaryFunction& a);

BoundaryFunction trace(const TracePtr& space, const GridFunction& u);

struct DtnTolerances {
  double inner_tol = 1e-9;  // gradient norm of the per-step minimization
  int max_inner = 50000;
  double eps = 0.0;  // p-energy regularization
};

/// Minimizes the Neumann p-Dirichlet energy over interior values with the
/// boundary fixed to u; returns the full extension.
GridFunction p_harmonic_extension(const BoundaryFunction& u, double p,
                                  const DtnTolerances& tols = {});

/// phi^H(u) = inf over preimages of the p-Dirichlet energy = energy at the
/// p-harmonic extension (normalization constant 0).
double reduced_energy(const BoundaryFunction& u, double p,
                      const DtnTolerances& tols = {});

struct BoundaryTrajectory {
  TimeMesh mesh;
  std::vector<BoundaryFunction> state;
  std::vector<GridFunction> extension;  // harmonic lift per time node
  std::vector<double> inner_residual;   // per step
  std::vector<int> inner_iterations;
  FixedPointReport picard;  // populated when a perturbation is present
};

/// Implicit-Euler evolution of the Dirichlet-to-Neumann flow on the
/// boundary. Each step jointly minimizes the p-energy over interior and
/// boundary unknowns plus the boundary proximity term. G may be null.
BoundaryTrajectory evolve_dtn(const TracePtr& space, double p,
                              const BoundaryFunction& u0, const Nemytskii* G,
                              const TimeMesh& mesh,
                              const DtnTolerances& tols = {},
                              const PicardConfig& picard = {});

}  // namespace semiflow
