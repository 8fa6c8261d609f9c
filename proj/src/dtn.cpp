#include "semiflow/dtn.hpp"

#include <cmath>

namespace semiflow {

TraceSpace::TraceSpace(GridPtr grid) : grid_(std::move(grid)) {
  nodes_ = grid_->boundary_nodes();
  weights_ = grid_->boundary_weights();
}

double TraceSpace::measure() const {
  double s = 0.0;
  for (double w : weights_) s += w;
  return s;
}

double boundary_inner_product(const BoundaryFunction& a,
                              const BoundaryFunction& b) {
  if (a.space != b.space) throw std::invalid_argument("trace space mismatch");
  double s = 0.0;
  for (int k = 0; k < a.size(); ++k) s += a.space->weight(k) * a.v[k] * b.v[k];
  return s;
}

double boundary_norm(const BoundaryFunction& a) {
  return std::sqrt(boundary_inner_product(a, a));
}

BoundaryFunction trace(const TracePtr& space, const GridFunction& u) {
  if (u.grid != space->grid()) throw std::invalid_argument("grid mismatch");
  BoundaryFunction b(space);
  for (int k = 0; k < b.size(); ++k) b.v[k] = u.v[space->node(k)];
  return b;
}

namespace {

// Polak-Ribiere+ nonlinear CG with Armijo backtracking on the free DOFs.
struct CgOutcome {
  double grad_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

// The objectives are convex and differentiable, so the line search roots the
// directional derivative (secant / regula falsi). Working with slopes instead
// of function values sidesteps the cancellation noise that stalls
// sufficient-decrease tests near the minimum, and for quadratic objectives
// the first secant step is the exact minimizer.
template <typename Value, typename Grad>
CgOutcome minimize_cg(const Value& /*value*/, const Grad& grad,
                      std::vector<double>& x, const std::vector<char>& free_dof,
                      double tol, int maxit) {
  const size_t n = x.size();
  std::vector<double> g(n), g_prev(n), d(n), trial(n), gt(n);
  auto dot = [&](const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
  };
  auto mask = [&](std::vector<double>& v) {
    for (size_t i = 0; i < n; ++i) {
      if (!free_dof[i]) v[i] = 0.0;
    }
  };

  grad(x, g);
  mask(g);
  for (size_t i = 0; i < n; ++i) d[i] = -g[i];
  double gg = dot(g, g);
  double step = 1.0;
  CgOutcome out;

  for (int it = 1; it <= maxit; ++it) {
    out.iterations = it;
    out.grad_norm = std::sqrt(gg);
    if (out.grad_norm <= tol) {
      out.converged = true;
      return out;
    }
    double gd = dot(g, d);
    if (gd >= 0.0) {  // not a descent direction; restart
      for (size_t i = 0; i < n; ++i) d[i] = -g[i];
      gd = -gg;
    }

    double s = step;
    double lo = 0.0, slope_lo = gd;  // slope_lo < 0
    double hi = 0.0, slope_hi = 0.0;
    bool bracketed = false;
    double slope_s = 0.0;
    for (int ls = 0; ls < 40; ++ls) {
      for (size_t i = 0; i < n; ++i) trial[i] = x[i] + s * d[i];
      grad(trial, gt);
      mask(gt);
      slope_s = dot(gt, d);
      if (std::abs(slope_s) <= 0.25 * std::abs(gd)) break;
      if (slope_s > 0.0) {
        hi = s;
        slope_hi = slope_s;
        bracketed = true;
      } else {
        lo = s;
        slope_lo = slope_s;
      }
      if (bracketed) {
        if (hi - lo <= 1e-14 * (1.0 + hi)) break;
        const double denom = slope_hi - slope_lo;
        double next = denom > 0.0 ? (lo * slope_hi - hi * slope_lo) / denom
                                  : 0.5 * (lo + hi);
        const double margin = 0.01 * (hi - lo);
        next = std::min(std::max(next, lo + margin), hi - margin);
        s = next;
      } else {
        s = std::min(s * 4.0, 1e12);
      }
    }

    x.swap(trial);
    step = std::min(std::max(s, 1e-14), 1e12);

    g_prev.swap(g);
    g.swap(gt);  // gradient at the accepted point, already masked
    const double gg_new = dot(g, g);
    double beta = 0.0;
    if (it % 50 != 0 && gg > 0.0) {
      double gy = 0.0;
      for (size_t i = 0; i < n; ++i) gy += g[i] * (g[i] - g_prev[i]);
      beta = std::max(gy / gg, 0.0);
    }
    for (size_t i = 0; i < n; ++i) d[i] = beta * d[i] - g[i];
    gg = gg_new;
  }
  out.grad_norm = std::sqrt(gg);
  return out;
}

EnergyFunctional neumann_p_energy(const GridPtr& grid, double p, double eps) {
  SmoothPart smooth;
  smooth.p = p;
  smooth.bc = Bc::neumann;
  smooth.eps = eps;
  return EnergyFunctional(grid, smooth);
}

// Euclidean partials of the p-energy: node weight times the Riesz gradient.
void p_energy_partials(const EnergyFunctional& phi, const GridFunction& u,
                       std::vector<double>& out) {
  const GridFunction g = phi.smooth_gradient(u);
  for (int i = 0; i < g.size(); ++i) out[i] = g.grid->weight(i) * g.v[i];
}

struct StepResult {
  GridFunction extension;
  double grad_norm;
  int iterations;
};

// jointly minimize pE(u_hat) + sum_k bw_k (Tr u_hat - z)^2 / (2 tau)
StepResult dtn_step(const EnergyFunctional& phi, const TracePtr& space,
                    const BoundaryFunction& z, double tau,
                    const GridFunction& warm, const DtnTolerances& tols) {
  const GridPtr grid = phi.grid();
  GridFunction u = warm;
  std::vector<char> free_dof(grid->size(), 1);

  auto value = [&](const std::vector<double>& x) {
    GridFunction v{grid, 0.0};
    v.v = x;
    double s = phi.smooth_value(v);
    for (int k = 0; k < space->size(); ++k) {
      const double d = x[space->node(k)] - z.v[k];
      s += space->weight(k) * d * d / (2.0 * tau);
    }
    return s;
  };
  auto gradf = [&](const std::vector<double>& x, std::vector<double>& g) {
    GridFunction v{grid, 0.0};
    v.v = x;
    p_energy_partials(phi, v, g);
    for (int k = 0; k < space->size(); ++k) {
      g[space->node(k)] += space->weight(k) * (x[space->node(k)] - z.v[k]) / tau;
    }
  };

  CgOutcome cg = minimize_cg(value, gradf, u.v, free_dof, tols.inner_tol,
                             tols.max_inner);
  if (!cg.converged) {
    throw ProxError("dtn step minimization did not converge", cg.grad_norm,
                    cg.iterations);
  }
  return {std::move(u), cg.grad_norm, cg.iterations};
}

std::vector<BoundaryFunction> boundary_apply(const Nemytskii& G,
                                             const TimeMesh& mesh,
                                             const std::vector<BoundaryFunction>& v,
                                             GrowthAudit* audit) {
  std::vector<BoundaryFunction> out;
  out.reserve(v.size());
  const GridPtr grid = v.front().space->grid();
  for (size_t n = 0; n < v.size(); ++n) {
    const double t = mesh.t[n];
    const double bt = G.b ? G.b(t) : 0.0;
    BoundaryFunction gv(v[n].space);
    for (int k = 0; k < gv.size(); ++k) {
      const auto xy = grid->coord(v[n].space->node(k));
      gv.v[k] = G.g(t, xy[0], xy[1], v[n].v[k]);
      if (audit) {
        const double excess = std::abs(gv.v[k]) - G.L * std::abs(v[n].v[k]) - bt;
        if (excess > audit->worst_violation) {
          audit->worst_violation = excess;
          audit->worst_time_index = static_cast<int>(n);
        }
      }
    }
    if (audit) audit->samples += gv.size();
    out.push_back(std::move(gv));
  }
  return out;
}

BoundaryTrajectory evolve_dtn_forced(const TracePtr& space, double p,
                                     const BoundaryFunction& u0,
                                     const std::vector<BoundaryFunction>& forcing,
                                     const TimeMesh& mesh,
                                     const DtnTolerances& tols) {
  const EnergyFunctional phi = neumann_p_energy(space->grid(), p, tols.eps);
  BoundaryTrajectory tr;
  tr.mesh = mesh;
  tr.state.push_back(u0);
  tr.extension.push_back(p_harmonic_extension(u0, p, tols));
  for (int n = 0; n < mesh.steps(); ++n) {
    const double tau = mesh.tau(n);
    BoundaryFunction z = tr.state.back();
    for (int k = 0; k < z.size(); ++k) z.v[k] += tau * forcing[n + 1].v[k];
    StepResult step = dtn_step(phi, space, z, tau, tr.extension.back(), tols);
    tr.state.push_back(trace(space, step.extension));
    tr.extension.push_back(std::move(step.extension));
    tr.inner_residual.push_back(step.grad_norm);
    tr.inner_iterations.push_back(step.iterations);
  }
  return tr;
}

double boundary_schaefer(const BoundaryTrajectory& tr, double L,
                         const std::function<double(double)>& b,
                         const BoundaryFunction& u0) {
  double b_sq = 0.0;
  for (int n = 0; n < tr.mesh.steps(); ++n) {
    const double bt = b ? b(tr.mesh.t[n + 1]) : 0.0;
    b_sq += tr.mesh.tau(n) * bt * bt;
  }
  b_sq *= u0.space->measure();
  const double base = std::sqrt(boundary_inner_product(u0, u0) + b_sq);
  const double rate = 0.5 * (2.0 * L + 1.0);
  double worst = 0.0;
  for (size_t n = 0; n < tr.state.size(); ++n) {
    const double lhs = boundary_norm(tr.state[n]);
    const double rhs = base * std::exp(rate * tr.mesh.t[n]);
    worst = std::max(worst, rhs > 0.0 ? lhs / rhs : (lhs == 0.0 ? 0.0 : kInf));
  }
  return worst;
}

}  // namespace

GridFunction p_harmonic_extension(const BoundaryFunction& u, double p,
                                  const DtnTolerances& tols) {
  const GridPtr grid = u.space->grid();
  const EnergyFunctional phi = neumann_p_energy(grid, p, tols.eps);

  GridFunction x(grid);
  std::vector<char> free_dof(grid->size(), 1);
  // fix boundary values; start the interior from the boundary mean
  double mean = 0.0;
  for (int k = 0; k < u.size(); ++k) mean += u.v[k];
  mean /= std::max(u.size(), 1);
  for (int i = 0; i < x.size(); ++i) x.v[i] = mean;
  for (int k = 0; k < u.size(); ++k) {
    x.v[u.space->node(k)] = u.v[k];
    free_dof[u.space->node(k)] = 0;
  }

  auto value = [&](const std::vector<double>& vals) {
    GridFunction v{grid, 0.0};
    v.v = vals;
    return phi.smooth_value(v);
  };
  auto gradf = [&](const std::vector<double>& vals, std::vector<double>& g) {
    GridFunction v{grid, 0.0};
    v.v = vals;
    p_energy_partials(phi, v, g);
  };
  CgOutcome cg =
      minimize_cg(value, gradf, x.v, free_dof, tols.inner_tol, tols.max_inner);
  if (!cg.converged) {
    throw ProxError("p-harmonic extension did not converge", cg.grad_norm,
                    cg.iterations);
  }
  return x;
}

double reduced_energy(const BoundaryFunction& u, double p,
                      const DtnTolerances& tols) {
  const GridFunction ext = p_harmonic_extension(u, p, tols);
  return neumann_p_energy(u.space->grid(), p, tols.eps).smooth_value(ext);
}

BoundaryTrajectory evolve_dtn(const TracePtr& space, double p,
                              const BoundaryFunction& u0, const Nemytskii* G,
                              const TimeMesh& mesh, const DtnTolerances& tols,
                              const PicardConfig& picard) {
  if (G == nullptr) {
    std::vector<BoundaryFunction> zero(mesh.t.size(), BoundaryFunction(u0.space));
    return evolve_dtn_forced(space, p, u0, zero, mesh, tols);
  }

  std::vector<BoundaryFunction> iterate;
  switch (picard.seed) {
    case PicardConfig::Seed::zero:
      iterate.assign(mesh.t.size(), BoundaryFunction(u0.space));
      break;
    case PicardConfig::Seed::frozen_initial:
      iterate.assign(mesh.t.size(), u0);
      break;
    case PicardConfig::Seed::constant:
      iterate.assign(mesh.t.size(),
                     BoundaryFunction(u0.space, picard.constant_value));
      break;
    case PicardConfig::Seed::custom:
      throw std::invalid_argument("custom seeds are grid-level; not supported on the boundary");
  }

  BoundaryTrajectory tr;
  for (int k = 1; k <= picard.max_outer; ++k) {
    GrowthAudit audit;
    auto forcing = boundary_apply(*G, mesh, iterate, &audit);
    tr = evolve_dtn_forced(space, p, u0, forcing, mesh, tols);
    tr.picard.audit = audit;

    double dist = 0.0;
    std::vector<BoundaryFunction> next(iterate.size());
    for (size_t n = 0; n < next.size(); ++n) {
      next[n] = BoundaryFunction(u0.space);
      for (int j = 0; j < next[n].size(); ++j) {
        next[n].v[j] = (1.0 - picard.theta) * iterate[n].v[j] +
                       picard.theta * tr.state[n].v[j];
      }
      BoundaryFunction diff(u0.space);
      for (int j = 0; j < diff.size(); ++j) {
        diff.v[j] = next[n].v[j] - iterate[n].v[j];
      }
      dist = std::max(dist, boundary_norm(diff));
    }
    tr.picard.distances.push_back(dist);
    tr.picard.iterations = k;
    iterate = std::move(next);
    if (dist <= picard.tol) {
      tr.picard.converged = true;
      break;
    }
  }
  tr.picard.schaefer_worst_ratio = boundary_schaefer(tr, G->L, G->b, u0);
  return tr;
}

}  // namespace semiflow
