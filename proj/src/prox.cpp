#include "semiflow/prox.hpp"

#include <algorithm>
#include <cmath>

namespace semiflow {

namespace {

double bisect_resolvent(const GraphSpec& j, double tau, double z) {
  // root of f(v) = v + tau*beta(v) - z; f is increasing, jumps allowed
  auto f = [&](double v) { return v + tau * j.beta(v) - z; };
  double lo = std::min(z, 0.0) - 1.0;
  double hi = std::max(z, 0.0) + 1.0;
  double width = hi - lo;
  int expand = 0;
  while (f(lo) > 0.0) {
    lo -= width;
    width *= 2.0;
    if (++expand > 200) throw std::runtime_error("resolvent bracket failure (lower)");
  }
  expand = 0;
  width = hi - lo;
  while (f(hi) < 0.0) {
    hi += width;
    width *= 2.0;
    if (++expand > 200) throw std::runtime_error("resolvent bracket failure (upper)");
  }
  while (hi - lo > 1e-14) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

double scalar_resolvent(const GraphSpec& j, double tau, double z) {
  if (!(tau > 0.0)) throw std::invalid_argument("resolvent needs tau > 0");
  switch (j.kind()) {
    case GraphKind::none:
      return z;
    case GraphKind::absolute_value: {
      const double m = std::abs(z) - tau;
      return m > 0.0 ? (z > 0.0 ? m : -m) : 0.0;
    }
    case GraphKind::indicator_interval:
      return std::clamp(z, j.lower(), j.upper());
    case GraphKind::positive_part:
      return z < 0.0 ? z : std::max(z - tau, 0.0);
    case GraphKind::power:
    case GraphKind::custom_monotone:
      return bisect_resolvent(j, tau, z);
  }
  return z;
}

ProxResult solve_prox(const ProxProblem& problem) {
  const EnergyFunctional& phi = *problem.energy;
  const double tau = problem.tau;
  if (!(tau > 0.0)) throw std::invalid_argument("prox needs tau > 0");
  if (tau * phi.omega() >= 1.0) {
    throw std::invalid_argument("nonconvex prox subproblem: tau*omega >= 1");
  }
  const GridFunction& z = problem.anchor;
  const GraphSpec& graph = phi.graph();
  const bool has_graph = graph.kind() != GraphKind::none;

  auto quad = [&](const GridFunction& v) {
    double s = 0.0;
    const auto& w = v.grid->weights();
    for (int i = 0; i < v.size(); ++i) {
      const double d = v.v[i] - z.v[i];
      s += w[i] * d * d;
    }
    return s / (2.0 * tau);
  };
  auto smooth_obj = [&](const GridFunction& v) {
    return phi.smooth_value(v) + quad(v);
  };

  GridFunction v = z;
  double qv = smooth_obj(v);
  double jv = phi.graph_value(v);  // +inf allowed (first iterate only)
  double step = tau;
  GridFunction vnext(v.grid);
  double residual = 0.0;

  for (int it = 1; it <= problem.max_iterations; ++it) {
    GridFunction gq = phi.smooth_gradient(v);
    for (int i = 0; i < gq.size(); ++i) gq.v[i] += (v.v[i] - z.v[i]) / tau;

    // Sufficient decrease is only trusted when the guaranteed decrease of
    // the composite model (smooth model plus the graph-value change; always
    // <= 0 by construction of the backward step) rises above the
    // cancellation noise of evaluating the objective; below that the step
    // is accepted as-is and never grown, so the iteration degenerates to
    // plain descent with a convergent step. The Armijo comparison itself
    // uses only the smooth parts -- the graph terms cancel.
    double qn = 0.0, jn = 0.0;
    bool tested = false;
    int halvings = 0;
    const double noise = 1e-14 * (1.0 + std::abs(qv));
    while (true) {
      for (int i = 0; i < v.size(); ++i) {
        const double y = v.v[i] - step * gq.v[i];
        vnext.v[i] = has_graph ? scalar_resolvent(graph, step, y) : y;
      }
      qn = smooth_obj(vnext);
      jn = has_graph ? phi.graph_value(vnext) : 0.0;
      double gd = 0.0, dd = 0.0;
      const auto& w = v.grid->weights();
      for (int i = 0; i < v.size(); ++i) {
        const double d = vnext.v[i] - v.v[i];
        gd += w[i] * gq.v[i] * d;
        dd += w[i] * d * d;
      }
      const double model = gd + dd / (2.0 * step);
      const double composite_model = model + (jn - jv);
      tested = std::isfinite(composite_model) && -composite_model > noise;
      if (!tested || qn <= qv + model) {
        residual = std::sqrt(dd) / step;
        break;
      }
      step *= 0.5;
      ++halvings;
      if (step < 1e-18) {
        residual = std::sqrt(dd) / std::max(step, 1e-18);
        break;
      }
    }

    std::swap(v.v, vnext.v);
    qv = qn;
    jv = jn;
    if (residual <= problem.tol || step < 1e-18) {
      if (step < 1e-18 && residual > problem.tol) {
        throw ProxError("prox line search stalled", residual, it);
      }
      ProxResult res;
      res.minimizer = v;
      res.selection = GridFunction(v.grid);
      for (int i = 0; i < v.size(); ++i) {
        res.selection.v[i] = (z.v[i] - v.v[i]) / tau;
      }
      res.residual = residual;
      res.iterations = it;
      res.objective = qv + phi.graph_value(v);
      return res;
    }
    if (tested && halvings == 0) step = std::min(step * 2.0, 1e12);
  }
  throw ProxError("prox max iterations exceeded", residual,
                  problem.max_iterations);
}

}  // namespace semiflow
