#include "semiflow/perturbation.hpp"

#include <cmath>

namespace semiflow {

Nemytskii Nemytskii::sqrt_abs() {
  Nemytskii n;
  n.name = "sqrt_abs";
  n.g = [](double, double, double, double v) { return std::sqrt(std::abs(v)); };
  n.L = 1.0;
  n.b = [](double) { return 1.0; };  // sqrt(|v|) <= |v| + 1
  return n;
}

Nemytskii Nemytskii::linear(double lam) {
  Nemytskii n;
  n.name = "linear";
  n.g = [lam](double, double, double, double v) { return lam * v; };
  n.L = std::abs(lam);
  n.b = [](double) { return 0.0; };
  return n;
}

Nemytskii Nemytskii::logistic(double a) {
  Nemytskii n;
  n.name = "logistic";
  n.g = [a](double, double, double, double v) { return a * v / (1.0 + v * v); };
  n.L = 0.0;
  n.b = [a](double) { return 0.5 * std::abs(a); };
  return n;
}

Nemytskii Nemytskii::affine_forced(double lam,
                                   std::function<double(double, double, double)> f,
                                   std::function<double(double)> f_sup) {
  Nemytskii n;
  n.name = "affine_forced";
  n.g = [lam, f](double t, double x, double y, double v) {
    return lam * v + f(t, x, y);
  };
  n.L = std::abs(lam);
  n.b = std::move(f_sup);
  return n;
}

std::vector<GridFunction> nemytskii_apply(const Nemytskii& G,
                                          const TimeMesh& mesh,
                                          const std::vector<GridFunction>& v,
                                          GrowthAudit* audit) {
  if (v.size() != mesh.t.size()) {
    throw std::invalid_argument("samples must align with the time mesh");
  }
  std::vector<GridFunction> out;
  out.reserve(v.size());
  for (size_t n = 0; n < v.size(); ++n) {
    const double t = mesh.t[n];
    const double bt = G.b ? G.b(t) : 0.0;
    GridFunction gv(v[n].grid);
    for (int i = 0; i < gv.size(); ++i) {
      const auto xy = gv.grid->coord(i);
      gv.v[i] = G.g(t, xy[0], xy[1], v[n].v[i]);
      if (audit) {
        const double excess =
            std::abs(gv.v[i]) - G.L * std::abs(v[n].v[i]) - bt;
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

std::vector<GrowthBoundSample> growth_bound(const Nemytskii& G,
                                            const TimeMesh& mesh,
                                            const std::vector<GridFunction>& v) {
  auto gv = nemytskii_apply(G, mesh, v);
  std::vector<GrowthBoundSample> out(v.size());
  for (size_t n = 0; n < v.size(); ++n) {
    const double t = mesh.t[n];
    out[n].t = t;
    out[n].norm_Gv = norm(gv[n]);
    const double bt = G.b ? G.b(t) : 0.0;
    out[n].bound = G.L * norm(v[n]) + bt * std::sqrt(v[n].grid->measure());
  }
  return out;
}

}  // namespace semiflow
