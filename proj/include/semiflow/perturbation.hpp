#pragma once

#include <functional>
#include <string>
#include <vector>

#include "semiflow/evolution.hpp"

namespace semiflow {

/// Nemytskii operator (Gv)(t,x) = g(t, x, v(t,x)) from a catalog of
/// Caratheodory integrands with documented sublinear growth constants
/// |g(t,x,v)| <= L|v| + b(t).
struct Nemytskii {
  std::string name;
  std::function<double(double t, double x, double y, double v)> g;
  double L = 0.0;
  std::function<double(double t)> b;  // nonnegative envelope

  static Nemytskii sqrt_abs();        // sqrt(|v|); L = 1, b = 1
  static Nemytskii linear(double lam);
  static Nemytskii logistic(double a);  // a*v/(1+v^2); L = 0, b = |a|/2
  static Nemytskii affine_forced(double lam,
                                 std::function<double(double, double, double)> f,
                                 std::function<double(double)> f_sup);
};

struct GrowthAudit {
  double worst_violation = 0.0;  // max over samples of (|Gv| - L|v| - b(t))_+
  int worst_time_index = -1;
  int samples = 0;
};

/// Pointwise application along a trajectory of samples aligned with a mesh.
std::vector<GridFunction> nemytskii_apply(const Nemytskii& G,
                                          const TimeMesh& mesh,
                                          const std::vector<GridFunction>& v,
                                          GrowthAudit* audit = nullptr);

struct GrowthBoundSample {
  double t;
  double norm_Gv;  // ||Gv(t)||_H
  double bound;    // L ||v(t)||_H + b(t) sqrt(|Omega|)
};

std::vector<GrowthBoundSample> growth_bound(const Nemytskii& G,
                                            const TimeMesh& mesh,
                                            const std::vector<GridFunction>& v);

}  // namespace semiflow
