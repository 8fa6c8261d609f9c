#include "semiflow/energy.hpp"

#include <cmath>
#include <random>

namespace semiflow {

GraphSpec GraphSpec::none() { return GraphSpec(); }

GraphSpec GraphSpec::absolute_value() {
  GraphSpec g;
  g.kind_ = GraphKind::absolute_value;
  return g;
}

GraphSpec GraphSpec::indicator_interval(double a, double b) {
  if (!(a <= 0.0 && 0.0 <= b)) {
    throw std::invalid_argument("indicator interval must contain 0");
  }
  GraphSpec g;
  g.kind_ = GraphKind::indicator_interval;
  g.a_ = a;
  g.b_ = b;
  return g;
}

GraphSpec GraphSpec::power(double q) {
  if (!(q >= 1.0)) throw std::invalid_argument("power graph needs q >= 1");
  GraphSpec g;
  g.kind_ = GraphKind::power;
  g.q_ = q;
  return g;
}

GraphSpec GraphSpec::positive_part() {
  GraphSpec g;
  g.kind_ = GraphKind::positive_part;
  return g;
}

GraphSpec GraphSpec::custom_monotone(std::function<double(double)> beta) {
  if (!beta) throw std::invalid_argument("custom graph needs a selection");
  GraphSpec g;
  g.kind_ = GraphKind::custom_monotone;
  g.custom_ = std::move(beta);
  return g;
}

double GraphSpec::value(double v) const {
  switch (kind_) {
    case GraphKind::none:
      return 0.0;
    case GraphKind::absolute_value:
      return std::abs(v);
    case GraphKind::indicator_interval:
      return (v >= a_ && v <= b_) ? 0.0 : kInf;
    case GraphKind::power:
      return std::pow(std::abs(v), q_) / q_;
    case GraphKind::positive_part:
      return v > 0.0 ? v : 0.0;
    case GraphKind::custom_monotone: {
      // diagnostic only: composite Simpson of the selection from 0 to v
      const int panels = 64;
      const double h = v / (2 * panels);
      double s = custom_(0.0) + custom_(v);
      for (int k = 1; k < 2 * panels; ++k) {
        s += (k % 2 ? 4.0 : 2.0) * custom_(k * h);
      }
      return s * h / 3.0;
    }
  }
  return 0.0;
}

double GraphSpec::beta(double v) const {
  switch (kind_) {
    case GraphKind::none:
      return 0.0;
    case GraphKind::absolute_value:
      return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0);
    case GraphKind::indicator_interval:
      return 0.0;  // multivalued at the endpoints; resolvent is a clamp
    case GraphKind::power:
      return v == 0.0 ? 0.0 : std::pow(std::abs(v), q_ - 1.0) * (v > 0.0 ? 1.0 : -1.0);
    case GraphKind::positive_part:
      return v > 0.0 ? 1.0 : 0.0;
    case GraphKind::custom_monotone:
      return custom_(v);
  }
  return 0.0;
}

LowerOrder LowerOrder::none() { return LowerOrder{}; }

LowerOrder LowerOrder::linear(double c) {
  LowerOrder lo;
  lo.name = "linear";
  lo.f1 = [c](double, double, double u) { return c * u; };
  lo.F1 = [c](double, double, double u) { return 0.5 * c * u * u; };
  lo.omega1 = std::abs(c);
  return lo;
}

LowerOrder LowerOrder::sine(double a) {
  LowerOrder lo;
  lo.name = "sine";
  lo.f1 = [a](double, double, double u) { return a * std::sin(u); };
  lo.F1 = [a](double, double, double u) { return a * (1.0 - std::cos(u)); };
  lo.omega1 = std::abs(a);
  return lo;
}

namespace {
// 16-point Gauss-Legendre nodes/weights on [-1, 1], symmetric halves
constexpr double kGx[8] = {0.0950125098376374, 0.2816035507792589,
                           0.4580167776572274, 0.6178762444026438,
                           0.7554044083550030, 0.8656312023878318,
                           0.9445750230732326, 0.9894009349916499};
constexpr double kGw[8] = {0.1894506104550685, 0.1826034150449236,
                           0.1691565193950025, 0.1495959888165767,
                           0.1246289712555339, 0.0951585116824928,
                           0.0622535239386479, 0.0271524594117541};
}  // namespace

double gauss_antiderivative(const std::function<double(double, double, double)>& f1,
                            double x, double y, double u) {
  // two 16-point panels over [0, u]
  double total = 0.0;
  const double mids[2] = {0.25 * u, 0.75 * u};
  const double half = 0.25 * u;
  for (double mid : mids) {
    double s = 0.0;
    for (int k = 0; k < 8; ++k) {
      s += kGw[k] * (f1(x, y, mid + half * kGx[k]) + f1(x, y, mid - half * kGx[k]));
    }
    total += s * half;
  }
  return total;
}

EnergyFunctional::EnergyFunctional(GridPtr grid, SmoothPart smooth,
                                   GraphSpec graph, double extra_omega)
    : grid_(std::move(grid)),
      smooth_(std::move(smooth)),
      graph_(std::move(graph)) {
  if (!(smooth_.p > 1.0)) {
    throw std::invalid_argument("p-Dirichlet energy needs p > 1");
  }
  if (smooth_.eps < 0.0) throw std::invalid_argument("eps must be >= 0");
  edges_ = std::make_shared<const EdgeSet>(grid_, smooth_.bc);
  omega_ = std::max(smooth_.lower.omega1 + extra_omega - smooth_.quad_shift, 0.0);
}

double EnergyFunctional::smooth_value(const GridFunction& u) const {
  if (u.grid != grid_) throw std::invalid_argument("grid mismatch");
  const double p = smooth_.p;
  const double e2 = smooth_.eps * smooth_.eps;
  const double epow = smooth_.eps > 0.0 ? std::pow(smooth_.eps, p) : 0.0;
  double s = 0.0;
  if (smooth_.p_weight != 0.0) {
    const auto d = gradient(u, edges_);
    if (p == 2.0 && smooth_.eps == 0.0) {
      for (int e = 0; e < edges_->size(); ++e) {
        s += edges_->weight(e) * d.v[e] * d.v[e];
      }
    } else {
      for (int e = 0; e < edges_->size(); ++e) {
        s += edges_->weight(e) * (std::pow(d.v[e] * d.v[e] + e2, 0.5 * p) - epow);
      }
    }
    s *= smooth_.p_weight / p;
  }
  if (smooth_.lower.active()) {
    for (int i = 0; i < u.size(); ++i) {
      const auto xy = grid_->coord(i);
      const double F = smooth_.lower.F1
                           ? smooth_.lower.F1(xy[0], xy[1], u.v[i])
                           : gauss_antiderivative(smooth_.lower.f1, xy[0], xy[1], u.v[i]);
      s += grid_->weight(i) * F;
    }
  }
  if (smooth_.quad_shift != 0.0) {
    s += 0.5 * smooth_.quad_shift * inner_product(u, u);
  }
  return s;
}

double EnergyFunctional::graph_value(const GridFunction& u) const {
  if (graph_.kind() == GraphKind::none) return 0.0;
  double s = 0.0;
  for (int i = 0; i < u.size(); ++i) {
    const double j = graph_.value(u.v[i]);
    if (j == kInf) return kInf;
    s += grid_->weight(i) * j;
  }
  return s;
}

double EnergyFunctional::evaluate(const GridFunction& u) const {
  const double g = graph_value(u);
  if (g == kInf) return kInf;
  return smooth_value(u) + g;
}

double EnergyFunctional::evaluate_shifted(const GridFunction& u) const {
  const double phi = evaluate(u);
  if (phi == kInf) return kInf;
  return phi + 0.5 * omega_ * inner_product(u, u);
}

GridFunction EnergyFunctional::smooth_gradient(const GridFunction& u) const {
  if (u.grid != grid_) throw std::invalid_argument("grid mismatch");
  const double p = smooth_.p;
  const double e2 = smooth_.eps * smooth_.eps;
  if (p < 2.0 && smooth_.eps == 0.0) {
    throw std::invalid_argument("p < 2 needs eps > 0 for a defined gradient");
  }
  GridFunction g(grid_);
  if (smooth_.p_weight != 0.0) {
    EdgeField flux = gradient(u, edges_);
    if (p != 2.0 || smooth_.eps != 0.0) {
      for (int e = 0; e < edges_->size(); ++e) {
        const double d = flux.v[e];
        flux.v[e] = std::pow(d * d + e2, 0.5 * (p - 2.0)) * d;
      }
    }
    g = divergence(flux);
    for (int i = 0; i < g.size(); ++i) g.v[i] *= -smooth_.p_weight;
  }
  if (smooth_.lower.active()) {
    for (int i = 0; i < g.size(); ++i) {
      const auto xy = grid_->coord(i);
      g.v[i] += smooth_.lower.f1(xy[0], xy[1], u.v[i]);
    }
  }
  if (smooth_.quad_shift != 0.0) {
    for (int i = 0; i < g.size(); ++i) g.v[i] += smooth_.quad_shift * u.v[i];
  }
  return g;
}

EnergyFunctional EnergyFunctional::shifted(double extra) const {
  if (extra < 0.0) throw std::invalid_argument("shift must be >= 0");
  SmoothPart s = smooth_;
  s.quad_shift += extra;
  EnergyFunctional out(grid_, std::move(s), graph_);
  out.omega_ = std::max(omega_ - extra, 0.0);
  return out;
}

double convexity_probe(const EnergyFunctional& phi, unsigned seed, int trials) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  std::uniform_real_distribution<double> lam(0.0, 1.0);
  const GridPtr grid = phi.grid();
  const bool boxed = phi.graph().kind() == GraphKind::indicator_interval;

  auto sample = [&]() {
    GridFunction u(grid);
    for (int i = 0; i < u.size(); ++i) {
      u.v[i] = unif(rng);
      if (boxed) {
        u.v[i] = std::min(std::max(u.v[i], phi.graph().lower()),
                          phi.graph().upper());
      }
    }
    return u;
  };

  double worst = -kInf;
  for (int k = 0; k < trials; ++k) {
    const GridFunction u = sample();
    const GridFunction v = sample();
    const double t = lam(rng);
    const GridFunction mid = lin_comb(t, u, 1.0 - t, v);
    const double lhs = phi.evaluate_shifted(mid);
    const double rhs =
        t * phi.evaluate_shifted(u) + (1.0 - t) * phi.evaluate_shifted(v);
    const double defect = lhs - rhs - 1e-10 * (1.0 + std::abs(rhs));
    worst = std::max(worst, defect);
  }
  return worst;
}

}  // namespace semiflow
