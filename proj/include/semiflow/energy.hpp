#pragma once

#include <functional>
#include <limits>
#include <string>

#include "semiflow/grid.hpp"

namespace semiflow {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class GraphKind {
  none,
  absolute_value,
  indicator_interval,
  power,
  positive_part,
  custom_monotone,
};

/// Pointwise convex potential j : R -> (-inf, +inf] with j(0) = 0 and
/// (0,0) in the maximal monotone graph beta = dj.
class GraphSpec {
 public:
  GraphSpec() = default;

  static GraphSpec none();
  static GraphSpec absolute_value();
  static GraphSpec indicator_interval(double a, double b);
  static GraphSpec power(double q);  // j(v) = |v|^q / q, q >= 1
  static GraphSpec positive_part();
  // beta given as a nondecreasing selection with beta(0) = 0; jumps allowed
  static GraphSpec custom_monotone(std::function<double(double)> beta);

  GraphKind kind() const { return kind_; }
  double lower() const { return a_; }
  double upper() const { return b_; }
  double exponent() const { return q_; }

  double value(double v) const;  // j(v), may be +inf
  // a selection of beta(v); used by the bisection resolvent
  double beta(double v) const;

 private:
  GraphKind kind_ = GraphKind::none;
  double a_ = 0.0, b_ = 0.0;
  double q_ = 1.0;
  std::function<double(double)> custom_;
};

/// Lipschitz-Caratheodory lower order term f1(x, u) with f1(x, 0) = 0,
/// its antiderivative F1 in u, and the declared Lipschitz constant.
struct LowerOrder {
  std::string name = "none";
  // f1(x, y, u); y ignored in 1D
  std::function<double(double, double, double)> f1;
  // closed form antiderivative; null falls back to Gauss quadrature
  std::function<double(double, double, double)> F1;
  double omega1 = 0.0;

  static LowerOrder none();
  static LowerOrder linear(double c);     // f1 = c*u, omega1 = |c|
  static LowerOrder sine(double a);       // f1 = a*sin(u), omega1 = |a|
  bool active() const { return static_cast<bool>(f1); }
};

struct SmoothPart {
  double p = 2.0;
  double p_weight = 1.0;  // 0 disables the p-Dirichlet part entirely
  Bc bc = Bc::dirichlet;
  double eps = 0.0;  // gradient regularization, needed when 1 < p < 2
  LowerOrder lower;
  double quad_shift = 0.0;  // explicit (extra/2)||u||^2 added by shifted()
};

/// Semiconvex energy phi = p-Dirichlet part + lower order term + pointwise
/// graph part, with declared shift omega making phi_omega convex.
class EnergyFunctional {
 public:
  EnergyFunctional(GridPtr grid, SmoothPart smooth, GraphSpec graph = GraphSpec::none(),
                   double extra_omega = 0.0);

  double evaluate(const GridFunction& u) const;          // phi(u), may be +inf
  double evaluate_shifted(const GridFunction& u) const;  // phi_omega(u)
  double smooth_value(const GridFunction& u) const;
  double graph_value(const GridFunction& u) const;

  // Riesz representer of the directional derivative of the smooth part
  GridFunction smooth_gradient(const GridFunction& u) const;

  EnergyFunctional shifted(double extra) const;

  double omega() const { return omega_; }
  double p() const { return smooth_.p; }
  Bc bc() const { return smooth_.bc; }
  double eps() const { return smooth_.eps; }
  const GraphSpec& graph() const { return graph_; }
  const LowerOrder& lower_order() const { return smooth_.lower; }
  GridPtr grid() const { return grid_; }
  const std::shared_ptr<const EdgeSet>& edges() const { return edges_; }

 private:
  GridPtr grid_;
  SmoothPart smooth_;
  GraphSpec graph_;
  std::shared_ptr<const EdgeSet> edges_;
  double omega_ = 0.0;
};

/// Samples the convexity inequality of phi_omega on seeded random triples
/// (u, v, lambda); returns the worst defect (positive = violation beyond
/// roundoff). Used to validate the declared shift on scenario load.
double convexity_probe(const EnergyFunctional& phi, unsigned seed,
                       int trials = 32);

// numeric antiderivative of f1(x, y, .) from 0 to u (32-point Gauss-Legendre)
double gauss_antiderivative(const std::function<double(double, double, double)>& f1,
                            double x, double y, double u);

}  // namespace semiflow
