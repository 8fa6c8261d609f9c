#include "semiflow/estimates.hpp"

#include <cmath>
#include <random>

namespace semiflow {

namespace {

double ratio_of(double lhs, double rhs) {
  if (lhs <= 0.0) return 0.0;
  if (rhs > 0.0) return lhs / rhs;
  return kInf;
}

EstimateEntry make_entry(std::string name, double ratio, double slack,
                         int worst_index) {
  EstimateEntry e;
  e.name = std::move(name);
  e.ratio = ratio;
  e.slack = slack;
  e.pass = ratio <= slack;
  e.worst_time_index = worst_index;
  return e;
}

void require_nonempty(const Trajectory& tr) {
  if (tr.state.empty()) throw std::invalid_argument("empty trajectory");
}

// int_0^T ||f||^2 with f piecewise constant on (t_n, t_{n+1}]
double forcing_square_integral(const Trajectory& tr) {
  double s = 0.0;
  for (int n = 0; n < tr.steps(); ++n) {
    const double fn = norm(tr.forcing[n]);
    s += tr.mesh.tau(n) * fn * fn;
  }
  return s;
}

// int_0^T t ||f||^2, exact for the piecewise-constant forcing
double weighted_forcing_square_integral(const Trajectory& tr) {
  double s = 0.0;
  for (int n = 0; n < tr.steps(); ++n) {
    const double fn = norm(tr.forcing[n]);
    const double a = tr.mesh.t[n], b = tr.mesh.t[n + 1];
    s += 0.5 * (b * b - a * a) * fn * fn;
  }
  return s;
}

// int_0^T phi(u) by the left-endpoint rule
double energy_integral(const Trajectory& tr) {
  double s = 0.0;
  for (int n = 0; n < tr.steps(); ++n) s += tr.mesh.tau(n) * tr.energy[n];
  return s;
}

}  // namespace

bool EstimateReport::all_pass() const {
  for (const auto& e : entries) {
    if (!e.pass) return false;
  }
  return true;
}

const EstimateEntry* EstimateReport::find(const std::string& name) const {
  for (const auto& e : entries) {
    if (e.name == name) return &e;
  }
  return nullptr;
}

EstimateEntry check_apriori(const Trajectory& tr, double omega, double slack) {
  require_nonempty(tr);
  const double base =
      std::sqrt(inner_product(tr.state[0], tr.state[0]) +
                forcing_square_integral(tr));
  double worst = 0.0;
  int worst_index = -1;
  for (size_t n = 0; n < tr.state.size(); ++n) {
    const double lhs = norm(tr.state[n]);
    const double rhs = base * std::exp(0.5 * (1.0 + 2.0 * omega) * tr.mesh.t[n]);
    const double r = ratio_of(lhs, rhs);
    if (r > worst) {
      worst = r;
      worst_index = static_cast<int>(n);
    }
  }
  return make_entry("apriori_bound", worst, slack, worst_index);
}

EstimateEntry check_energy_integral(const Trajectory& tr, double omega,
                                    double slack) {
  require_nonempty(tr);
  double state_sq = 0.0;
  for (int n = 0; n < tr.steps(); ++n) {
    state_sq += tr.mesh.tau(n) * inner_product(tr.state[n], tr.state[n]);
  }
  const double lhs = energy_integral(tr);
  const double rhs = 0.5 * forcing_square_integral(tr) +
                     0.5 * (1.0 + omega) * state_sq +
                     0.5 * inner_product(tr.state[0], tr.state[0]);
  return make_entry("energy_integral", ratio_of(lhs, rhs), slack, -1);
}

EstimateEntry check_smoothing(const Trajectory& tr, double slack) {
  require_nonempty(tr);
  const double rhs =
      energy_integral(tr) + 0.5 * weighted_forcing_square_integral(tr);
  double worst = 0.0;
  int worst_index = -1;
  for (size_t n = 1; n < tr.state.size(); ++n) {
    const double r = ratio_of(tr.mesh.t[n] * tr.energy[n], rhs);
    if (r > worst) {
      worst = r;
      worst_index = static_cast<int>(n);
    }
  }
  return make_entry("smoothing", worst, slack, worst_index);
}

EstimateEntry check_timeweighted_velocity(const Trajectory& tr, double slack) {
  require_nonempty(tr);
  double lhs = 0.0;
  for (int n = 0; n < tr.steps(); ++n) {
    const GridFunction du =
        lin_comb(1.0, tr.state[n + 1], -1.0, tr.state[n]);
    const double speed = norm(du) / tr.mesh.tau(n);
    lhs += tr.mesh.tau(n) * tr.mesh.t[n + 1] * speed * speed;
  }
  const double rhs =
      2.0 * energy_integral(tr) + weighted_forcing_square_integral(tr);
  return make_entry("timeweighted_velocity", ratio_of(lhs, rhs), slack, -1);
}

EstimateEntry check_contraction(const Trajectory& tr1, const Trajectory& tr2,
                                double omega, double slack) {
  require_nonempty(tr1);
  require_nonempty(tr2);
  if (tr1.mesh.t != tr2.mesh.t) throw std::invalid_argument("mesh mismatch");
  if (tr1.state[0].grid != tr2.state[0].grid) {
    throw std::invalid_argument("grid mismatch");
  }
  const double d0 = norm(lin_comb(1.0, tr1.state[0], -1.0, tr2.state[0]));
  std::vector<double> df(tr1.steps());
  for (int n = 0; n < tr1.steps(); ++n) {
    df[n] = norm(lin_comb(1.0, tr1.forcing[n], -1.0, tr2.forcing[n]));
  }
  double worst = 0.0;
  int worst_index = -1;
  for (size_t n = 0; n < tr1.state.size(); ++n) {
    const double t = tr1.mesh.t[n];
    double rhs = std::exp(omega * t) * d0;
    for (size_t m = 0; m < n; ++m) {
      const double a = tr1.mesh.t[m], b = tr1.mesh.t[m + 1];
      const double weight =
          omega == 0.0
              ? (b - a)
              : (std::exp(omega * (t - a)) - std::exp(omega * (t - b))) / omega;
      rhs += weight * df[m];
    }
    const double lhs = norm(lin_comb(1.0, tr1.state[n], -1.0, tr2.state[n]));
    const double r = ratio_of(lhs, rhs);
    if (r > worst) {
      worst = r;
      worst_index = static_cast<int>(n);
    }
  }
  return make_entry("contraction", worst, slack, worst_index);
}

EstimateEntry check_dissipation(const EnergyFunctional& phi,
                                const Trajectory& tr, double tol) {
  require_nonempty(tr);
  double worst = 0.0;
  int worst_index = -1;
  for (int n = 0; n < tr.steps(); ++n) {
    const GridFunction du = lin_comb(1.0, tr.state[n + 1], -1.0, tr.state[n]);
    const double kinetic =
        inner_product(du, du) / (2.0 * tr.mesh.tau(n));
    const double violation = tr.energy[n + 1] + kinetic - tr.energy[n];
    if (violation > worst) {
      worst = violation;
      worst_index = n + 1;
    }
  }
  (void)phi;
  return make_entry("dissipation", worst / tol, 1.0, worst_index);
}

EstimateEntry check_chain_rule(const EnergyFunctional& phi,
                               const Trajectory& tr, double tol) {
  require_nonempty(tr);
  const std::vector<double> defects = chain_rule_residuals(phi, tr);
  double worst = 0.0;
  int worst_index = -1;
  for (size_t n = 0; n < defects.size(); ++n) {
    const double scale = 1.0 + std::abs(tr.energy[n]);
    const double r = std::max(-defects[n], 0.0) / (tol * scale);
    if (r > worst) {
      worst = r;
      worst_index = static_cast<int>(n) + 1;
    }
  }
  return make_entry("chain_rule", worst, 1.0, worst_index);
}

EstimateEntry check_subgradient(const EnergyFunctional& phi,
                                const Trajectory& tr, unsigned seed,
                                int directions_per_step, double tol) {
  require_nonempty(tr);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  const double omega = phi.omega();
  const bool boxed = phi.graph().kind() == GraphKind::indicator_interval;

  double worst = 0.0;
  int worst_index = -1;
  for (int n = 0; n < tr.steps(); ++n) {
    const GridFunction& u = tr.state[n + 1];
    const GridFunction& g = tr.selection[n];
    const double phi_u = phi.evaluate_shifted(u);
    double amplitude = 1.0;
    for (double x : u.v) amplitude = std::max(amplitude, std::abs(x));
    for (int d = 0; d < directions_per_step; ++d) {
      GridFunction w(u.grid);
      for (int i = 0; i < w.size(); ++i) {
        w.v[i] = u.v[i] + amplitude * unif(rng);
        if (boxed) {
          w.v[i] = std::min(std::max(w.v[i], phi.graph().lower()),
                            phi.graph().upper());
        }
      }
      const GridFunction dw = lin_comb(1.0, w, -1.0, u);
      const double pairing = inner_product(g, dw) + omega * inner_product(u, dw);
      const double violation = phi_u + pairing - phi.evaluate_shifted(w);
      const double r = violation / (tol * (1.0 + norm(w)));
      if (r > worst) {
        worst = r;
        worst_index = n + 1;
      }
    }
  }
  return make_entry("subgradient_selection", std::max(worst, 0.0), 1.0,
                    worst_index);
}

EstimateEntry check_selection_accuracy(const EnergyFunctional& phi,
                                       const Trajectory& tr, double tol,
                                       int max_samples, double resolve_tol) {
  require_nonempty(tr);
  const int steps = tr.steps();
  const int samples = std::min(steps, max_samples);
  double worst = 0.0;
  int worst_index = -1;
  for (int k = 0; k < samples; ++k) {
    const int n = static_cast<int>(
        (static_cast<long long>(k) * steps) / samples);
    const double tau = tr.mesh.tau(n);
    GridFunction anchor = tr.state[n];
    axpy(tau, tr.forcing[n], anchor);
    ProxProblem pb;
    pb.energy = &phi;
    pb.tau = tau;
    pb.anchor = std::move(anchor);
    pb.tol = resolve_tol;
    pb.max_iterations = 200000;
    double distance;
    try {
      const ProxResult res = solve_prox(pb);
      distance = norm(lin_comb(1.0, res.minimizer, -1.0, tr.state[n + 1]));
    } catch (const ProxError&) {
      distance = kInf;
    }
    const double scale = tol * (1.0 + norm(tr.state[n + 1]));
    const double r = distance / scale;
    if (r > worst) {
      worst = r;
      worst_index = n + 1;
    }
  }
  return make_entry("selection_accuracy", worst, 1.0, worst_index);
}

EstimateReport full_report(const EnergyFunctional& phi, const Trajectory& tr,
                           const ReportOptions& opt) {
  require_nonempty(tr);
  EstimateReport report;
  report.entries.push_back(check_apriori(tr, phi.omega(), opt.slack));
  report.entries.push_back(check_energy_integral(tr, phi.omega(), opt.slack));
  if (phi.omega() == 0.0) {
    // smoothing and time-weighted velocity hold for convex energies only
    report.entries.push_back(check_smoothing(tr, opt.smoothing_slack));
    report.entries.push_back(
        check_timeweighted_velocity(tr, opt.velocity_slack));
  }
  report.entries.push_back(check_chain_rule(phi, tr, opt.selection_tol));
  report.entries.push_back(check_subgradient(
      phi, tr, opt.seed, opt.directions_per_step, opt.selection_tol));
  report.entries.push_back(
      check_selection_accuracy(phi, tr, opt.selection_tol));
  if (opt.include_dissipation) {
    report.entries.push_back(check_dissipation(phi, tr, opt.dissipation_tol));
  }
  for (auto& e : report.entries) {
    auto it = opt.slack_overrides.find(e.name);
    if (it != opt.slack_overrides.end()) {
      e.slack = it->second;
      e.pass = e.ratio <= e.slack;
    }
  }
  return report;
}

}  // namespace semiflow
