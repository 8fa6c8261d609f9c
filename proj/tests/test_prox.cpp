#include <algorithm>
#include <cmath>
#include <random>

#include "doctest.h"
#include "oracle.hpp"
#include "semiflow/prox.hpp"

using namespace semiflow;

namespace {
GridFunction random_fn(const GridPtr& g, std::mt19937_64& rng, double amp = 1.0) {
  std::uniform_real_distribution<double> unif(-amp, amp);
  GridFunction u(g);
  for (auto& x : u.v) x = unif(rng);
  return u;
}

EnergyFunctional zero_energy(const GridPtr& g,
                             GraphSpec graph = GraphSpec::none()) {
  SmoothPart sp;
  sp.p_weight = 0.0;
  sp.bc = Bc::neumann;
  return EnergyFunctional(g, sp, std::move(graph));
}

ProxResult prox(const EnergyFunctional& phi, double tau, GridFunction anchor,
                double tol = 1e-11, int max_iterations = 20000) {
  ProxProblem pb;
  pb.energy = &phi;
  pb.tau = tau;
  pb.anchor = std::move(anchor);
  pb.tol = tol;
  pb.max_iterations = max_iterations;
  return solve_prox(pb);
}
}  // namespace

TEST_CASE("scalar resolvent closed forms") {
  CHECK(scalar_resolvent(GraphSpec::none(), 0.3, 3.7) == 3.7);
  CHECK(scalar_resolvent(GraphSpec::absolute_value(), 1.0, 2.0) ==
        doctest::Approx(1.0));
  CHECK(scalar_resolvent(GraphSpec::absolute_value(), 1.0, 0.5) == 0.0);
  CHECK(scalar_resolvent(GraphSpec::indicator_interval(0.0, 1.0), 0.7, -3.0) ==
        0.0);
  // power(2): v + tau*v = z
  CHECK(scalar_resolvent(GraphSpec::power(2.0), 0.5, 3.0) ==
        doctest::Approx(2.0).epsilon(1e-10));
  CHECK_THROWS_AS(scalar_resolvent(GraphSpec::none(), 0.0, 1.0),
                  std::invalid_argument);
}

TEST_CASE("scalar resolvent agrees with the grid-search oracle") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> zdist(-4.0, 4.0);
  std::uniform_real_distribution<double> taudist(0.01, 2.0);
  const GraphSpec graphs[] = {
      GraphSpec::none(),
      GraphSpec::absolute_value(),
      GraphSpec::indicator_interval(-0.5, 1.0),
      GraphSpec::power(3.0),
      GraphSpec::positive_part(),
      GraphSpec::custom_monotone([](double v) { return std::atan(v); }),
  };
  for (const auto& j : graphs) {
    for (int k = 0; k < 100; ++k) {
      const double tau = taudist(rng), z = zdist(rng);
      const double mine = scalar_resolvent(j, tau, z);
      const double ref = oracle::grid_search_resolvent(j, tau, z);
      CHECK(std::abs(mine - ref) <= 1e-6);
    }
  }
}

TEST_CASE("prox of the zero energy is the identity") {
  auto g = Grid::interval(1.0, 16);
  auto phi = zero_energy(g);
  std::mt19937_64 rng(1);
  GridFunction z = random_fn(g, rng);
  auto res = prox(phi, 0.37, z);
  for (int i = 0; i < z.size(); ++i) {
    CHECK(res.minimizer.v[i] == z.v[i]);
    CHECK(res.selection.v[i] == 0.0);
  }
}

TEST_CASE("prox of the heat energy matches a dense solve") {
  auto g = Grid::interval(1.0, 64);
  SmoothPart sp;
  sp.bc = Bc::dirichlet;
  EnergyFunctional phi(g, sp);
  std::mt19937_64 rng(2);
  GridFunction z = random_fn(g, rng);
  const double tau = 0.01;

  auto res = prox(phi, tau, z);

  const int n = g->size();
  const Eigen::MatrixXd A = oracle::dense_operator(phi);
  const Eigen::VectorXd ref =
      (Eigen::MatrixXd::Identity(n, n) + tau * A).lu().solve(oracle::to_vec(z));
  for (int i = 0; i < n; ++i) {
    CHECK(res.minimizer.v[i] == doctest::Approx(ref[i]).epsilon(1e-8));
  }
}

TEST_CASE("graph-only prox is the pointwise soft threshold") {
  auto g = Grid::interval(1.0, 32);
  auto phi = zero_energy(g, GraphSpec::absolute_value());
  std::mt19937_64 rng(3);
  GridFunction z = random_fn(g, rng, 2.0);
  const double tau = 0.4;
  auto res = prox(phi, tau, z);
  for (int i = 0; i < z.size(); ++i) {
    const double expected =
        scalar_resolvent(GraphSpec::absolute_value(), tau, z.v[i]);
    CHECK(res.minimizer.v[i] == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("nonexpansiveness of convex resolvents") {
  std::mt19937_64 rng(4);
  auto g = Grid::interval(1.0, 24);
  SmoothPart sp;
  sp.bc = Bc::dirichlet;
  EnergyFunctional heat(g, sp);
  auto obstacle = zero_energy(g, GraphSpec::indicator_interval(-0.3, 0.3));
  const double tau = 0.05;
  for (const auto& phi : {heat, obstacle}) {
    for (int k = 0; k < 25; ++k) {
      GridFunction z1 = random_fn(g, rng), z2 = random_fn(g, rng);
      auto r1 = prox(phi, tau, z1), r2 = prox(phi, tau, z2);
      const double lhs = norm(lin_comb(1.0, r1.minimizer, -1.0, r2.minimizer));
      const double rhs = norm(lin_comb(1.0, z1, -1.0, z2));
      CHECK(lhs <= rhs + 2e-10);
    }
  }
}

TEST_CASE("semiconvex resolvents obey the 1/(1 - tau omega) bound") {
  std::mt19937_64 rng(5);
  auto g = Grid::interval(1.0, 24);
  SmoothPart sp;
  sp.bc = Bc::neumann;
  sp.lower = LowerOrder::linear(-1.0);
  EnergyFunctional phi(g, sp);
  REQUIRE(phi.omega() == 1.0);
  const double tau = 0.5;
  const double lip = 1.0 / (1.0 - tau * phi.omega());
  for (int k = 0; k < 25; ++k) {
    GridFunction z1 = random_fn(g, rng), z2 = random_fn(g, rng);
    auto r1 = prox(phi, tau, z1, 1e-11, 200000);
    auto r2 = prox(phi, tau, z2, 1e-11, 200000);
    const double lhs = norm(lin_comb(1.0, r1.minimizer, -1.0, r2.minimizer));
    const double rhs = lip * norm(lin_comb(1.0, z1, -1.0, z2));
    CHECK(lhs <= rhs + 2e-10);
  }
}

TEST_CASE("selection satisfies the subgradient inequality") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  auto g = Grid::interval(1.0, 16);
  SmoothPart dirichlet;
  dirichlet.bc = Bc::dirichlet;
  SmoothPart semiconvex;
  semiconvex.bc = Bc::neumann;
  semiconvex.lower = LowerOrder::linear(-0.8);
  std::vector<EnergyFunctional> energies;
  energies.emplace_back(g, dirichlet);
  energies.emplace_back(g, dirichlet, GraphSpec::absolute_value());
  energies.push_back(zero_energy(g, GraphSpec::indicator_interval(-0.4, 0.4)));
  energies.emplace_back(g, semiconvex);

  const double scales[] = {1.0, 1e-2, 1e-4, 1e-6};
  for (const auto& phi : energies) {
    const double tau = 0.05;
    GridFunction z = random_fn(g, rng);
    auto res = prox(phi, tau, z);
    const GridFunction& v = res.minimizer;
    const double phi_v = phi.evaluate_shifted(v);
    for (int k = 0; k < 100; ++k) {
      GridFunction w(g);
      const double scale = scales[k % 4];
      for (int i = 0; i < w.size(); ++i) {
        w.v[i] = v.v[i] + scale * unif(rng);
        if (phi.graph().kind() == GraphKind::indicator_interval) {
          w.v[i] = std::clamp(w.v[i], phi.graph().lower(), phi.graph().upper());
        }
      }
      const GridFunction dw = lin_comb(1.0, w, -1.0, v);
      const double pairing =
          inner_product(res.selection, dw) + phi.omega() * inner_product(v, dw);
      const double gap = phi.evaluate_shifted(w) - phi_v - pairing;
      CHECK(gap >= -1e-8 * (1.0 + norm(dw)));
    }
  }
}

TEST_CASE("prox rejects degenerate problems") {
  auto g = Grid::interval(1.0, 8);
  SmoothPart sp;
  sp.bc = Bc::neumann;
  sp.lower = LowerOrder::linear(-1.0);
  EnergyFunctional phi(g, sp);
  CHECK_THROWS_AS((void)prox(phi, 1.0, GridFunction(g)),
                  std::invalid_argument);  // tau*omega = 1
  CHECK_THROWS_AS((void)prox(phi, -0.1, GridFunction(g)),
                  std::invalid_argument);

  SmoothPart heat;
  heat.bc = Bc::dirichlet;
  EnergyFunctional stiff(Grid::interval(1.0, 128), heat);
  ProxProblem pb;
  pb.energy = &stiff;
  pb.tau = 0.01;
  pb.anchor = GridFunction(stiff.grid(), 1.0);
  pb.tol = 1e-12;
  pb.max_iterations = 2;
  CHECK_THROWS_AS((void)solve_prox(pb), ProxError);
}
