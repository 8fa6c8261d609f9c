#include <cmath>
#include <random>

#include "doctest.h"
#include "semiflow/grid.hpp"

using namespace semiflow;

namespace {
const double kPi = std::acos(-1.0);

GridFunction random_fn(const GridPtr& g, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  GridFunction u(g);
  for (auto& x : u.v) x = unif(rng);
  return u;
}
}  // namespace

TEST_CASE("interval grid quadrature") {
  auto g = Grid::interval(2.0, 41);
  CHECK(g->dimension() == 1);
  CHECK(g->size() == 41);
  CHECK(g->spacing(0) == doctest::Approx(0.05).epsilon(1e-14));

  double wsum = 0.0;
  for (double w : g->weights()) {
    CHECK(w > 0.0);
    wsum += w;
  }
  CHECK(wsum == doctest::Approx(g->measure()).epsilon(1e-12));
  CHECK(g->measure() == doctest::Approx(2.0).epsilon(1e-12));

  // trapezoid weights integrate affine functions exactly
  GridFunction x(g), one(g, 1.0);
  for (int i = 0; i < g->size(); ++i) x.v[i] = g->coord(i)[0];
  CHECK(inner_product(x, one) == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("rectangle grid geometry") {
  auto g = Grid::rectangle(1.0, 2.0, 5, 9);
  CHECK(g->dimension() == 2);
  CHECK(g->size() == 45);
  CHECK(g->measure() == doctest::Approx(2.0).epsilon(1e-12));

  int boundary_count = 0;
  for (int i = 0; i < g->size(); ++i) {
    if (g->on_boundary(i)) ++boundary_count;
  }
  CHECK(boundary_count == 2 * 5 + 2 * 9 - 4);
  CHECK(static_cast<int>(g->boundary_nodes().size()) == boundary_count);
  CHECK(g->boundary_measure() == doctest::Approx(6.0).epsilon(1e-12));

  // index/coord round trip
  const int idx = g->index(3, 4);
  CHECK(g->coord(idx)[0] == doctest::Approx(3.0 / 4.0).epsilon(1e-14));
  CHECK(g->coord(idx)[1] == doctest::Approx(2.0 * 4.0 / 8.0).epsilon(1e-14));
}

TEST_CASE("inner product and norm") {
  auto g = Grid::interval(1.0, 256);
  GridFunction one(g, 1.0), zero(g);
  CHECK(inner_product(one, one) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(inner_product(one, zero) == 0.0);

  GridFunction s(g);
  for (int i = 0; i < g->size(); ++i) s.v[i] = std::sin(kPi * g->coord(i)[0]);
  CHECK(inner_product(s, s) == doctest::Approx(0.5).epsilon(1e-3));

  CHECK(norm(zero) == 0.0);
  GridFunction c(g, -3.0);
  CHECK(norm(c) == doctest::Approx(3.0 * std::sqrt(g->measure())).epsilon(1e-12));

  auto g2 = Grid::interval(1.0, 8);
  GridFunction other(g2);
  CHECK_THROWS_AS((void)inner_product(one, other), std::invalid_argument);

  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    GridFunction a = random_fn(g, rng), b = random_fn(g, rng);
    CHECK(norm(lin_comb(1.0, a, 1.0, b)) <= norm(a) + norm(b) + 1e-12);
  }
}

TEST_CASE("gradient stencils") {
  auto g = Grid::interval(1.0, 17);

  GridFunction c(g, 4.0);
  EdgeField gc = gradient(c, Bc::neumann);
  for (double d : gc.v) CHECK(d == 0.0);

  GridFunction ramp(g);
  for (int i = 0; i < g->size(); ++i) ramp.v[i] = g->coord(i)[0];
  EdgeField gr = gradient(ramp, Bc::neumann);
  CHECK(static_cast<int>(gr.v.size()) == 16);
  for (double d : gr.v) CHECK(d == doctest::Approx(1.0).epsilon(1e-12));

  // Dirichlet adds the two ghost edges
  EdgeField gd = gradient(ramp, Bc::dirichlet);
  CHECK(static_cast<int>(gd.v.size()) == 18);
}

TEST_CASE("divergence is the negative adjoint of gradient") {
  std::mt19937_64 rng(11);
  for (Bc bc : {Bc::dirichlet, Bc::neumann}) {
    for (const auto& g :
         {Grid::interval(1.5, 13), Grid::rectangle(1.0, 0.5, 7, 5)}) {
      auto edges = std::make_shared<const EdgeSet>(g, bc);
      GridFunction u = random_fn(g, rng);
      EdgeField q(edges);
      std::uniform_real_distribution<double> unif(-1.0, 1.0);
      for (auto& x : q.v) x = unif(rng);

      const double a = edge_inner_product(gradient(u, edges), q);
      const double b = inner_product(u, divergence(q));
      CHECK(a + b == doctest::Approx(0.0).epsilon(1e-12));
    }
  }
}

TEST_CASE("divergence of trivial fields") {
  auto g = Grid::interval(1.0, 21);
  auto edges = std::make_shared<const EdgeSet>(g, Bc::neumann);
  EdgeField zero(edges);
  for (double d : divergence(zero).v) CHECK(d == 0.0);

  // constant flux telescopes away from the boundary
  EdgeField flux(edges, 2.5);
  GridFunction div = divergence(flux);
  for (int i = 1; i + 1 < g->size(); ++i) {
    CHECK(div.v[i] == doctest::Approx(0.0).epsilon(1e-12));
  }
}
