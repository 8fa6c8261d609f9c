#pragma once

#include <array>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace semiflow {

/// Structured grid on a 1D interval or an axis-aligned 2D rectangle,
/// carrying trapezoidal quadrature weights for the L2 inner product.
class Grid {
 public:
  static std::shared_ptr<const Grid> interval(double length, int nodes);
  static std::shared_ptr<const Grid> rectangle(double lx, double ly, int nx,
                                               int ny);

  int dimension() const { return dim_; }
  int size() const { return n_[0] * n_[1]; }
  int nodes(int axis) const { return n_[axis]; }
  double extent(int axis) const { return extent_[axis]; }
  double spacing(int axis) const { return h_[axis]; }
  double measure() const;

  // node index helpers (2D index = i + nx*j)
  int index(int i, int j = 0) const { return i + n_[0] * j; }
  std::array<double, 2> coord(int idx) const;

  double weight(int idx) const { return w_[idx]; }
  const std::vector<double>& weights() const { return w_; }
  bool on_boundary(int idx) const { return boundary_mask_[idx]; }

  const std::vector<int>& boundary_nodes() const { return boundary_idx_; }
  const std::vector<double>& boundary_weights() const { return boundary_w_; }
  double boundary_measure() const;

 private:
  Grid() = default;
  void build();

  int dim_ = 1;
  std::array<double, 2> extent_{1.0, 0.0};
  std::array<int, 2> n_{2, 1};
  std::array<double, 2> h_{1.0, 0.0};
  std::vector<double> w_;
  std::vector<char> boundary_mask_;
  std::vector<int> boundary_idx_;
  std::vector<double> boundary_w_;
};

using GridPtr = std::shared_ptr<const Grid>;

/// Discrete element of H = L2(Omega): one value per grid node.
struct GridFunction {
  GridPtr grid;
  std::vector<double> v;

  GridFunction() = default;
  explicit GridFunction(GridPtr g, double fill = 0.0)
      : grid(std::move(g)), v(grid->size(), fill) {}

  double& operator[](int i) { return v[i]; }
  double operator[](int i) const { return v[i]; }
  int size() const { return static_cast<int>(v.size()); }
};

enum class Bc { dirichlet, neumann };

std::string to_string(Bc bc);

/// Edge set induced by a grid and a boundary condition. Dirichlet adds
/// ghost edges connecting boundary nodes to the zero extension outside
/// the domain; Neumann keeps interior edges only.
class EdgeSet {
 public:
  EdgeSet(GridPtr grid, Bc bc);

  int size() const { return static_cast<int>(weight_.size()); }
  GridPtr grid() const { return grid_; }
  Bc bc() const { return bc_; }

  // tail/head node index, -1 for the zero ghost
  int tail(int e) const { return tail_[e]; }
  int head(int e) const { return head_[e]; }
  double weight(int e) const { return weight_[e]; }
  double inv_h(int e) const { return inv_h_[e]; }

 private:
  GridPtr grid_;
  Bc bc_;
  std::vector<int> tail_, head_;
  std::vector<double> weight_, inv_h_;
};

/// One real per mesh edge (per axis in 2D).
struct EdgeField {
  std::shared_ptr<const EdgeSet> edges;
  std::vector<double> v;

  EdgeField() = default;
  explicit EdgeField(std::shared_ptr<const EdgeSet> e, double fill = 0.0)
      : edges(std::move(e)), v(edges->size(), fill) {}
};

// weighted L2 pairing on nodes
double inner_product(const GridFunction& u, const GridFunction& w);
double norm(const GridFunction& u);

// weighted pairing on edges
double edge_inner_product(const EdgeField& q, const EdgeField& r);

EdgeField gradient(const GridFunction& u,
                   const std::shared_ptr<const EdgeSet>& edges);
EdgeField gradient(const GridFunction& u, Bc bc);

// negative adjoint of gradient: (grad u, q)_E + (u, div q)_H = 0 exactly
GridFunction divergence(const EdgeField& q);

// in-place axpy-style helpers used across the solvers
void axpy(double a, const GridFunction& x, GridFunction& y);
GridFunction lin_comb(double a, const GridFunction& x, double b,
                      const GridFunction& y);

inline void require_same_grid(const GridFunction& a, const GridFunction& b) {
  if (a.grid != b.grid) {
    throw std::invalid_argument("grid mismatch");
  }
}

}  // namespace semiflow
