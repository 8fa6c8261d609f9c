#include "semiflow/grid.hpp"

#include <cmath>

namespace semiflow {

std::shared_ptr<const Grid> Grid::interval(double length, int nodes) {
  if (!(length > 0.0) || nodes < 2) {
    throw std::invalid_argument("interval grid needs length > 0, nodes >= 2");
  }
  auto g = std::shared_ptr<Grid>(new Grid());
  g->dim_ = 1;
  g->extent_ = {length, 0.0};
  g->n_ = {nodes, 1};
  g->h_ = {length / (nodes - 1), 0.0};
  g->build();
  return g;
}

std::shared_ptr<const Grid> Grid::rectangle(double lx, double ly, int nx,
                                            int ny) {
  if (!(lx > 0.0) || !(ly > 0.0) || nx < 2 || ny < 2) {
    throw std::invalid_argument("rectangle grid needs positive extents, nodes >= 2");
  }
  auto g = std::shared_ptr<Grid>(new Grid());
  g->dim_ = 2;
  g->extent_ = {lx, ly};
  g->n_ = {nx, ny};
  g->h_ = {lx / (nx - 1), ly / (ny - 1)};
  g->build();
  return g;
}

namespace {
// trapezoid weights along one axis: half weight at the endpoints
double axis_weight(int i, int n, double h) {
  return (i == 0 || i == n - 1) ? 0.5 * h : h;
}
}  // namespace

void Grid::build() {
  const int total = size();
  w_.resize(total);
  boundary_mask_.assign(total, 0);
  if (dim_ == 1) {
    for (int i = 0; i < n_[0]; ++i) {
      w_[i] = axis_weight(i, n_[0], h_[0]);
    }
    boundary_mask_[0] = 1;
    boundary_mask_[n_[0] - 1] = 1;
    boundary_idx_ = {0, n_[0] - 1};
    // counting measure on the two endpoints
    boundary_w_ = {1.0, 1.0};
  } else {
    for (int j = 0; j < n_[1]; ++j) {
      for (int i = 0; i < n_[0]; ++i) {
        w_[index(i, j)] = axis_weight(i, n_[0], h_[0]) * axis_weight(j, n_[1], h_[1]);
        if (i == 0 || i == n_[0] - 1 || j == 0 || j == n_[1] - 1) {
          boundary_mask_[index(i, j)] = 1;
        }
      }
    }
    for (int j = 0; j < n_[1]; ++j) {
      for (int i = 0; i < n_[0]; ++i) {
        if (!boundary_mask_[index(i, j)]) continue;
        boundary_idx_.push_back(index(i, j));
        const bool corner_x = (i == 0 || i == n_[0] - 1);
        const bool corner_y = (j == 0 || j == n_[1] - 1);
        double bw = 0.0;
        // perimeter trapezoid: edge nodes carry h of their edge, corners
        // carry half of each adjacent edge
        if (corner_x && corner_y) {
          bw = 0.5 * (h_[0] + h_[1]);
        } else if (corner_x) {
          bw = h_[1];
        } else {
          bw = h_[0];
        }
        boundary_w_.push_back(bw);
      }
    }
  }
}

double Grid::measure() const {
  return dim_ == 1 ? extent_[0] : extent_[0] * extent_[1];
}

double Grid::boundary_measure() const {
  return dim_ == 1 ? 2.0 : 2.0 * (extent_[0] + extent_[1]);
}

std::array<double, 2> Grid::coord(int idx) const {
  const int i = idx % n_[0];
  const int j = idx / n_[0];
  return {i * h_[0], j * h_[1]};
}

std::string to_string(Bc bc) {
  return bc == Bc::dirichlet ? "dirichlet" : "neumann";
}

EdgeSet::EdgeSet(GridPtr grid, Bc bc) : grid_(std::move(grid)), bc_(bc) {
  const int nx = grid_->nodes(0);
  const int ny = grid_->dimension() == 2 ? grid_->nodes(1) : 1;
  const double hx = grid_->spacing(0);
  const double hy = grid_->dimension() == 2 ? grid_->spacing(1) : 0.0;

  auto add = [&](int t, int h, double w, double len) {
    tail_.push_back(t);
    head_.push_back(h);
    weight_.push_back(w);
    inv_h_.push_back(1.0 / len);
  };
  auto transverse_y = [&](int j) {
    if (grid_->dimension() == 1) return 1.0;
    return (j == 0 || j == ny - 1) ? 0.5 * hy : hy;
  };
  auto transverse_x = [&](int i) {
    return (i == 0 || i == nx - 1) ? 0.5 * hx : hx;
  };

  // x-edges
  for (int j = 0; j < ny; ++j) {
    const double wt = hx * transverse_y(j);
    if (bc_ == Bc::dirichlet) add(-1, grid_->index(0, j), wt, hx);
    for (int i = 0; i + 1 < nx; ++i) {
      add(grid_->index(i, j), grid_->index(i + 1, j), wt, hx);
    }
    if (bc_ == Bc::dirichlet) add(grid_->index(nx - 1, j), -1, wt, hx);
  }
  // y-edges
  if (grid_->dimension() == 2) {
    for (int i = 0; i < nx; ++i) {
      const double wt = hy * transverse_x(i);
      if (bc_ == Bc::dirichlet) add(-1, grid_->index(i, 0), wt, hy);
      for (int j = 0; j + 1 < ny; ++j) {
        add(grid_->index(i, j), grid_->index(i, j + 1), wt, hy);
      }
      if (bc_ == Bc::dirichlet) add(grid_->index(i, ny - 1), -1, wt, hy);
    }
  }
}

double inner_product(const GridFunction& u, const GridFunction& w) {
  require_same_grid(u, w);
  double s = 0.0;
  const auto& wt = u.grid->weights();
  for (int i = 0; i < u.size(); ++i) s += wt[i] * u.v[i] * w.v[i];
  return s;
}

double norm(const GridFunction& u) { return std::sqrt(inner_product(u, u)); }

double edge_inner_product(const EdgeField& q, const EdgeField& r) {
  if (q.edges != r.edges) throw std::invalid_argument("edge set mismatch");
  double s = 0.0;
  for (int e = 0; e < q.edges->size(); ++e) {
    s += q.edges->weight(e) * q.v[e] * r.v[e];
  }
  return s;
}

EdgeField gradient(const GridFunction& u,
                   const std::shared_ptr<const EdgeSet>& edges) {
  if (edges->grid() != u.grid) throw std::invalid_argument("grid mismatch");
  EdgeField d(edges);
  for (int e = 0; e < edges->size(); ++e) {
    const int t = edges->tail(e);
    const int h = edges->head(e);
    const double ut = t < 0 ? 0.0 : u.v[t];
    const double uh = h < 0 ? 0.0 : u.v[h];
    d.v[e] = (uh - ut) * edges->inv_h(e);
  }
  return d;
}

EdgeField gradient(const GridFunction& u, Bc bc) {
  return gradient(u, std::make_shared<const EdgeSet>(u.grid, bc));
}

GridFunction divergence(const EdgeField& q) {
  const auto& es = *q.edges;
  GridFunction out(es.grid());
  for (int e = 0; e < es.size(); ++e) {
    const double flux = es.weight(e) * es.inv_h(e) * q.v[e];
    if (es.head(e) >= 0) out.v[es.head(e)] -= flux;
    if (es.tail(e) >= 0) out.v[es.tail(e)] += flux;
  }
  for (int i = 0; i < out.size(); ++i) out.v[i] /= out.grid->weight(i);
  return out;
}

void axpy(double a, const GridFunction& x, GridFunction& y) {
  require_same_grid(x, y);
  for (int i = 0; i < y.size(); ++i) y.v[i] += a * x.v[i];
}

GridFunction lin_comb(double a, const GridFunction& x, double b,
                      const GridFunction& y) {
  require_same_grid(x, y);
  GridFunction out(x.grid);
  for (int i = 0; i < out.size(); ++i) out.v[i] = a * x.v[i] + b * y.v[i];
  return out;
}

}  // namespace semiflow
