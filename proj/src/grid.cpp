#include "tvflow/grid.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tvflow {

Grid::Grid(std::span<const int> cells, std::span<const double> spacing) {
  if (cells.size() != spacing.size()) {
    throw std::invalid_argument("grid: cell counts and spacings differ in length");
  }
  if (cells.size() != 1 && cells.size() != 2) {
    throw std::invalid_argument("grid: dimension must be 1 or 2");
  }
  dim_ = static_cast<int>(cells.size());
  for (int a = 0; a < dim_; ++a) {
    if (cells[a] < 2) {
      throw std::invalid_argument("grid: need at least 2 cells per axis");
    }
    if (!(spacing[a] > 0.0) || !std::isfinite(spacing[a])) {
      throw std::invalid_argument("grid: spacing must be positive and finite");
    }
    n_[a] = cells[a];
    h_[a] = spacing[a];
  }
}

Grid Grid::Box(std::span<const int> cells, std::span<const double> extent) {
  if (cells.size() != extent.size()) {
    throw std::invalid_argument("grid: cell counts and extents differ in length");
  }
  std::vector<double> h(cells.size());
  for (std::size_t a = 0; a < cells.size(); ++a) {
    if (cells[a] < 2) {
      throw std::invalid_argument("grid: need at least 2 cells per axis");
    }
    h[a] = extent[a] / cells[a];
  }
  return Grid(cells, h);
}

std::size_t Grid::face_count(int axis) const {
  if (axis == 0) return static_cast<std::size_t>(n_[0] + 1) * n_[1];
  if (dim_ == 1) return 0;
  return static_cast<std::size_t>(n_[0]) * (n_[1] + 1);
}

double Grid::perimeter() const {
  if (dim_ == 1) return 2.0;
  return 2.0 * (extent(0) + extent(1));
}

double Grid::divergence_norm_sq_bound() const {
  double s = 4.0 / (h_[0] * h_[0]);
  if (dim_ == 2) s += 4.0 / (h_[1] * h_[1]);
  return s;
}

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (!(a == b)) {
    throw std::invalid_argument(std::string(what) + ": grid mismatch");
  }
}

// ---------------------------------------------------------------------------

ScalarField::ScalarField(Grid grid)
    : grid_(grid), values_(grid.cell_count(), 0.0) {}

ScalarField::ScalarField(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  if (values_.size() != grid_.cell_count()) {
    throw std::invalid_argument("scalar field: value count " +
                                std::to_string(values_.size()) +
                                " does not match grid cell count " +
                                std::to_string(grid_.cell_count()));
  }
  if (!all_finite()) {
    throw std::invalid_argument("scalar field: non-finite value");
  }
}

bool ScalarField::all_finite() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return std::isfinite(v); });
}

ScalarField& ScalarField::operator+=(const ScalarField& other) {
  require_same_grid(grid_, other.grid_, "scalar field +=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

ScalarField& ScalarField::operator-=(const ScalarField& other) {
  require_same_grid(grid_, other.grid_, "scalar field -=");
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

ScalarField& ScalarField::operator*=(double s) {
  for (double& v : values_) v *= s;
  return *this;
}

ScalarField operator+(ScalarField a, const ScalarField& b) { return a += b; }
ScalarField operator-(ScalarField a, const ScalarField& b) { return a -= b; }
ScalarField operator*(double s, ScalarField a) { return a *= s; }

// ---------------------------------------------------------------------------

DualField::DualField(Grid grid) : grid_(grid) {
  comp_[0].assign(grid.face_count(0), 0.0);
  comp_[1].assign(grid.face_count(1), 0.0);
}

bool DualField::all_finite() const {
  for (const auto& c : comp_) {
    for (double v : c) {
      if (!std::isfinite(v)) return false;
    }
  }
  return true;
}

double DualField::max_abs() const {
  double m = 0.0;
  for (const auto& c : comp_) {
    for (double v : c) m = std::max(m, std::abs(v));
  }
  return m;
}

// ---------------------------------------------------------------------------

DualField gradient(const ScalarField& u) {
  const Grid& g = u.grid();
  const int n0 = g.n(0), n1 = g.n(1);
  DualField p(g);
  auto px = p.component(0);
  const double inv0 = 1.0 / g.h(0);
  for (int k = 0; k <= n0; ++k) {
    for (int j = 0; j < n1; ++j) {
      const double lo = k > 0 ? u[g.cell(k - 1, j)] : 0.0;
      const double hi = k < n0 ? u[g.cell(k, j)] : 0.0;
      px[g.xface(k, j)] = (hi - lo) * inv0;
    }
  }
  if (g.dim() == 2) {
    auto py = p.component(1);
    const double inv1 = 1.0 / g.h(1);
    for (int i = 0; i < n0; ++i) {
      for (int k = 0; k <= n1; ++k) {
        const double lo = k > 0 ? u[g.cell(i, k - 1)] : 0.0;
        const double hi = k < n1 ? u[g.cell(i, k)] : 0.0;
        py[g.yface(i, k)] = (hi - lo) * inv1;
      }
    }
  }
  return p;
}

ScalarField divergence(const DualField& p) {
  const Grid& g = p.grid();
  const int n0 = g.n(0), n1 = g.n(1);
  ScalarField d(g);
  auto px = p.component(0);
  const double inv0 = 1.0 / g.h(0);
  for (int i = 0; i < n0; ++i) {
    for (int j = 0; j < n1; ++j) {
      d[g.cell(i, j)] = (px[g.xface(i + 1, j)] - px[g.xface(i, j)]) * inv0;
    }
  }
  if (g.dim() == 2) {
    auto py = p.component(1);
    const double inv1 = 1.0 / g.h(1);
    for (int i = 0; i < n0; ++i) {
      for (int j = 0; j < n1; ++j) {
        d[g.cell(i, j)] += (py[g.yface(i, j + 1)] - py[g.yface(i, j)]) * inv1;
      }
    }
  }
  return d;
}

double truncate(double s, double k) {
  if (k < 0.0 || std::isnan(k)) {
    throw std::invalid_argument("truncate: level must be nonnegative");
  }
  return std::clamp(s, -k, k);
}

ScalarField truncate(const ScalarField& u, double k) {
  if (k < 0.0 || std::isnan(k)) {
    throw std::invalid_argument("truncate: level must be nonnegative");
  }
  ScalarField out(u.grid());
  for (std::size_t i = 0; i < u.size(); ++i) out[i] = std::clamp(u[i], -k, k);
  return out;
}

double inner_product(const ScalarField& u, const ScalarField& v) {
  require_same_grid(u.grid(), v.grid(), "inner_product");
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s * u.grid().cell_volume();
}

double norm_l2(const ScalarField& u) { return std::sqrt(inner_product(u, u)); }

double max_abs(const ScalarField& u) {
  double m = 0.0;
  for (double v : u.values()) m = std::max(m, std::abs(v));
  return m;
}

double face_inner_product(const DualField& p, const DualField& q) {
  require_same_grid(p.grid(), q.grid(), "face_inner_product");
  double s = 0.0;
  for (int a = 0; a < 2; ++a) {
    auto pa = p.component(a);
    auto qa = q.component(a);
    for (std::size_t i = 0; i < pa.size(); ++i) s += pa[i] * qa[i];
  }
  return s * p.grid().cell_volume();
}

double norm_l2(const DualField& p) { return std::sqrt(face_inner_product(p, p)); }

double interior_pairing(const DualField& z, const ScalarField& v) {
  require_same_grid(z.grid(), v.grid(), "interior_pairing");
  const Grid& g = v.grid();
  const int n0 = g.n(0), n1 = g.n(1);
  double s = 0.0;
  auto zx = z.component(0);
  for (int k = 1; k < n0; ++k) {
    for (int j = 0; j < n1; ++j) {
      s += zx[g.xface(k, j)] * (v[g.cell(k, j)] - v[g.cell(k - 1, j)]) / g.h(0);
    }
  }
  if (g.dim() == 2) {
    auto zy = z.component(1);
    for (int i = 0; i < n0; ++i) {
      for (int k = 1; k < n1; ++k) {
        s += zy[g.yface(i, k)] * (v[g.cell(i, k)] - v[g.cell(i, k - 1)]) / g.h(1);
      }
    }
  }
  return s * g.cell_volume();
}

double boundary_flux(const DualField& z, const ScalarField& v) {
  require_same_grid(z.grid(), v.grid(), "boundary_flux");
  const Grid& g = v.grid();
  double s = 0.0;
  for_each_boundary_face(g, [&](int axis, std::size_t f, std::size_t c, double sign) {
    s += v[c] * sign * z.component(axis)[f] * g.face_area(axis);
  });
  return s;
}

}  // namespace tvflow
