#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace tvflow {

// Axis-aligned box discretized into n[0] (x n[1]) cells. A 1D grid stores
// n[1] = 1 and h[1] = 1 so that every loop can be written two-dimensionally.
//
// Storage order of cells is axis-0 major: cell (i, j) lives at i * n[1] + j.
// Faces normal to axis 0 are (n[0] + 1) x n[1], faces normal to axis 1 are
// n[0] x (n[1] + 1); both include the boundary faces of the box.
class Grid {
 public:
  Grid(std::span<const int> cells, std::span<const double> spacing);

  // Box [0, extent[0]] (x [0, extent[1]]) with the given cell counts.
  static Grid Box(std::span<const int> cells, std::span<const double> extent);
  static Grid Line(int n, double length) {
    const int c[] = {n};
    const double e[] = {length};
    return Box(c, e);
  }
  static Grid Rectangle(int nx, int ny, double lx, double ly) {
    const int c[] = {nx, ny};
    const double e[] = {lx, ly};
    return Box(c, e);
  }

  int dim() const { return dim_; }
  int n(int axis) const { return n_[axis]; }
  double h(int axis) const { return h_[axis]; }
  double extent(int axis) const { return n_[axis] * h_[axis]; }

  std::size_t cell_count() const {
    return static_cast<std::size_t>(n_[0]) * n_[1];
  }
  std::size_t face_count(int axis) const;
  double cell_volume() const { return dim_ == 1 ? h_[0] : h_[0] * h_[1]; }
  // (N-1)-dimensional measure of one face normal to `axis`; 1 in 1D.
  double face_area(int axis) const { return cell_volume() / h_[axis]; }
  // H^{N-1} measure of the box boundary: 2 points in 1D, the perimeter in 2D.
  double perimeter() const;

  std::size_t cell(int i, int j = 0) const {
    return static_cast<std::size_t>(i) * n_[1] + j;
  }
  // Face k along axis 0 at transverse cell j (k = 0 .. n0).
  std::size_t xface(int k, int j = 0) const {
    return static_cast<std::size_t>(k) * n_[1] + j;
  }
  // Face k along axis 1 at transverse cell i (k = 0 .. n1).
  std::size_t yface(int i, int k) const {
    return static_cast<std::size_t>(i) * (n_[1] + 1) + k;
  }
  // Cell-center coordinate along an axis.
  double center(int axis, int index) const { return (index + 0.5) * h_[axis]; }

  // Upper bound on the squared operator norm of the discrete divergence.
  double divergence_norm_sq_bound() const;

  bool operator==(const Grid& other) const = default;

 private:
  int dim_ = 1;
  std::array<int, 2> n_{1, 1};
  std::array<double, 2> h_{1.0, 1.0};
};

// Cell-centered real values on a Grid.
class ScalarField {
 public:
  explicit ScalarField(Grid grid);  // zero-initialized
  ScalarField(Grid grid, std::vector<double> values);

  const Grid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::span<double> values() { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  double& operator[](std::size_t i) { return values_[i]; }
  std::size_t size() const { return values_.size(); }

  bool all_finite() const;

  ScalarField& operator+=(const ScalarField& other);
  ScalarField& operator-=(const ScalarField& other);
  ScalarField& operator*=(double s);

  bool operator==(const ScalarField& other) const = default;

 private:
  Grid grid_;
  std::vector<double> values_;
};

ScalarField operator+(ScalarField a, const ScalarField& b);
ScalarField operator-(ScalarField a, const ScalarField& b);
ScalarField operator*(double s, ScalarField a);

// Face-centered vector field: one component per axis, stored on the faces
// normal to that axis. Boundary faces hold the outward-or-inward oriented
// value along the axis; the outward normal trace is +value on the high side
// and -value on the low side.
class DualField {
 public:
  explicit DualField(Grid grid);  // zero-initialized

  const Grid& grid() const { return grid_; }
  std::span<const double> component(int axis) const { return comp_[axis]; }
  std::span<double> component(int axis) { return comp_[axis]; }

  bool all_finite() const;
  double max_abs() const;

  bool operator==(const DualField& other) const = default;

 private:
  Grid grid_;
  std::array<std::vector<double>, 2> comp_;
};

// Forward difference across each face divided by h, with the exterior of the
// box treated as zero.
DualField gradient(const ScalarField& u);

// Negative adjoint of gradient with respect to the volume-weighted cell and
// face inner products: <gradient(u), p> = -<u, divergence(p)> for all u, p.
ScalarField divergence(const DualField& p);

// Pointwise T_k(s) = min(|s|, k) sign(s).
double truncate(double s, double k);
ScalarField truncate(const ScalarField& u, double k);

// Sum of u_i v_i times the cell volume.
double inner_product(const ScalarField& u, const ScalarField& v);
double norm_l2(const ScalarField& u);
double max_abs(const ScalarField& u);

// Sum over every face (boundary included) of p q times the cell volume.
double face_inner_product(const DualField& p, const DualField& q);
double norm_l2(const DualField& p);

// Pairing restricted to interior faces: the discrete (z, Dv) over the open box.
double interior_pairing(const DualField& z, const ScalarField& v);

// Sum over boundary faces of v_b [z, nu] times the face area, v_b the value
// of the adjacent cell and [z, nu] the outward normal component.
double boundary_flux(const DualField& z, const ScalarField& v);

// Calls fn(face_axis, face_index, cell_index, outward_sign) for each boundary
// face in a fixed order.
template <typename Fn>
void for_each_boundary_face(const Grid& g, Fn&& fn) {
  const int n0 = g.n(0), n1 = g.n(1);
  for (int j = 0; j < n1; ++j) {
    fn(0, g.xface(0, j), g.cell(0, j), -1.0);
    fn(0, g.xface(n0, j), g.cell(n0 - 1, j), 1.0);
  }
  if (g.dim() == 2) {
    for (int i = 0; i < n0; ++i) {
      fn(1, g.yface(i, 0), g.cell(i, 0), -1.0);
      fn(1, g.yface(i, n1), g.cell(i, n1 - 1), 1.0);
    }
  }
}

void require_same_grid(const Grid& a, const Grid& b, const char* what);

}  // namespace tvflow
