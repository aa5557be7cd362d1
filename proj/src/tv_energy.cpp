#include "tvflow/tv_energy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace tvflow {

std::string_view to_string(TvMode mode) {
  return mode == TvMode::kIsotropic ? "isotropic" : "anisotropic";
}

TvMode parse_tv_mode(std::string_view text) {
  if (text == "isotropic") return TvMode::kIsotropic;
  if (text == "anisotropic") return TvMode::kAnisotropic;
  throw std::invalid_argument("unknown tv mode '" + std::string(text) + "'");
}

namespace {

double group_norm(const DualField& p, const FaceRef* faces, int count) {
  if (count == 1) return std::abs(p.component(faces[0].axis)[faces[0].index]);
  double s = 0.0;
  for (int c = 0; c < count; ++c) {
    const double v = p.component(faces[c].axis)[faces[c].index];
    s += v * v;
  }
  return std::sqrt(s);
}

}  // namespace

double total_variation(const ScalarField& u, TvMode mode) {
  const DualField g = gradient(u);
  double s = 0.0;
  for_each_group(u.grid(), mode,
                 [&](const FaceRef* f, int c) { s += group_norm(g, f, c); });
  return s * u.grid().cell_volume();
}

double boundary_term(const ScalarField& u) {
  const Grid& g = u.grid();
  double s = 0.0;
  for_each_boundary_face(g, [&](int axis, std::size_t, std::size_t c, double) {
    s += std::abs(u[c]) * g.face_area(axis);
  });
  return s;
}

double max_group_norm(const DualField& z, TvMode mode) {
  double m = 0.0;
  for_each_group(z.grid(), mode,
                 [&](const FaceRef* f, int c) { m = std::max(m, group_norm(z, f, c)); });
  return m;
}

void project_unit_ball(DualField& z, TvMode mode) {
  for_each_group(z.grid(), mode, [&](const FaceRef* f, int c) {
    const double norm = group_norm(z, f, c);
    if (norm > 1.0) {
      for (int k = 0; k < c; ++k) z.component(f[k].axis)[f[k].index] /= norm;
    }
  });
}

PairingDefect pairing_defect(const ScalarField& u, const DualField& z, TvMode mode) {
  require_same_grid(u.grid(), z.grid(), "pairing_defect");
  const DualField g = gradient(u);
  const double vol = u.grid().cell_volume();
  PairingDefect out;
  out.min_term = std::numeric_limits<double>::infinity();
  out.max_term = -std::numeric_limits<double>::infinity();
  double sum = 0.0;
  for_each_group(u.grid(), mode, [&](const FaceRef* f, int c) {
    double dot = 0.0;
    for (int k = 0; k < c; ++k) {
      dot += z.component(f[k].axis)[f[k].index] * g.component(f[k].axis)[f[k].index];
    }
    const double term = group_norm(g, f, c) - dot;
    sum += term;
    out.min_term = std::min(out.min_term, term * vol);
    if (term * vol > out.max_term) {
      out.max_term = term * vol;
      out.worst_axis = f[0].axis;
      out.worst_face = f[0].index;
    }
  });
  out.total = sum * vol;
  return out;
}

}  // namespace tvflow
