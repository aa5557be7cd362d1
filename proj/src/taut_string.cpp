// Direct 1D solver for  min_v 1/2 sum (v_k - y_k)^2 + lambda sum_{k=0}^{n} |v_k - v_{k-1}|
// with v_{-1} = v_n = 0, lambda = tau / h.
//
// Forward pass: d_k is the derivative of the message
//   m_k(v) = 1/2 (v - y_k)^2 + min_w [ m_{k-1}(w) + lambda |v - w| ],
// a strictly increasing piecewise-linear function (jumps allowed). The
// infimal convolution with lambda|.| clips the derivative to [-lambda, lambda].
// Backward pass: v_{k-1} = clamp(v_k, lo_{k-1}, hi_{k-1}).

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "tvflow/prox.hpp"

namespace tvflow {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Piece {
  double lo;  // left end (may be -inf)
  double hi;  // right end (may be +inf)
  double slope;
  double intercept;

  double at(double x) const {
    if (std::isinf(x)) return slope > 0 ? std::copysign(kInf, x) : intercept;
    return slope * x + intercept;
  }
};

using Pieces = std::vector<Piece>;

// Smallest x with target in the (set-valued) derivative at x.
double inverse(const Pieces& d, double target) {
  for (const Piece& p : d) {
    if (target < p.at(p.lo)) return p.lo;
    if (target <= p.at(p.hi)) return (target - p.intercept) / p.slope;
  }
  return d.back().hi;
}

Pieces clip(const Pieces& d, double lambda, double& lo, double& hi) {
  lo = inverse(d, -lambda);
  hi = inverse(d, lambda);
  Pieces out;
  out.push_back({-kInf, lo, 0.0, -lambda});
  for (const Piece& p : d) {
    const double a = std::max(p.lo, lo);
    const double b = std::min(p.hi, hi);
    if (a < b) out.push_back({a, b, p.slope, p.intercept});
  }
  out.push_back({hi, kInf, 0.0, lambda});
  return out;
}

void add_linear(Pieces& d, double y) {
  for (Piece& p : d) {
    p.slope += 1.0;
    p.intercept -= y;
  }
}

// Adds lambda * sign(v): splits the piece containing 0.
void add_sign(Pieces& d, double lambda) {
  Pieces out;
  for (const Piece& p : d) {
    if (p.lo < 0.0 && p.hi > 0.0) {
      out.push_back({p.lo, 0.0, p.slope, p.intercept - lambda});
      out.push_back({0.0, p.hi, p.slope, p.intercept + lambda});
    } else if (p.hi <= 0.0) {
      out.push_back({p.lo, p.hi, p.slope, p.intercept - lambda});
    } else {
      out.push_back({p.lo, p.hi, p.slope, p.intercept + lambda});
    }
  }
  d = std::move(out);
}

}  // namespace

ScalarField taut_string_1d(const ScalarField& y, double tau) {
  const Grid& g = y.grid();
  if (g.dim() != 1) throw std::invalid_argument("taut_string_1d: grid must be 1D");
  if (!(tau > 0.0) || !std::isfinite(tau)) {
    throw std::invalid_argument("taut_string_1d: tau must be positive and finite");
  }
  if (!y.all_finite()) throw std::invalid_argument("taut_string_1d: non-finite data");

  const int n = g.n(0);
  const double lambda = tau / g.h(0);
  std::vector<double> lo(n), hi(n);

  Pieces d{{-kInf, kInf, 0.0, 0.0}};
  add_sign(d, lambda);  // left boundary jump against v_{-1} = 0
  add_linear(d, y[0]);
  for (int k = 1; k < n; ++k) {
    d = clip(d, lambda, lo[k - 1], hi[k - 1]);
    add_linear(d, y[k]);
  }
  add_sign(d, lambda);  // right boundary jump against v_n = 0

  ScalarField v(g);
  v[n - 1] = inverse(d, 0.0);
  for (int k = n - 1; k > 0; --k) v[k - 1] = std::clamp(v[k], lo[k - 1], hi[k - 1]);
  return v;
}

}  // namespace tvflow
