#include <cmath>
#include <stdexcept>

#include "tvflow/certificates.hpp"
#include "tvflow/prox.hpp"
#include "tvflow/tv_energy.hpp"

namespace tvflow {

StepRecord energy_ledger(const ScalarField& u_prev, const ScalarField& u_next,
                         const DualField& z, const ScalarField& f_step, double tau,
                         TvMode mode) {
  const Grid& g = u_prev.grid();
  require_same_grid(g, u_next.grid(), "energy_ledger");
  require_same_grid(g, z.grid(), "energy_ledger");
  require_same_grid(g, f_step.grid(), "energy_ledger");
  if (!(tau > 0.0)) throw std::invalid_argument("energy_ledger: tau must be positive");

  StepRecord r;
  r.tau = tau;
  r.half_l2_prev = 0.5 * inner_product(u_prev, u_prev);
  r.half_l2_next = 0.5 * inner_product(u_next, u_next);
  r.tv_next = total_variation(u_next, mode);
  r.boundary_term = boundary_term(u_next);
  r.source_pairing = inner_product(f_step, u_next);
  r.source_l2 = norm_l2(f_step);
  const ScalarField inc = u_next - u_prev;
  r.increment_sq = 0.5 * inner_product(inc, inc);

  // 1/2|u'|^2 - 1/2|u|^2 + 1/2|u' - u|^2 + tau TV(u') = tau <f, u'> + r
  const double lhs = r.half_l2_next - r.half_l2_prev + r.increment_sq + tau * r.tv_next;
  r.energy_residual = std::abs(lhs - tau * r.source_pairing);

  // <u' - u, u'> = 1/2(|u'|^2 - |u|^2) + 1/2|u' - u|^2, an algebraic identity.
  const double pair = inner_product(inc, u_next);
  const double split = r.half_l2_next - r.half_l2_prev + r.increment_sq;
  const double scale = std::abs(pair) + r.half_l2_next + r.half_l2_prev + r.increment_sq;
  r.chain_rule_residual = scale > 0.0 ? std::abs(pair - split) / scale : 0.0;

  ScalarField y = f_step;
  y *= tau;
  y += u_prev;
  r.duality_gap = duality_gap(u_next, z, y, tau, mode);

  const CertificateReport flat = check_flatness(u_next, z, mode, 0.0);
  r.flatness_gap = flat.value;
  r.boundary_violation = check_boundary_sign(u_next, z, 0.0).value;
  const CertificateReport green = check_green(z, u_next, 1.0);
  r.green_residual = green.tolerance > 0.0 ? green.value / green.tolerance : 0.0;
  r.equation_residual = check_equation(u_prev, u_next, z, f_step, tau, 0.0).value;
  return r;
}

}  // namespace tvflow
