#pragma once

#include <Eigen/Dense>
#include <vector>

#include "curvelink/arclength.hpp"
#include "curvelink/bundles.hpp"
#include "curvelink/linking.hpp"

namespace curvelink {

/// One transverse intersection of the curve with a developable hypersurface.
struct IntersectionRecord {
  double t = 0.0;
  double s = 0.0;                 // non-diagonal: |s - t| (mod 2pi) > 1e-3
  Eigen::VectorXd fiber_coords;   // x_3..x_n (chi-perp) or x_1..x_{n-2} (chi-top)
  int sign_factor = 0;            // sgn(x_3), resp. -sgn<alpha'(s), f_n(t)>
  int index = 1;                  // intersection index where the formula uses one
  double contribution = 0.0;      // signed half-integer
};

/// Push-off along the k-th derivative: alpha + delta * alpha^(k), exact in
/// the trig-polynomial class.
TrigCurve pushoff(const TrigCurve& alpha, int k, double delta);

/// Diagonal boundary 1-form coefficient phi(t) for the k-odd self-linking
/// integral. With g the unit fiber cross product of (n alpha^(k+1), n
/// alpha^(k)), u the unit fiber part of alpha^(k) and h = g x u in the
/// fiber, phi(t) = <n(g'(t) + A_t g(t)), h(t)>; g' is exact (dual
/// evaluation). For the osculating bundle phi = -kappa_2 |alpha'|; for the
/// orthogonal bundle with n odd, phi = -kappa_{n-1} |alpha'|.
double diagonal_phi(const TrigCurve& alpha, const Bundle& nu, int k, double t);

/// Self-linking by torus quadrature. k even: SL = (1/4pi) Int e1*Omega_2.
/// k odd: SL = (1/4pi) Int e1*Omega_2 - (1/2pi) Int phi.
InvariantResult sl_integral_even(const TrigCurve& alpha, const Bundle& nu,
                                 int k, TorusGrid grid = {512, 0.5});
InvariantResult sl_integral_odd(const TrigCurve& alpha, const Bundle& nu,
                                int k, TorusGrid grid = {512, 0.5});
/// Parity dispatch of the two above.
InvariantResult sl_integral(const TrigCurve& alpha, const Bundle& nu, int k,
                            TorusGrid grid = {512, 0.5});

/// Self-linking as the push-off limit lim_{delta -> 0} L(alpha_delta, alpha).
/// delta_0 is the largest of {1e-2, 1e-3, ...} whose pair condition margin
/// passes; the linking numbers at delta_0 and delta_0/2 must round to the
/// same integer (UnstableLimitError otherwise). Each linking number is
/// counted through the ruled-hypersurface intersections with mu chosen as a
/// bundle frame vector transverse to the push-off direction.
InvariantResult sl_limit(const TrigCurve& alpha, const Bundle& nu, int k,
                         const RootOptions& opt = {});

/// Orthogonal self-linking SL-perp (bundle spanned by f_{n-2}, f_{n-1}, f_n,
/// k = n-2), with the arc-length closed-form integrand evaluated as a
/// cross-validation of the generic path (agreement within 2e-3 required).
InvariantResult sl_orthogonal(const TrigCurve& alpha, TorusGrid grid = {512, 0.5});

/// Osculating self-linking SL-top (bundle spanned by alpha', alpha'',
/// alpha''', k = 1), cross-validated like sl_orthogonal.
InvariantResult sl_osculating(const TrigCurve& alpha, TorusGrid grid = {512, 0.5});

struct DevelopableResult {
  std::vector<IntersectionRecord> records;
  InvariantResult invariant;
};

/// Intersections of the curve with its osculating developable
/// chi-top(t, x) = alpha(t) + sum_{i<=n-2} x_i f_i(t); solves
/// <delta, f_{n-1}(t)> = <delta, f_n(t)> = 0 and returns
/// SL-perp = -1/2 sum sgn<alpha'(s_i), f_n(t_i)>.
DevelopableResult osculating_developable_intersections(
    const TrigCurve& alpha, const RootOptions& opt = {});

/// Intersections of the curve with its orthogonal developable
/// chi-perp(t, x) = alpha(t) + sum_{i>=3} x_i f_i(t); solves
/// <delta, f_1(t)> = <delta, f_2(t)> = 0 and returns
/// SL-top = 1/2 sum sgn(x_3^i) index_i with the index the sign of
/// det(alpha'(s), d_t chi-perp, f_3, ..., f_n).
DevelopableResult orthogonal_developable_intersections(
    const TrigCurve& alpha, const RootOptions& opt = {});

/// Arc-length closed-form raw values (cross-validation paths).
double orthogonal_corollary_raw(const TrigCurve& alpha, int grid = 512);
double osculating_corollary_raw(const TrigCurve& alpha, int grid = 512);

/// Raises RegularityError naming the worst clause and location when a
/// regularity report failed.
void require_regularity(const RegularityReport& rep);

}  // namespace curvelink
