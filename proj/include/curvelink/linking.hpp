#pragma once

#include <Eigen/Dense>

#include "curvelink/bundles.hpp"
#include "curvelink/invariant.hpp"
#include "curvelink/quadrature.hpp"
#include "curvelink/root_finding.hpp"
#include "curvelink/trig_curve.hpp"

namespace curvelink {

/// Coefficient f of the linking 2-form f dt ds for the pair (alpha, beta)
/// through the bundle nu:
///   f = det( n delta, n(-alpha'(t) + A_t delta), n beta'(s) ) / |n delta|^3,
/// the determinant taken in coordinates of the oriented fiber frame at t
/// (any oriented orthonormal frame gives the same value). Caches the
/// t-dependent data, so row-major quadrature loops evaluate frames once per
/// row.
class LinkingIntegrand {
 public:
  LinkingIntegrand(const TrigCurve& alpha, const TrigCurve& beta,
                   const Bundle& nu);

  double operator()(double t, double s) const;

 private:
  void prepare_row(double t) const;

  const TrigCurve* alpha_;
  const TrigCurve* beta_;
  const Bundle* nu_;
  mutable bool row_ready_ = false;
  mutable double row_t_ = 0.0;
  mutable Eigen::MatrixXd frame_;    // n x 3
  mutable Eigen::MatrixXd a_op_;     // n x n
  mutable Eigen::VectorXd alpha_pt_, alpha_d1_;
};

/// Minimum of |n_t(beta(s) - alpha(t))| over a scan grid; the precondition
/// margin for the linking number. Throws RegularityError (naming the worst
/// (t, s)) when the margin falls below tol.
double linking_condition_margin(const TrigCurve& alpha, const TrigCurve& beta,
                                const Bundle& nu, int scan = 128,
                                double tol = 1e-6);

/// Linking number by torus quadrature of the pulled-back area form / 4 pi.
InvariantResult linking_number_integral(const TrigCurve& alpha,
                                        const TrigCurve& beta,
                                        const Bundle& nu,
                                        TorusGrid grid = {});

/// Linking number by counting transverse intersections of beta with the
/// ruled hypersurface chi(t, lambda, x) = alpha(t) + lambda mu(t) + nu_t-perp,
/// mu being the bundle frame vector of the given index. Each root
/// contributes half the sign of
///   D = lambda |n mu|^2 det( n beta'(s),
///                            n(alpha'(t) + lambda mu'(t)
///                              - A_t(delta - lambda mu)), n mu ).
InvariantResult linking_number_intersection(const TrigCurve& alpha,
                                            const TrigCurve& beta,
                                            const Bundle& nu,
                                            int mu_frame_index = 0,
                                            const RootOptions& opt = {},
                                            double condition_tol = 1e-6);

/// Classical R^3 Gauss double integral (the n = 3 oracle path):
///   L = 1/4pi Int det(delta, beta'(s), alpha'(t)) / |delta|^3 dt ds.
InvariantResult gauss_linking_r3(const TrigCurve& alpha, const TrigCurve& beta,
                                 TorusGrid grid = {});

}  // namespace curvelink
