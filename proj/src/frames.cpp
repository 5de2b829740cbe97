#include "curvelink/frames.hpp"

#include <cmath>

namespace curvelink {

bool Frame3::is_orthonormal(double tol) const {
  const Eigen::Matrix3d gram =
      basis.transpose() * basis - Eigen::Matrix3d::Identity();
  return gram.cwiseAbs().maxCoeff() <= tol;
}

FrenetApparatus frenet(const TrigCurve& curve, double t) {
  const int n = curve.dim();
  VecX<double> residuals;
  FrenetApparatus ap;
  try {
    ap.frame = frenet_frame_matrix<double>(curve, t, &residuals);
  } catch (const RankDeficiencyError& e) {
    throw RankDeficiencyError(
        "frenet: derivatives not linearly independent at t = " +
            std::to_string(t) + " (" + e.what() + ")",
        t);
  }
  ap.speed = residuals[0];
  ap.curvatures.resize(n - 1);
  for (int i = 1; i <= n - 2; ++i)
    ap.curvatures[i - 1] = residuals[i] / (ap.speed * residuals[i - 1]);
  // The last curvature is signed: kappa_{n-1} = <f_{n-1}', f_n>/|alpha'|,
  // which reduces to <alpha^(n), f_n> / (|alpha'| R_{n-1,n-1}).
  const Eigen::VectorXd top = curve.eval<double>(t, n);
  ap.curvatures[n - 2] =
      top.dot(ap.frame.col(n - 1)) / (ap.speed * residuals[n - 2]);
  return ap;
}

}  // namespace curvelink
