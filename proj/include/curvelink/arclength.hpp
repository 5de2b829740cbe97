#pragma once

#include <Eigen/Core>
#include <vector>

#include "curvelink/trig_curve.hpp"

namespace curvelink {

/// Monotone arc-length map s(t) of a closed curve with inverse lookup.
/// s(t) is assembled from the Fourier coefficients of the speed |alpha'(t)|
/// (periodic quadrature on a uniform grid, spectrally accurate), so both the
/// map and its inverse are smooth rather than merely tabulated. The sampled
/// monotone table only seeds the Newton inversion.
class ArcLengthTable {
 public:
  explicit ArcLengthTable(const TrigCurve& curve, int grid = 1024);

  double total_length() const { return length_; }
  double s_of_t(double t) const;
  double t_of_s(double s) const;
  double speed(double t) const;

  /// Derivatives of the curve with respect to arc length u, orders 0..order
  /// (order <= 4), via the chain rule on exact parameter jets.
  std::vector<Eigen::VectorXd> arclength_jet(double u, int order) const;

 private:
  TrigCurve curve_;
  double length_ = 0.0;
  double mean_speed_ = 0.0;
  std::vector<double> fa_, fb_;       // speed Fourier coefficients, k >= 1
  std::vector<double> seed_t_, seed_s_;  // monotone samples for inversion
};

}  // namespace curvelink
