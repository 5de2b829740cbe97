#pragma once

#include <functional>

namespace curvelink {

/// Uniform tensor grid on the torus [0,2pi)^2. The s-axis nodes are shifted
/// by `offset` cell fractions so no node lands on the diagonal s = t, where
/// self-linking integrands have a removable 0/0 form.
struct TorusGrid {
  int n = 256;          // nodes per axis; power of two, >= 16
  double offset = 0.5;  // fraction of a cell, applied to the s axis
};

struct QuadratureResult {
  double value = 0.0;
  double error_estimate = 0.0;  // |value(N) - value(N/2)|
};

/// Offset trapezoid (midpoint in s) rule on the torus; spectrally accurate
/// for integrands smooth on the torus. Throws IntegrandError on non-finite
/// samples.
QuadratureResult torus_integral(const std::function<double(double, double)>& f,
                                TorusGrid grid);

/// Periodic trapezoid rule on the circle [0,2pi).
double circle_integral(const std::function<double(double)>& f, int n);

void validate_torus_grid(const TorusGrid& grid);

}  // namespace curvelink
