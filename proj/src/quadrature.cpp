#include "curvelink/quadrature.hpp"

#include <cmath>
#include <numbers>

#include "curvelink/errors.hpp"

namespace curvelink {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double torus_sum(const std::function<double(double, double)>& f, int n,
                 double offset) {
  const double h = kTwoPi / n;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double t = i * h;
    double row = 0.0;
    for (int j = 0; j < n; ++j) {
      const double s = (j + offset) * h;
      const double v = f(t, s);
      if (!std::isfinite(v))
        throw IntegrandError("torus_integral: non-finite sample", t, s);
      row += v;
    }
    sum += row;
  }
  return sum * h * h;
}

}  // namespace

void validate_torus_grid(const TorusGrid& grid) {
  if (grid.n < 16 || (grid.n & (grid.n - 1)) != 0)
    throw SchemaError("torus grid size must be a power of two >= 16");
}

QuadratureResult torus_integral(const std::function<double(double, double)>& f,
                                TorusGrid grid) {
  validate_torus_grid(grid);
  QuadratureResult out;
  out.value = torus_sum(f, grid.n, grid.offset);
  const double coarse = torus_sum(f, grid.n / 2, grid.offset);
  out.error_estimate = std::abs(out.value - coarse);
  return out;
}

double circle_integral(const std::function<double(double)>& f, int n) {
  if (n < 2) throw SchemaError("circle grid size must be >= 2");
  const double h = kTwoPi / n;
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const double v = f(i * h);
    if (!std::isfinite(v))
      throw IntegrandError("circle_integral: non-finite sample", i * h, 0.0);
    sum += v;
  }
  return sum * h;
}

}  // namespace curvelink
