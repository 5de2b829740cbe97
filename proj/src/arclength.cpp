#include "curvelink/arclength.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "curvelink/errors.hpp"

namespace curvelink {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

ArcLengthTable::ArcLengthTable(const TrigCurve& curve, int grid)
    : curve_(curve) {
  if (grid < 16) throw SchemaError("arc-length grid must be >= 16");
  std::vector<double> v(grid);
  double vmin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid; ++i) {
    const double t = kTwoPi * i / grid;
    v[i] = curve_.derivative(t, 1).norm();
    vmin = std::min(vmin, v[i]);
  }
  if (vmin < 1e-9)
    throw RegularityError(
        "arc-length: vanishing speed, curve is not regular",
        kTwoPi *
            static_cast<double>(std::distance(
                v.begin(), std::min_element(v.begin(), v.end()))) /
            grid,
        0.0);
  const int modes = grid / 2 - 1;
  fa_.assign(modes + 1, 0.0);
  fb_.assign(modes + 1, 0.0);
  for (int i = 0; i < grid; ++i) mean_speed_ += v[i];
  mean_speed_ /= grid;
  for (int k = 1; k <= modes; ++k) {
    double a = 0.0, b = 0.0;
    for (int i = 0; i < grid; ++i) {
      const double t = kTwoPi * i / grid;
      a += v[i] * std::cos(k * t);
      b += v[i] * std::sin(k * t);
    }
    fa_[k] = 2.0 * a / grid;
    fb_[k] = 2.0 * b / grid;
  }
  length_ = mean_speed_ * kTwoPi;
  seed_t_.resize(grid + 1);
  seed_s_.resize(grid + 1);
  for (int i = 0; i <= grid; ++i) {
    seed_t_[i] = kTwoPi * i / grid;
    seed_s_[i] = s_of_t(seed_t_[i]);
  }
}

double ArcLengthTable::speed(double t) const {
  return curve_.derivative(t, 1).norm();
}

double ArcLengthTable::s_of_t(double t) const {
  double s = mean_speed_ * t;
  for (std::size_t k = 1; k < fa_.size(); ++k) {
    s += (fa_[k] * std::sin(k * t) + fb_[k] * (1.0 - std::cos(k * t))) / k;
  }
  return s;
}

double ArcLengthTable::t_of_s(double s) const {
  const double wraps = std::floor(s / length_);
  const double s0 = s - wraps * length_;
  // monotone piecewise-linear seed, then Newton on s(t) - s0 (speed > 0)
  auto it = std::lower_bound(seed_s_.begin(), seed_s_.end(), s0);
  double t;
  if (it == seed_s_.begin()) {
    t = 0.0;
  } else {
    const std::size_t hi = it - seed_s_.begin();
    const double f = (s0 - seed_s_[hi - 1]) / (seed_s_[hi] - seed_s_[hi - 1]);
    t = seed_t_[hi - 1] + f * (seed_t_[hi] - seed_t_[hi - 1]);
  }
  for (int iter = 0; iter < 50; ++iter) {
    const double err = s_of_t(t) - s0;
    if (std::abs(err) < 1e-13 * std::max(1.0, length_)) break;
    t -= err / speed(t);
  }
  return t + wraps * kTwoPi;
}

std::vector<Eigen::VectorXd> ArcLengthTable::arclength_jet(double u,
                                                           int order) const {
  if (order < 0 || order > 4)
    throw SchemaError("arc-length jets supported up to order 4");
  const double t = t_of_s(u);
  std::vector<Eigen::VectorXd> a(5);
  for (int m = 0; m <= std::max(order, 1); ++m) a[m] = curve_.derivative(t, m);
  std::vector<Eigen::VectorXd> out;
  out.push_back(a[0]);
  if (order == 0) return out;

  for (int m = 2; m <= 4; ++m)
    if (static_cast<int>(a.size()) <= m || a[m].size() == 0)
      a[m] = curve_.derivative(t, m);

  const double v = a[1].norm();
  const double v1 = a[1].dot(a[2]) / v;
  const double v2 = (a[2].squaredNorm() + a[1].dot(a[3]) - v1 * v1) / v;
  const double v3 = (3.0 * a[2].dot(a[3]) + a[1].dot(a[4]) - 3.0 * v1 * v2) / v;

  // derivatives of t(u): chain rule on t' = 1/v(t)
  const double tp = 1.0 / v;
  const double tpp = -v1 / (v * v * v);
  const double t3 = -v2 / std::pow(v, 4) + 3.0 * v1 * v1 / std::pow(v, 5);
  const double t4 = -v3 / std::pow(v, 5) + 10.0 * v1 * v2 / std::pow(v, 6) -
                    15.0 * v1 * v1 * v1 / std::pow(v, 7);

  out.push_back(a[1] * tp);
  if (order >= 2) out.push_back(a[2] * tp * tp + a[1] * tpp);
  if (order >= 3)
    out.push_back(a[3] * tp * tp * tp + a[2] * (3.0 * tp * tpp) + a[1] * t3);
  if (order >= 4)
    out.push_back(a[4] * std::pow(tp, 4) + a[3] * (6.0 * tp * tp * tpp) +
                  a[2] * (3.0 * tpp * tpp + 4.0 * tp * t3) + a[1] * t4);
  return out;
}

}  // namespace curvelink
