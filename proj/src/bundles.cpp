#include "curvelink/bundles.hpp"

#include <cmath>
#include <numbers>

#include "curvelink/errors.hpp"

namespace curvelink {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double torus_gap(double a, double b) {
  double d = std::abs(a - b);
  d = std::fmod(d, kTwoPi);
  return std::min(d, kTwoPi - d);
}

/// Gram-Schmidt residual norms without rank exceptions; once a column
/// collapses the remaining residuals are reported as zero.
Eigen::VectorXd gs_residuals(const Eigen::MatrixXd& vectors) {
  const int m = static_cast<int>(vectors.cols());
  Eigen::MatrixXd basis(vectors.rows(), m);
  Eigen::VectorXd res = Eigen::VectorXd::Zero(m);
  for (int i = 0; i < m; ++i) {
    Eigen::VectorXd v = vectors.col(i);
    for (int pass = 0; pass < 2; ++pass)
      for (int j = 0; j < i; ++j) v -= basis.col(j).dot(v) * basis.col(j);
    const double r = v.norm();
    res[i] = r;
    if (r < 1e-300) return res;  // rest stays zero
    basis.col(i) = v / r;
  }
  return res;
}

}  // namespace

const char* bundle_kind_name(BundleKind kind) {
  switch (kind) {
    case BundleKind::Osculating: return "osculating";
    case BundleKind::Orthogonal: return "orthogonal";
    case BundleKind::ConstantFrame: return "constant";
    case BundleKind::CustomFrame: return "custom";
  }
  return "?";
}

Bundle Bundle::osculating(const TrigCurve& curve) {
  Bundle b;
  b.kind_ = BundleKind::Osculating;
  b.dim_ = curve.dim();
  b.curve_ = curve;
  return b;
}

Bundle Bundle::orthogonal(const TrigCurve& curve) {
  Bundle b;
  b.kind_ = BundleKind::Orthogonal;
  b.dim_ = curve.dim();
  b.curve_ = curve;
  return b;
}

Bundle Bundle::constant(const Eigen::MatrixXd& frame) {
  if (frame.cols() != 3 || frame.rows() < 3)
    throw SchemaError("constant bundle frame must be n x 3 with n >= 3");
  Bundle b;
  b.kind_ = BundleKind::ConstantFrame;
  b.dim_ = static_cast<int>(frame.rows());
  b.constant_frame_ = gram_schmidt<double>(frame).basis;
  return b;
}

Bundle Bundle::custom(const std::array<TrigCurve, 3>& generators) {
  const int n = generators[0].dim();
  for (const TrigCurve& g : generators)
    if (g.dim() != n) throw SchemaError("custom frame generators disagree in dimension");
  Bundle b;
  b.kind_ = BundleKind::CustomFrame;
  b.dim_ = n;
  b.generators_.assign(generators.begin(), generators.end());
  // Frame validity and continuity on a 1024 grid; consecutive frames must
  // stay within 0.5 in operator norm.
  Eigen::MatrixXd prev;
  for (int i = 0; i <= 1024; ++i) {
    const double t = kTwoPi * i / 1024;
    const Eigen::MatrixXd f = b.frame<double>(t);
    if (i > 0 && (f - prev).norm() > 0.5)
      throw SchemaError("custom frame is discontinuous near t = " +
                        std::to_string(t));
    prev = f;
  }
  return b;
}

const TrigCurve& Bundle::base_curve() const {
  if (!curve_) throw Error("bundle kind has no base curve");
  return *curve_;
}

Bundle::FrameJet Bundle::frame_jet(double t) const {
  const MatX<Dual> f = frame<Dual>(Dual::variable(t));
  FrameJet jet;
  jet.value.resize(dim_, 3);
  jet.derivative.resize(dim_, 3);
  for (int i = 0; i < dim_; ++i) {
    for (int c = 0; c < 3; ++c) {
      jet.value(i, c) = f(i, c).v;
      jet.derivative(i, c) = f(i, c).d;
    }
  }
  return jet;
}

Eigen::MatrixXd Bundle::projection(double t) const {
  const Eigen::MatrixXd f = frame<double>(t);
  return f * f.transpose();
}

Bundle::ProjectionJet Bundle::projection_jet(double t) const {
  const FrameJet fj = frame_jet(t);
  ProjectionJet pj;
  pj.value = fj.value * fj.value.transpose();
  pj.derivative = fj.derivative * fj.value.transpose() +
                  fj.value * fj.derivative.transpose();
  return pj;
}

Eigen::MatrixXd Bundle::a_operator(double t) const {
  const ProjectionJet pj = projection_jet(t);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(dim_, dim_);
  return pj.value * pj.derivative * (id - pj.value);
}

Eigen::MatrixXd Bundle::a_operator_fd(double t, double h) const {
  const Eigen::MatrixXd p = projection(t);
  const Eigen::MatrixXd dp = (projection(t + h) - projection(t - h)) / (2.0 * h);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(dim_, dim_);
  return p * dp * (id - p);
}

Eigen::VectorXd covariant_derivative(
    const Bundle& bundle, const std::function<Eigen::VectorXd(double)>& section,
    double t, double h) {
  const Eigen::VectorXd dh = (section(t + h) - section(t - h)) / (2.0 * h);
  return bundle.projection(t) * dh;
}

TransportResult parallel_transport(const Bundle& bundle, double t0, double t1,
                                   const Eigen::MatrixXd& start,
                                   double abs_tol) {
  if (start.rows() != bundle.dim() || start.cols() != 3)
    throw Error("parallel_transport: start frame must be n x 3");
  {
    const Eigen::MatrixXd out_of_fiber =
        start - bundle.projection(t0) * start;
    if (out_of_fiber.cwiseAbs().maxCoeff() > 1e-6)
      throw Error("parallel_transport: start frame does not span the fiber");
  }

  auto rhs = [&bundle](double t, const Eigen::MatrixXd& y) -> Eigen::MatrixXd {
    const Bundle::ProjectionJet pj = bundle.projection_jet(t);
    return (pj.derivative * y) - pj.value * (pj.derivative * y);
  };

  // Cash-Karp embedded 4(5) pair.
  static const double a21 = 1.0 / 5;
  static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static const double a41 = 3.0 / 10, a42 = -9.0 / 10, a43 = 6.0 / 5;
  static const double a51 = -11.0 / 54, a52 = 5.0 / 2, a53 = -70.0 / 27,
                      a54 = 35.0 / 27;
  static const double a61 = 1631.0 / 55296, a62 = 175.0 / 512,
                      a63 = 575.0 / 13824, a64 = 44275.0 / 110592,
                      a65 = 253.0 / 4096;
  static const double b1 = 37.0 / 378, b3 = 250.0 / 621, b4 = 125.0 / 594,
                      b6 = 512.0 / 1771;
  static const double e1 = b1 - 2825.0 / 27648, e3 = b3 - 18575.0 / 48384,
                      e4 = b4 - 13525.0 / 55296, e5 = -277.0 / 14336,
                      e6 = b6 - 1.0 / 4;

  const double span = t1 - t0;
  TransportResult out;
  out.frame = start;
  if (span == 0.0) return out;
  const double dir = span > 0 ? 1.0 : -1.0;
  double t = t0;
  double dt = dir * std::min(0.1, std::abs(span));
  Eigen::MatrixXd y = start;
  int steps = 0;
  while (dir * (t1 - t) > 1e-14) {
    if (std::abs(dt) < 1e-12 * std::abs(span))
      throw StepSizeUnderflowError(
          "parallel_transport: step size underflow near t = " +
          std::to_string(t));
    if (dir * (t + dt - t1) > 0.0) dt = t1 - t;
    const Eigen::MatrixXd k1 = rhs(t, y);
    const Eigen::MatrixXd k2 = rhs(t + dt * a21, y + dt * (a21 * k1));
    const Eigen::MatrixXd k3 =
        rhs(t + dt * (3.0 / 10), y + dt * (a31 * k1 + a32 * k2));
    const Eigen::MatrixXd k4 =
        rhs(t + dt * (3.0 / 5), y + dt * (a41 * k1 + a42 * k2 + a43 * k3));
    const Eigen::MatrixXd k5 =
        rhs(t + dt, y + dt * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Eigen::MatrixXd k6 =
        rhs(t + dt * (7.0 / 8),
            y + dt * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const Eigen::MatrixXd incr = b1 * k1 + b3 * k3 + b4 * k4 + b6 * k6;
    const Eigen::MatrixXd errm = e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6;
    const double err = std::abs(dt) * errm.cwiseAbs().maxCoeff();
    if (err <= abs_tol) {
      t += dt;
      y += dt * incr;
      ++steps;
      const double grow =
          err > 0.0 ? 0.9 * std::pow(abs_tol / err, 0.2) : 5.0;
      dt *= std::clamp(grow, 0.2, 5.0);
    } else {
      dt *= std::max(0.9 * std::pow(abs_tol / err, 0.25), 0.1);
    }
    if (steps > 1000000)
      throw StepSizeUnderflowError("parallel_transport: step budget exhausted");
  }
  out.frame = y;
  out.steps = steps;
  out.gram_drift = (y.transpose() * y - start.transpose() * start)
                       .cwiseAbs()
                       .maxCoeff();
  return out;
}

RegularityReport check_sl_conditions(const TrigCurve& curve,
                                     const Bundle& bundle, int k, int grid) {
  const int n = curve.dim();
  if (k < 1 || k > n - 2)
    throw SchemaError("regularity order k must satisfy 1 <= k <= n-2");
  RegularityReport rep;
  rep.k = k;
  rep.grid = grid;

  // Condition 2(a): independence of alpha', ..., alpha^(k+1), frame-free.
  rep.condition2a_margin = std::numeric_limits<double>::infinity();
  for (int i = 0; i < grid; ++i) {
    const double t = kTwoPi * i / grid;
    Eigen::MatrixXd derivs(n, k + 1);
    for (int m = 1; m <= k + 1; ++m) derivs.col(m - 1) = curve.derivative(t, m);
    const Eigen::VectorXd res = gs_residuals(derivs);
    for (int m = 0; m <= k; ++m) {
      const double norm = derivs.col(m).norm();
      const double margin = norm > 0.0 ? res[m] / norm : 0.0;
      if (margin < rep.condition2a_margin) {
        rep.condition2a_margin = margin;
        rep.condition2a_t = t;
      }
    }
  }
  if (rep.condition2a_margin <= rep.tol_2a) {
    rep.pass = false;  // frame-dependent clauses may be undefined; stop here
    rep.condition1_margin = std::numeric_limits<double>::quiet_NaN();
    rep.band_margin = std::numeric_limits<double>::quiet_NaN();
    rep.condition2b_max = std::numeric_limits<double>::quiet_NaN();
    rep.condition2c_margin = std::numeric_limits<double>::quiet_NaN();
    return rep;
  }

  // Clauses 2(b) and 2(c) on the t grid.
  rep.condition2b_max = 0.0;
  rep.condition2c_margin = std::numeric_limits<double>::infinity();
  bool frame_failed = false;
  for (int i = 0; i < grid && !frame_failed; ++i) {
    const double t = kTwoPi * i / grid;
    Eigen::MatrixXd frame;
    try {
      frame = bundle.frame<double>(t);
    } catch (const RankDeficiencyError&) {
      frame_failed = true;
      rep.condition2c_margin = 0.0;
      rep.condition2c_t = t;
      break;
    }
    for (int j = 1; j <= k - 1; ++j) {
      const Eigen::VectorXd d = curve.derivative(t, j);
      const double proj = (frame.transpose() * d).norm() / d.norm();
      if (proj > rep.condition2b_max) {
        rep.condition2b_max = proj;
        rep.condition2b_t = t;
      }
    }
    const Eigen::VectorXd dk = curve.derivative(t, k);
    const Eigen::VectorXd dk1 = curve.derivative(t, k + 1);
    const Eigen::Vector3d a = frame.transpose() * dk;
    const Eigen::Vector3d b = frame.transpose() * dk1;
    const double area = a.cross(b).norm() / (dk.norm() * dk1.norm());
    if (area < rep.condition2c_margin) {
      rep.condition2c_margin = area;
      rep.condition2c_t = t;
    }
  }

  // Condition 1 on the torus grid, diagonal band excluded; the band itself
  // is covered by the Taylor-normalized margin (controlled by clause 2(c)).
  const double band = kTwoPi / 64;
  const double band_inner = kTwoPi / 1024;
  double kfact = 1.0;
  for (int i = 2; i <= k; ++i) kfact *= i;
  rep.condition1_margin = std::numeric_limits<double>::infinity();
  rep.band_margin = std::numeric_limits<double>::infinity();
  if (!frame_failed) {
    std::vector<Eigen::VectorXd> points(grid);
    for (int j = 0; j < grid; ++j) points[j] = curve.point(kTwoPi * j / grid);
    for (int i = 0; i < grid; ++i) {
      const double t = kTwoPi * i / grid;
      const Eigen::MatrixXd frame = bundle.frame<double>(t);
      const double nk = (frame.transpose() * curve.derivative(t, k)).norm();
      for (int j = 0; j < grid; ++j) {
        const double s = kTwoPi * j / grid;
        const double gap = torus_gap(t, s);
        if (gap < band_inner) continue;
        const double val =
            (frame.transpose() * (points[j] - points[i])).norm();
        if (gap >= band) {
          if (val < rep.condition1_margin) {
            rep.condition1_margin = val;
            rep.condition1_t = t;
            rep.condition1_s = s;
          }
        } else {
          const double normalized = val * kfact / (std::pow(gap, k) * nk);
          if (normalized < rep.band_margin) {
            rep.band_margin = normalized;
            rep.band_t = t;
            rep.band_s = s;
          }
        }
      }
    }
  } else {
    rep.condition1_margin = std::numeric_limits<double>::quiet_NaN();
    rep.band_margin = std::numeric_limits<double>::quiet_NaN();
  }

  rep.pass = !frame_failed && rep.condition1_margin > rep.tol_condition1 &&
             rep.band_margin > rep.tol_band &&
             rep.condition2a_margin > rep.tol_2a &&
             rep.condition2b_max < rep.tol_2b &&
             rep.condition2c_margin > rep.tol_2c;
  return rep;
}

int detect_k(const TrigCurve& curve, const Bundle& bundle, int grid) {
  const int n = curve.dim();
  for (int k = 1; k <= n - 2; ++k) {
    RegularityReport rep;
    try {
      rep = check_sl_conditions(curve, bundle, k, grid);
    } catch (const Error&) {
      continue;
    }
    if (rep.condition2a_margin > rep.tol_2a &&
        rep.condition2b_max < rep.tol_2b &&
        rep.condition2c_margin > rep.tol_2c)
      return k;
  }
  throw RegularityError("no order k in [1, n-2] satisfies condition 2", 0.0,
                        0.0);
}

}  // namespace curvelink
