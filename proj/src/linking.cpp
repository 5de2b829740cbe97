#include "curvelink/linking.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

namespace curvelink {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kFourPi = 2.0 * kTwoPi;

double det3(const Eigen::Vector3d& a, const Eigen::Vector3d& b,
            const Eigen::Vector3d& c) {
  return a.dot(b.cross(c));
}
}  // namespace

const char* method_name(Method m) {
  switch (m) {
    case Method::integral: return "integral";
    case Method::intersection: return "intersection";
    case Method::limit: return "limit";
    case Method::gauss_r3: return "gauss_r3";
  }
  return "?";
}

InvariantResult make_invariant(double raw, Method method,
                               nlohmann::json diagnostics,
                               double residual_tol) {
  InvariantResult res;
  res.raw = raw;
  res.value = static_cast<int>(std::lround(raw));
  res.residual = std::abs(raw - res.value);
  res.method = method;
  res.diagnostics = std::move(diagnostics);
  if (!(res.residual < residual_tol))
    throw ResidualError(std::string("invariant residual ") +
                            std::to_string(res.residual) +
                            " refuses integer rounding",
                        raw);
  res.diagnostics["residual_tolerance"] = residual_tol;
  return res;
}

LinkingIntegrand::LinkingIntegrand(const TrigCurve& alpha,
                                   const TrigCurve& beta, const Bundle& nu)
    : alpha_(&alpha), beta_(&beta), nu_(&nu) {
  if (alpha.dim() != beta.dim() || alpha.dim() != nu.dim())
    throw SchemaError("linking integrand: dimension mismatch");
}

void LinkingIntegrand::prepare_row(double t) const {
  if (row_ready_ && row_t_ == t) return;
  frame_ = nu_->frame<double>(t);
  a_op_ = nu_->a_operator(t);
  alpha_pt_ = alpha_->point(t);
  alpha_d1_ = alpha_->derivative(t, 1);
  row_t_ = t;
  row_ready_ = true;
}

double LinkingIntegrand::operator()(double t, double s) const {
  prepare_row(t);
  const Eigen::VectorXd delta = beta_->point(s) - alpha_pt_;
  const Eigen::Vector3d a = frame_.transpose() * delta;
  const double na = a.norm();
  if (na < 1e-12)
    throw RegularityError("linking integrand: chord lies in the fiber's"
                          " orthogonal complement",
                          t, s);
  const Eigen::Vector3d b =
      frame_.transpose() * (-alpha_d1_ + a_op_ * delta);
  const Eigen::Vector3d c = frame_.transpose() * beta_->derivative(s, 1);
  return det3(a, b, c) / (na * na * na);
}

double linking_condition_margin(const TrigCurve& alpha, const TrigCurve& beta,
                                const Bundle& nu, int scan, double tol) {
  double margin = std::numeric_limits<double>::infinity();
  double worst_t = 0.0, worst_s = 0.0;
  std::vector<Eigen::VectorXd> beta_pts(scan);
  for (int j = 0; j < scan; ++j) beta_pts[j] = beta.point(kTwoPi * j / scan);
  for (int i = 0; i < scan; ++i) {
    const double t = kTwoPi * i / scan;
    const Eigen::MatrixXd frame = nu.frame<double>(t);
    const Eigen::VectorXd apt = alpha.point(t);
    for (int j = 0; j < scan; ++j) {
      const double val = (frame.transpose() * (beta_pts[j] - apt)).norm();
      if (val < margin) {
        margin = val;
        worst_t = t;
        worst_s = kTwoPi * j / scan;
      }
    }
  }
  if (margin < tol)
    throw RegularityError(
        "linking condition violated: |n_t(beta(s)-alpha(t))| = " +
            std::to_string(margin),
        worst_t, worst_s);
  return margin;
}

InvariantResult linking_number_integral(const TrigCurve& alpha,
                                        const TrigCurve& beta,
                                        const Bundle& nu, TorusGrid grid) {
  validate_torus_grid(grid);
  const double margin = linking_condition_margin(alpha, beta, nu);
  LinkingIntegrand f(alpha, beta, nu);
  const QuadratureResult q =
      torus_integral([&f](double t, double s) { return f(t, s); }, grid);
  nlohmann::json diag;
  diag["grid"] = grid.n;
  diag["condition_margin"] = margin;
  diag["quadrature_error_estimate"] = q.error_estimate / kFourPi;
  return make_invariant(q.value / kFourPi, Method::integral, diag);
}

InvariantResult linking_number_intersection(const TrigCurve& alpha,
                                            const TrigCurve& beta,
                                            const Bundle& nu,
                                            int mu_frame_index,
                                            const RootOptions& opt,
                                            double condition_tol) {
  if (mu_frame_index < 0 || mu_frame_index > 2)
    throw SchemaError("mu frame index must be 0, 1 or 2");
  const double condition_margin =
      linking_condition_margin(alpha, beta, nu, 128, condition_tol);

  // System in (t, s, lambda): n_t(beta(s) - alpha(t)) = lambda n_t mu(t),
  // written in fiber coordinates where n_t mu is the mu_frame_index-th
  // basis vector.
  struct Row {
    double t = -1.0;
    bool ready = false;
    Eigen::MatrixXd frame;
    Eigen::VectorXd apt;
  };
  auto row = std::make_shared<Row>();
  auto fiber_coords = [&nu, &alpha, row](double t,
                                         const Eigen::VectorXd& bpt) {
    if (!row->ready || row->t != t) {
      row->frame = nu.frame<double>(t);
      row->apt = alpha.point(t);
      row->t = t;
      row->ready = true;
    }
    return Eigen::Vector3d(row->frame.transpose() * (bpt - row->apt));
  };

  TorusSystem system = [&, mu_frame_index](const Eigen::VectorXd& u) {
    const Eigen::Vector3d a = fiber_coords(u[0], beta.point(u[1]));
    Eigen::Vector3d m = Eigen::Vector3d::Zero();
    m[mu_frame_index] = 1.0;
    return Eigen::VectorXd(a - u[2] * m);
  };
  SeedLift lift = [&](double t, double s) {
    const Eigen::Vector3d a = fiber_coords(t, beta.point(s));
    Eigen::VectorXd u(3);
    u << t, s, a[mu_frame_index];
    return u;
  };

  RootOptions local = opt;
  local.discard_diagonal = false;  // generic pairs have no diagonal exemption
  const RootSearch search = find_torus_roots(system, 3, lift, local);

  double raw = 0.0;
  nlohmann::json roots = nlohmann::json::array();
  for (const RootRecord& r : search.roots) {
    const double t = r.u[0], s = r.u[1], lambda = r.u[2];
    const Bundle::FrameJet fj = nu.frame_jet(t);
    const Eigen::VectorXd mu = fj.value.col(mu_frame_index);
    const Eigen::VectorXd dmu = fj.derivative.col(mu_frame_index);
    const Eigen::MatrixXd a_op = nu.a_operator(t);
    const Eigen::VectorXd delta = beta.point(s) - alpha.point(t);
    const Eigen::Vector3d cb = fj.value.transpose() * beta.derivative(s, 1);
    const Eigen::Vector3d cx =
        fj.value.transpose() *
        (alpha.derivative(t, 1) + lambda * dmu - a_op * (delta - lambda * mu));
    const Eigen::Vector3d cm = fj.value.transpose() * mu;
    const double d_det = lambda * cm.squaredNorm() * det3(cb, cx, cm);
    if (std::abs(d_det) < 1e-10)
      throw TransversalityError(
          "intersection sign determinant vanishes at (t, s) = (" +
          std::to_string(t) + ", " + std::to_string(s) + ")");
    raw += 0.5 * (d_det > 0 ? 1.0 : -1.0);
    roots.push_back({{"t", t},
                     {"s", s},
                     {"lambda", lambda},
                     {"sign", d_det > 0 ? 1 : -1},
                     {"jacobian_det", r.jacobian_det}});
  }

  nlohmann::json diag;
  diag["mu_frame_index"] = mu_frame_index;
  diag["seeds"] = local.seeds;
  diag["condition_margin"] = condition_margin;
  diag["roots"] = roots;
  diag["newton_failures"] = search.failures.size();
  return make_invariant(raw, Method::intersection, diag);
}

InvariantResult gauss_linking_r3(const TrigCurve& alpha, const TrigCurve& beta,
                                 TorusGrid grid) {
  if (alpha.dim() != 3 || beta.dim() != 3)
    throw SchemaError("gauss_linking_r3 requires curves in R^3");
  validate_torus_grid(grid);

  struct Row {
    double t = -1.0;
    bool ready = false;
    Eigen::Vector3d apt, ad1;
  };
  auto row = std::make_shared<Row>();
  auto f = [&](double t, double s) {
    if (!row->ready || row->t != t) {
      row->apt = alpha.point(t);
      row->ad1 = alpha.derivative(t, 1);
      row->t = t;
      row->ready = true;
    }
    const Eigen::Vector3d delta = Eigen::Vector3d(beta.point(s)) - row->apt;
    const double nd = delta.norm();
    if (nd < 1e-6)
      throw RegularityError("gauss_linking_r3: curves (nearly) intersect", t,
                            s);
    const Eigen::Vector3d bd1 = beta.derivative(s, 1);
    return delta.dot(bd1.cross(row->ad1)) / (nd * nd * nd);
  };
  const QuadratureResult q = torus_integral(f, grid);
  nlohmann::json diag;
  diag["grid"] = grid.n;
  diag["quadrature_error_estimate"] = q.error_estimate / kFourPi;
  return make_invariant(q.value / kFourPi, Method::gauss_r3, diag);
}

}  // namespace curvelink
