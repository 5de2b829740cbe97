#include "curvelink/selflinking.hpp"

#include <cmath>
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

int sgn(double x) { return x > 0 ? 1 : -1; }

/// Unit fiber cross product g of (n alpha^(k+1), n alpha^(k)) as a generic
/// scalar expression, so dual evaluation yields g'.
template <class S>
VecX<S> phi_g_vector(const TrigCurve& alpha, const Bundle& nu, int k, S t) {
  const MatX<S> frame = nu.frame<S>(t);
  const VecX<S> g =
      fiber_cross<S>(frame, alpha.eval<S>(t, k + 1), alpha.eval<S>(t, k));
  const S norm = g.norm();
  if (value_of(norm) < 1e-9)
    throw RegularityError(
        "diagonal degeneracy: n alpha^(k) and n alpha^(k+1) nearly parallel",
        value_of(t), value_of(t));
  return g / norm;
}

nlohmann::json report_json(const RegularityReport& rep) {
  return {{"k", rep.k},
          {"grid", rep.grid},
          {"pass", rep.pass},
          {"condition1_margin", rep.condition1_margin},
          {"band_margin", rep.band_margin},
          {"condition2a_margin", rep.condition2a_margin},
          {"condition2b_max", rep.condition2b_max},
          {"condition2c_margin", rep.condition2c_margin}};
}

/// Midpoint-offset double sum over [0, L)^2 in arc length for the
/// closed-form corollary integrands. RowData carries the Frenet data of one
/// row; the caller supplies the two factories and the kernel.
struct ArcGrid {
  std::vector<double> row_t;  // t(u_i), plain nodes
  std::vector<double> col_t;  // t(v_j), offset nodes
  double hu = 0.0;
};

ArcGrid make_arc_grid(const ArcLengthTable& table, int grid) {
  ArcGrid g;
  const double L = table.total_length();
  g.hu = L / grid;
  g.row_t.resize(grid);
  g.col_t.resize(grid);
  for (int i = 0; i < grid; ++i) {
    g.row_t[i] = table.t_of_s(g.hu * i);
    g.col_t[i] = table.t_of_s(g.hu * (i + 0.5));
  }
  return g;
}

}  // namespace

void require_regularity(const RegularityReport& rep) {
  if (rep.pass) return;
  std::string clause;
  double t = 0.0, s = 0.0;
  if (!(rep.condition2a_margin > rep.tol_2a)) {
    clause = "condition 2(a) (derivative independence), margin " +
             std::to_string(rep.condition2a_margin);
    t = s = rep.condition2a_t;
  } else if (!(rep.condition2b_max < rep.tol_2b)) {
    clause = "condition 2(b) (low derivatives not in the fiber complement), "
             "projection " +
             std::to_string(rep.condition2b_max);
    t = s = rep.condition2b_t;
  } else if (!(rep.condition2c_margin > rep.tol_2c)) {
    clause = "condition 2(c) (fiber parts of alpha^(k), alpha^(k+1) "
             "dependent), margin " +
             std::to_string(rep.condition2c_margin);
    t = s = rep.condition2c_t;
  } else if (!(rep.band_margin > rep.tol_band)) {
    clause = "condition 1 (diagonal band), margin " +
             std::to_string(rep.band_margin);
    t = rep.band_t;
    s = rep.band_s;
  } else {
    clause = "condition 1 (chord meets the fiber complement), margin " +
             std::to_string(rep.condition1_margin);
    t = rep.condition1_t;
    s = rep.condition1_s;
  }
  throw RegularityError("regularity check failed: " + clause, t, s);
}

TrigCurve pushoff(const TrigCurve& alpha, int k, double delta) {
  if (delta == 0.0) throw SchemaError("push-off delta must be nonzero");
  return alpha.plus_scaled(delta, alpha.derivative_curve(k));
}

double diagonal_phi(const TrigCurve& alpha, const Bundle& nu, int k,
                    double t) {
  // g and its exact derivative
  const VecX<Dual> gd = phi_g_vector<Dual>(alpha, nu, k, Dual::variable(t));
  const int n = alpha.dim();
  Eigen::VectorXd g(n), dg(n);
  for (int i = 0; i < n; ++i) {
    g[i] = gd[i].v;
    dg[i] = gd[i].d;
  }
  const Eigen::MatrixXd frame = nu.frame<double>(t);
  Eigen::VectorXd u = frame * (frame.transpose() * alpha.derivative(t, k));
  const double un = u.norm();
  if (un < 1e-9)
    throw RegularityError("diagonal degeneracy: n alpha^(k) vanishes", t, t);
  u /= un;
  const Eigen::VectorXd h = fiber_cross<double>(frame, g, u);
  const Eigen::VectorXd w = dg + nu.a_operator(t) * g;
  return (frame * (frame.transpose() * w)).dot(h);
}

namespace {

InvariantResult sl_integral_impl(const TrigCurve& alpha, const Bundle& nu,
                                 int k, TorusGrid grid,
                                 const RegularityReport& rep) {
  validate_torus_grid(grid);
  require_regularity(rep);
  LinkingIntegrand f(alpha, alpha, nu);
  const QuadratureResult q =
      torus_integral([&f](double t, double s) { return f(t, s); }, grid);
  double raw = q.value / kFourPi;
  nlohmann::json diag;
  diag["grid"] = grid.n;
  diag["k"] = k;
  diag["quadrature_error_estimate"] = q.error_estimate / kFourPi;
  diag["regularity"] = report_json(rep);
  if (k % 2 == 1) {
    const double phi = circle_integral(
        [&](double t) { return diagonal_phi(alpha, nu, k, t); }, grid.n);
    raw -= phi / kTwoPi;
    diag["phi_integral"] = phi;
  }
  return make_invariant(raw, Method::integral, diag);
}

}  // namespace

InvariantResult sl_integral_even(const TrigCurve& alpha, const Bundle& nu,
                                 int k, TorusGrid grid) {
  if (k % 2 != 0) throw SchemaError("sl_integral_even requires even k");
  return sl_integral_impl(alpha, nu, k, grid,
                          check_sl_conditions(alpha, nu, k));
}

InvariantResult sl_integral_odd(const TrigCurve& alpha, const Bundle& nu,
                                int k, TorusGrid grid) {
  if (k % 2 != 1) throw SchemaError("sl_integral_odd requires odd k");
  return sl_integral_impl(alpha, nu, k, grid,
                          check_sl_conditions(alpha, nu, k));
}

InvariantResult sl_integral(const TrigCurve& alpha, const Bundle& nu, int k,
                            TorusGrid grid) {
  return sl_integral_impl(alpha, nu, k, grid,
                          check_sl_conditions(alpha, nu, k));
}

InvariantResult sl_limit(const TrigCurve& alpha, const Bundle& nu, int k,
                         const RootOptions& opt) {
  const RegularityReport rep = check_sl_conditions(alpha, nu, k);
  require_regularity(rep);

  // Push direction mu: a bundle frame vector staying transverse to the
  // fiber part of alpha^(k) (the push-off direction projects onto the first
  // frame vector for the osculating and orthogonal bundles, so index 2 is
  // the natural choice).
  int mu_index = -1;
  for (int candidate : {2, 1}) {
    double min_sine = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 256; ++i) {
      const double t = kTwoPi * i / 256;
      const Eigen::MatrixXd frame = nu.frame<double>(t);
      const Eigen::Vector3d a =
          frame.transpose() * alpha.derivative(t, k);
      const double na = a.norm();
      if (na < 1e-12) {
        min_sine = 0.0;
        break;
      }
      Eigen::Vector3d e = Eigen::Vector3d::Zero();
      e[candidate] = 1.0;
      min_sine = std::min(min_sine, a.cross(e).norm() / na);
    }
    if (min_sine > 0.05) {
      mu_index = candidate;
      break;
    }
  }
  if (mu_index < 0)
    throw RegularityError(
        "sl_limit: no bundle frame vector is transverse to the push-off "
        "direction",
        0.0, 0.0);

  // delta ladder: largest scale whose pair condition margin stays positive.
  double delta0 = 0.0, margin0 = 0.0;
  for (double delta : {1e-2, 1e-3, 1e-4, 1e-5}) {
    const TrigCurve pushed = pushoff(alpha, k, delta);
    double m = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 256; ++i) {
      const double t = kTwoPi * i / 256;
      const Eigen::MatrixXd frame = nu.frame<double>(t);
      const Eigen::VectorXd apt = pushed.point(t);
      for (int j = 0; j < 256; ++j) {
        const double s = kTwoPi * j / 256;
        m = std::min(m,
                     (frame.transpose() * (alpha.point(s) - apt)).norm());
      }
    }
    if (m > 1e-9) {
      delta0 = delta;
      margin0 = m;
      break;
    }
  }
  if (delta0 == 0.0)
    throw RegularityError(
        "sl_limit: no push-off scale satisfies the pair condition", 0.0, 0.0);

  auto link_at = [&](double delta) {
    // The pair margin scales like delta^2, so the generic 1e-6 floor is
    // replaced by a strict-positivity floor here. The push-off pair's root
    // pattern is finer than a generic one; seed at twice the default
    // resolution.
    RootOptions local = opt;
    local.seeds = std::max(opt.seeds, 256);
    return linking_number_intersection(pushoff(alpha, k, delta), alpha, nu,
                                       mu_index, local, 1e-9);
  };
  const InvariantResult l0 = link_at(delta0);
  const InvariantResult l1 = link_at(delta0 / 2.0);
  if (l0.value != l1.value)
    throw UnstableLimitError("sl_limit: push-off scales disagree", l0.raw,
                             l1.raw);

  InvariantResult res;
  res.raw = l0.raw;
  res.value = l0.value;
  res.residual = l0.residual;
  res.method = Method::limit;
  res.diagnostics["delta0"] = delta0;
  res.diagnostics["pair_condition_margin"] = margin0;
  res.diagnostics["mu_frame_index"] = mu_index;
  res.diagnostics["link_delta0"] = l0.diagnostics;
  res.diagnostics["link_delta0_half"] = l1.diagnostics;
  res.diagnostics["regularity"] = report_json(rep);
  return res;
}

namespace {

/// Shared driver for the two developable-intersection formulas.
DevelopableResult developable_intersections(const TrigCurve& alpha,
                                            bool osculating_surface,
                                            const RootOptions& opt) {
  const int n = alpha.dim();
  const Bundle nu = osculating_surface ? Bundle::orthogonal(alpha)
                                       : Bundle::osculating(alpha);
  const int k = osculating_surface ? n - 2 : 1;
  const RegularityReport rep = check_sl_conditions(alpha, nu, k);
  require_regularity(rep);

  // chi-top: <delta, f_{n-1}> = <delta, f_n> = 0 (fiber coords x_1..x_{n-2})
  // chi-perp: <delta, f_1> = <delta, f_2> = 0   (fiber coords x_3..x_n)
  const int c0 = osculating_surface ? n - 2 : 0;
  const int c1 = osculating_surface ? n - 1 : 1;

  struct Row {
    double t = -1.0;
    bool ready = false;
    Eigen::MatrixXd frame;  // full Frenet frame
    Eigen::VectorXd apt;
  };
  auto row = std::make_shared<Row>();
  auto prepare = [row, &alpha](double t) {
    if (!row->ready || row->t != t) {
      row->frame = frenet_frame_matrix<double>(alpha, t);
      row->apt = alpha.point(t);
      row->t = t;
      row->ready = true;
    }
  };
  TorusSystem system = [&, row, c0, c1](const Eigen::VectorXd& u) {
    prepare(u[0]);
    const Eigen::VectorXd delta = alpha.point(u[1]) - row->apt;
    Eigen::VectorXd f(2);
    f << row->frame.col(c0).dot(delta), row->frame.col(c1).dot(delta);
    return f;
  };

  // Both components vanish identically on the diagonal, to orders growing
  // with n, so Newton "converges" anywhere inside a thin sliver around it.
  // Genuine intersections cannot sit there (their fiber coordinates would
  // vanish), so the discard band is widened beyond the generic default.
  RootOptions local = opt;
  local.diagonal_tol = std::max(opt.diagonal_tol, 2e-2);
  const RootSearch search = find_torus_roots(system, 2, {}, local);

  DevelopableResult out;
  double raw = 0.0;
  nlohmann::json table = nlohmann::json::array();
  for (const RootRecord& r : search.roots) {
    const double t = r.t(), s = r.s();
    IntersectionRecord rec;
    rec.t = t;
    rec.s = s;
    const Eigen::VectorXd delta = alpha.point(s) - alpha.point(t);
    if (osculating_surface) {
      const Eigen::MatrixXd frame = frenet_frame_matrix<double>(alpha, t);
      rec.fiber_coords.resize(n - 2);
      for (int i = 0; i < n - 2; ++i)
        rec.fiber_coords[i] = frame.col(i).dot(delta);
      if (std::abs(rec.fiber_coords[n - 3]) < 1e-6)
        throw RegularityError(
            "chi-top intersection on the non-immersed locus (x_{n-2} = 0)", t,
            s);
      // f_n with the orthogonal bundle's orientation (see Bundle::frame)
      const double sigma = (n % 2 == 0) ? -1.0 : 1.0;
      const double inner =
          sigma * alpha.derivative(s, 1).dot(frame.col(n - 1));
      if (std::abs(inner) < 1e-10)
        throw TransversalityError(
            "chi-top intersection tangent to the surface at (t, s) = (" +
            std::to_string(t) + ", " + std::to_string(s) + ")");
      rec.sign_factor = -sgn(inner);
      rec.index = 1;
      rec.contribution = 0.5 * rec.sign_factor;
    } else {
      // exact Frenet frame derivative for the tangent column of the index
      const MatX<Dual> fd =
          frenet_frame_matrix<Dual>(alpha, Dual::variable(t));
      Eigen::MatrixXd frame(n, n), dframe(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          frame(i, j) = fd(i, j).v;
          dframe(i, j) = fd(i, j).d;
        }
      rec.fiber_coords.resize(n - 2);
      for (int i = 2; i < n; ++i)
        rec.fiber_coords[i - 2] = frame.col(i).dot(delta);
      if (std::abs(rec.fiber_coords[0]) < 1e-6)
        throw RegularityError("chi-perp intersection with x_3 = 0", t, s);
      Eigen::VectorXd chi_t = alpha.derivative(t, 1);
      for (int i = 2; i < n; ++i)
        chi_t += rec.fiber_coords[i - 2] * dframe.col(i);
      Eigen::MatrixXd em(n, n);
      em.col(0) = alpha.derivative(s, 1);
      em.col(1) = chi_t;
      for (int i = 2; i < n; ++i) em.col(i) = frame.col(i);
      const double e_det = em.determinant();
      if (std::abs(e_det) < 1e-10)
        throw TransversalityError(
            "chi-perp intersection index determinant vanishes at (t, s) = (" +
            std::to_string(t) + ", " + std::to_string(s) + ")");
      rec.sign_factor = sgn(rec.fiber_coords[0]);
      rec.index = sgn(e_det);
      rec.contribution = 0.5 * rec.sign_factor * rec.index;
    }
    raw += rec.contribution;
    std::vector<double> coords(rec.fiber_coords.data(),
                               rec.fiber_coords.data() + rec.fiber_coords.size());
    table.push_back({{"t", rec.t},
                     {"s", rec.s},
                     {"fiber_coords", coords},
                     {"sign_factor", rec.sign_factor},
                     {"index", rec.index},
                     {"contribution", rec.contribution}});
    out.records.push_back(std::move(rec));
  }

  nlohmann::json diag;
  diag["surface"] = osculating_surface ? "chi_top" : "chi_perp";
  diag["roots"] = table;
  diag["root_count"] = out.records.size();
  diag["newton_failures"] = search.failures.size();
  diag["regularity"] = report_json(rep);
  out.invariant = make_invariant(raw, Method::intersection, diag);
  return out;
}

}  // namespace

DevelopableResult osculating_developable_intersections(const TrigCurve& alpha,
                                                       const RootOptions& opt) {
  return developable_intersections(alpha, true, opt);
}

DevelopableResult orthogonal_developable_intersections(
    const TrigCurve& alpha, const RootOptions& opt) {
  return developable_intersections(alpha, false, opt);
}

namespace {

/// Cross-validation of the generic path against the arc-length closed-form
/// integrand. The raw values agree within 2e-3 once both quadratures are
/// converged; before that the gate widens by the two convergence estimates,
/// which the geometry of near-diagonal peaks can keep large at moderate
/// grids. The closed form itself is additionally checked pointwise against
/// the generic 2-form at machine precision elsewhere (unit tests).
void cross_validate(InvariantResult& res, const char* name, double corollary,
                    double corollary_estimate) {
  const double gate =
      2e-3 + 2.0 * (res.diagnostics["quadrature_error_estimate"].get<double>() +
                    corollary_estimate);
  if (std::abs(corollary - res.raw) > gate)
    throw Error(std::string(name) + " cross-validation mismatch: generic raw " +
                std::to_string(res.raw) + " vs closed form " +
                std::to_string(corollary));
  res.diagnostics["corollary_raw"] = corollary;
  res.diagnostics["corollary_error_estimate"] = corollary_estimate;
}

}  // namespace

InvariantResult sl_orthogonal(const TrigCurve& alpha, TorusGrid grid) {
  const int n = alpha.dim();
  const Bundle nu = Bundle::orthogonal(alpha);
  const int k = n - 2;
  const RegularityReport rep = check_sl_conditions(alpha, nu, k);
  InvariantResult res = sl_integral_impl(alpha, nu, k, grid, rep);
  const double corollary = orthogonal_corollary_raw(alpha, grid.n);
  const double coarse = orthogonal_corollary_raw(alpha, grid.n / 2);
  cross_validate(res, "sl_orthogonal", corollary,
                 std::abs(corollary - coarse));
  return res;
}

InvariantResult sl_osculating(const TrigCurve& alpha, TorusGrid grid) {
  const Bundle nu = Bundle::osculating(alpha);
  const RegularityReport rep = check_sl_conditions(alpha, nu, 1);
  InvariantResult res = sl_integral_impl(alpha, nu, 1, grid, rep);
  const double corollary = osculating_corollary_raw(alpha, grid.n);
  const double coarse = osculating_corollary_raw(alpha, grid.n / 2);
  cross_validate(res, "sl_osculating", corollary, std::abs(corollary - coarse));
  return res;
}

double orthogonal_corollary_raw(const TrigCurve& alpha, int grid) {
  const int n = alpha.dim();
  const ArcLengthTable table(alpha);
  const ArcGrid g = make_arc_grid(table, grid);

  std::vector<Eigen::VectorXd> col_pt(grid), col_tan(grid);
  for (int j = 0; j < grid; ++j) {
    col_pt[j] = alpha.point(g.col_t[j]);
    const Eigen::VectorXd d = alpha.derivative(g.col_t[j], 1);
    col_tan[j] = d / d.norm();
  }

  const Bundle nu = Bundle::orthogonal(alpha);
  double sum = 0.0;
  double circle = 0.0;
  for (int i = 0; i < grid; ++i) {
    const FrenetApparatus ap = frenet(alpha, g.row_t[i]);
    const Eigen::MatrixXd fiber = nu.frame<double>(g.row_t[i]);
    const Eigen::VectorXd f_low = ap.frame.col(n - 4);  // f_{n-3}
    const double kappa_low = ap.curvatures[n - 4];      // kappa_{n-3}
    const Eigen::VectorXd apt = alpha.point(g.row_t[i]);
    const Eigen::Vector3d e1(1.0, 0.0, 0.0);  // f_{n-2} in fiber coordinates
    for (int j = 0; j < grid; ++j) {
      const Eigen::VectorXd delta = col_pt[j] - apt;
      const Eigen::Vector3d a = fiber.transpose() * delta;
      const Eigen::Vector3d b = fiber.transpose() * col_tan[j];
      const double na = a.norm();
      sum += delta.dot(f_low) * kappa_low * det3(a, b, e1) / (na * na * na);
    }
    circle += ap.curvatures[n - 2];  // kappa_{n-1}
  }
  double raw = sum * g.hu * g.hu / kFourPi;
  if (n % 2 == 1) raw += circle * g.hu / kTwoPi;
  return raw;
}

double osculating_corollary_raw(const TrigCurve& alpha, int grid) {
  const ArcLengthTable table(alpha);
  const ArcGrid g = make_arc_grid(table, grid);

  std::vector<Eigen::VectorXd> col_pt(grid), col_tan(grid);
  for (int j = 0; j < grid; ++j) {
    col_pt[j] = alpha.point(g.col_t[j]);
    const Eigen::VectorXd d = alpha.derivative(g.col_t[j], 1);
    col_tan[j] = d / d.norm();
  }

  double sum = 0.0;
  double circle = 0.0;
  for (int i = 0; i < grid; ++i) {
    const double t = g.row_t[i];
    const FrenetApparatus ap = frenet(alpha, t);
    const Eigen::MatrixXd fiber = ap.frame.leftCols(3);
    const double kappa1 = ap.curvatures[0], kappa2 = ap.curvatures[1];
    const double kt = 1.0 / (kappa1 * kappa2);
    const std::vector<Eigen::VectorXd> jets =
        table.arclength_jet(table.s_of_t(t), 4);
    const Eigen::VectorXd d4 = jets[4];
    const Eigen::VectorXd o_d4 = d4 - fiber * (fiber.transpose() * d4);
    const Eigen::VectorXd apt = alpha.point(t);
    for (int j = 0; j < grid; ++j) {
      const Eigen::VectorXd delta = col_pt[j] - apt;
      const Eigen::Vector3d a = fiber.transpose() * delta;
      const Eigen::Vector3d b = fiber.transpose() * col_tan[j];
      // alpha'(t) - k(t) <delta, o alpha''''> f_3 in fiber coordinates
      const Eigen::Vector3d c(1.0, 0.0, -kt * delta.dot(o_d4));
      const double na = a.norm();
      sum += det3(a, b, c) / (na * na * na);
    }
    circle += kappa2;
  }
  return sum * g.hu * g.hu / kFourPi + circle * g.hu / kTwoPi;
}

}  // namespace curvelink
