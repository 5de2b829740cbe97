#include "curvelink/root_finding.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "curvelink/errors.hpp"

namespace curvelink {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_angle(double x) {
  double y = std::fmod(x, kTwoPi);
  if (y < 0.0) y += kTwoPi;
  return y;
}

double angle_dist(double a, double b) {
  const double d = std::abs(wrap_angle(a) - wrap_angle(b));
  return std::min(d, kTwoPi - d);
}

double torus_dist(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  double d = std::hypot(angle_dist(a[0], b[0]), angle_dist(a[1], b[1]));
  for (int i = 2; i < a.size(); ++i) d = std::max(d, std::abs(a[i] - b[i]));
  return d;
}

Eigen::MatrixXd fd_jacobian(const TorusSystem& F, const Eigen::VectorXd& u,
                            double h) {
  const int m = static_cast<int>(u.size());
  Eigen::MatrixXd J(m, m);
  Eigen::VectorXd up = u, um = u;
  for (int k = 0; k < m; ++k) {
    up[k] = u[k] + h;
    um[k] = u[k] - h;
    J.col(k) = (F(up) - F(um)) / (2.0 * h);
    up[k] = u[k];
    um[k] = u[k];
  }
  return J;
}

struct PolishOutcome {
  std::optional<RootRecord> root;
  int iters = 0;
  double last_residual = 0.0;
};

PolishOutcome newton_polish(const TorusSystem& F, Eigen::VectorXd u,
                            const RootOptions& opt) {
  PolishOutcome out;
  Eigen::VectorXd f = F(u);
  int stalls = 0;
  for (int it = 0; it < opt.max_iters; ++it) {
    out.iters = it;
    out.last_residual = f.cwiseAbs().maxCoeff();
    if (out.last_residual < opt.newton_tol) {
      RootRecord rec;
      u[0] = wrap_angle(u[0]);
      u[1] = wrap_angle(u[1]);
      rec.u = u;
      rec.residual = out.last_residual;
      rec.jacobian_det = fd_jacobian(F, u, opt.fd_step).determinant();
      rec.newton_iters = it;
      out.root = rec;
      return out;
    }
    const Eigen::MatrixXd J = fd_jacobian(F, u, opt.fd_step);
    const Eigen::VectorXd step = J.fullPivLu().solve(-f);
    if (!step.allFinite()) break;
    double lambda = 1.0;
    bool accepted = false;
    const double f0 = f.norm();
    while (lambda >= 1.0 / 64.0) {
      const Eigen::VectorXd trial = u + lambda * step;
      const Eigen::VectorXd ftrial = F(trial);
      if (ftrial.allFinite() && ftrial.norm() < (1.0 - 1e-4 * lambda) * f0) {
        u = trial;
        f = ftrial;
        accepted = true;
        break;
      }
      lambda *= 0.5;
    }
    if (!accepted && ++stalls >= 3) break;
  }
  out.last_residual = f.cwiseAbs().maxCoeff();
  return out;
}

std::vector<RootRecord> scan_and_polish(const TorusSystem& F, int m,
                                        const SeedLift& lift,
                                        const RootOptions& opt, int seeds,
                                        std::vector<NewtonFailure>* failures) {
  const double h = kTwoPi / seeds;
  auto lifted = [&](double t, double s) -> Eigen::VectorXd {
    if (lift) return lift(t, s);
    Eigen::VectorXd u(2);
    u << t, s;
    return u;
  };

  // Grid values: residual norms everywhere, component signs for m = 2.
  Eigen::MatrixXd norms(seeds, seeds);
  std::vector<Eigen::MatrixXd> comps;
  if (m == 2) comps.assign(2, Eigen::MatrixXd(seeds, seeds));
  for (int i = 0; i < seeds; ++i) {
    for (int j = 0; j < seeds; ++j) {
      const Eigen::VectorXd fv = F(lifted(i * h, j * h));
      norms(i, j) = fv.cwiseAbs().maxCoeff();
      if (m == 2) {
        comps[0](i, j) = fv[0];
        comps[1](i, j) = fv[1];
      }
    }
  }

  auto at = [&](const Eigen::MatrixXd& a, int i, int j) {
    return a((i % seeds + seeds) % seeds, (j % seeds + seeds) % seeds);
  };

  std::vector<std::pair<double, double>> seed_points;
  for (int i = 0; i < seeds; ++i) {
    for (int j = 0; j < seeds; ++j) {
      bool flagged = false;
      if (m == 2) {
        bool all_change = true;
        for (int c = 0; c < 2 && all_change; ++c) {
          const double v00 = at(comps[c], i, j), v10 = at(comps[c], i + 1, j);
          const double v01 = at(comps[c], i, j + 1),
                       v11 = at(comps[c], i + 1, j + 1);
          const double lo = std::min(std::min(v00, v10), std::min(v01, v11));
          const double hi = std::max(std::max(v00, v10), std::max(v01, v11));
          all_change = lo < 0.0 && hi > 0.0;
        }
        if (all_change) {
          seed_points.emplace_back((i + 0.5) * h, (j + 0.5) * h);
          flagged = true;
        }
      }
      if (!flagged) {
        bool local_min = true;
        for (int di = -1; di <= 1 && local_min; ++di)
          for (int dj = -1; dj <= 1 && local_min; ++dj)
            if (di != 0 || dj != 0)
              local_min = norms(i, j) <= at(norms, i + di, j + dj);
        if (local_min) seed_points.emplace_back(i * h, j * h);
      }
    }
  }

  std::vector<RootRecord> roots;
  for (const auto& [t, s] : seed_points) {
    PolishOutcome outcome = newton_polish(F, lifted(t, s), opt);
    if (!outcome.root) {
      if (failures)
        failures->push_back({t, s, outcome.iters, outcome.last_residual});
      continue;
    }
    RootRecord rec = *outcome.root;
    if (opt.discard_diagonal &&
        angle_dist(rec.u[0], rec.u[1]) < opt.diagonal_tol)
      continue;
    bool duplicate = false;
    for (RootRecord& kept : roots) {
      if (torus_dist(kept.u, rec.u) < opt.dedup_tol) {
        duplicate = true;
        if (rec.residual < kept.residual) kept = rec;
        break;
      }
    }
    if (!duplicate) roots.push_back(std::move(rec));
  }

  for (const RootRecord& r : roots) {
    if (std::abs(r.jacobian_det) < opt.transversality_floor)
      throw TransversalityError(
          "root at (t, s) = (" + std::to_string(r.t()) + ", " +
          std::to_string(r.s()) + ") has |det J| = " +
          std::to_string(std::abs(r.jacobian_det)) +
          " below the transversality floor");
  }

  std::sort(roots.begin(), roots.end(),
            [](const RootRecord& a, const RootRecord& b) {
              return a.u[0] != b.u[0] ? a.u[0] < b.u[0] : a.u[1] < b.u[1];
            });
  return roots;
}

}  // namespace

RootSearch find_torus_roots(const TorusSystem& system, int m,
                            const SeedLift& lift, const RootOptions& opt) {
  if (m != 2 && m != 3)
    throw SchemaError("find_torus_roots supports systems of size 2 or 3");
  if (m == 3 && !lift)
    throw SchemaError("a seed lift is required for 3-unknown systems");
  RootSearch out;
  out.seeds_tried = opt.seeds;
  out.roots = scan_and_polish(system, m, lift, opt, opt.seeds, &out.failures);
  if (opt.check_stability) {
    const std::vector<RootRecord> fine =
        scan_and_polish(system, m, lift, opt, opt.seeds * 2, nullptr);
    bool same = fine.size() == out.roots.size();
    if (same) {
      for (std::size_t i = 0; i < fine.size(); ++i)
        same = same && torus_dist(fine[i].u, out.roots[i].u) < 1e-6;
    }
    if (!same)
      throw RootInstabilityError(
          "root set changed between seed resolutions " +
          std::to_string(opt.seeds) + " (" + std::to_string(out.roots.size()) +
          " roots) and " + std::to_string(opt.seeds * 2) + " (" +
          std::to_string(fine.size()) + " roots)");
  }
  return out;
}

}  // namespace curvelink
