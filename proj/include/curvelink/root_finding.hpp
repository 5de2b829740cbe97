#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

namespace curvelink {

/// A polished transverse root of a system on the torus (optionally times R).
struct RootRecord {
  Eigen::VectorXd u;           // (t, s) or (t, s, lambda)
  double residual = 0.0;       // max-norm of the system at u
  double jacobian_det = 0.0;   // finite-difference Jacobian determinant
  int newton_iters = 0;

  double t() const { return u[0]; }
  double s() const { return u[1]; }
};

/// A seed whose Newton polish did not converge. Reported, never dropped
/// silently.
struct NewtonFailure {
  double t = 0.0, s = 0.0;
  int iters = 0;
  double residual = 0.0;
};

struct RootSearch {
  std::vector<RootRecord> roots;      // sorted by (t, s)
  std::vector<NewtonFailure> failures;
  int seeds_tried = 0;
};

struct RootOptions {
  int seeds = 128;             // coarse scan resolution per axis
  double newton_tol = 1e-9;    // residual max-norm target
  int max_iters = 50;
  double fd_step = 1e-6;       // Jacobian finite-difference step
  double dedup_tol = 1e-4;     // torus distance identifying duplicate roots
  double diagonal_tol = 1e-3;  // |s-t| (mod 2pi) below this: root discarded
  double transversality_floor = 1e-6;
  bool discard_diagonal = true;
  bool check_stability = true;  // re-scan at doubled seeds, require same roots
};

/// System of m equations in m unknowns, the first two being angles on the
/// torus. For m = 3 a lift supplies the third coordinate's initial guess
/// from a scan point (t, s).
using TorusSystem = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;
using SeedLift = std::function<Eigen::VectorXd(double t, double s)>;

/// Coarse grid scan (sign-change and local-minimum cells) followed by damped
/// Newton with finite-difference Jacobians. Roots are deduplicated, diagonal
/// roots discarded, and every kept root is validated against the residual
/// and transversality floors (TransversalityError below the floor). With
/// check_stability, the scan is repeated at doubled resolution and the two
/// root sets must agree within 1e-6 (RootInstabilityError otherwise).
RootSearch find_torus_roots(const TorusSystem& system, int m,
                            const SeedLift& lift = {},
                            const RootOptions& opt = {});

}  // namespace curvelink
