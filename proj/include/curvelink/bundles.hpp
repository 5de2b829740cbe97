#pragma once

#include <Eigen/Dense>
#include <array>
#include <functional>
#include <optional>
#include <vector>

#include "curvelink/frames.hpp"
#include "curvelink/trig_curve.hpp"

namespace curvelink {

enum class BundleKind { Osculating, Orthogonal, ConstantFrame, CustomFrame };

const char* bundle_kind_name(BundleKind kind);

/// Rank-3 oriented subbundle of the trivial bundle over a closed curve,
/// presented through an oriented orthonormal frame t -> (b_1, b_2, b_3).
///
/// Kinds:
///  - Osculating: fiber spanned by alpha', alpha'', alpha''' (Gram-Schmidt
///    order fixes the orientation).
///  - Orthogonal: fiber spanned by the last three Frenet vectors
///    f_{n-2}, f_{n-1}, f_n.
///  - ConstantFrame: three fixed orthonormal vectors.
///  - CustomFrame: three trig-polynomial generator curves, orthonormalized.
class Bundle {
 public:
  static Bundle osculating(const TrigCurve& curve);
  static Bundle orthogonal(const TrigCurve& curve);
  static Bundle constant(const Eigen::MatrixXd& frame);
  static Bundle custom(const std::array<TrigCurve, 3>& generators);

  BundleKind kind() const { return kind_; }
  int dim() const { return dim_; }
  bool has_base_curve() const { return curve_.has_value(); }
  const TrigCurve& base_curve() const;

  /// Oriented orthonormal frame of the fiber at t, as an n x 3 matrix.
  /// Evaluating at a Dual parameter yields the exact frame derivative; every
  /// bundle kind admits exact derivatives, so no finite differencing is
  /// involved anywhere in the frame field.
  template <class S>
  MatX<S> frame(S t) const {
    switch (kind_) {
      case BundleKind::ConstantFrame: {
        MatX<S> f(dim_, 3);
        for (int i = 0; i < dim_; ++i)
          for (int c = 0; c < 3; ++c) f(i, c) = S(constant_frame_(i, c));
        return f;
      }
      case BundleKind::CustomFrame: {
        MatX<S> gen(dim_, 3);
        for (int c = 0; c < 3; ++c) gen.col(c) = generators_[c].eval<S>(t);
        return gram_schmidt<S>(gen).basis;
      }
      case BundleKind::Osculating: {
        MatX<S> derivs(dim_, 3);
        for (int m = 1; m <= 3; ++m) derivs.col(m - 1) = curve_->eval<S>(t, m);
        return gram_schmidt<S>(derivs).basis;
      }
      case BundleKind::Orthogonal: {
        // Fiber orientation: (f_{n-2}, f_{n-1}, sigma f_n) with
        // sigma = (-1)^(n-1), so that the fiber frame followed by the Frenet
        // flag f_1..f_{n-3} of the orthogonal complement is positively
        // oriented. This is the orientation under which the published
        // orthogonal self-linking values hold; for n = 3 it is the
        // canonical one.
        const MatX<S> full = frenet_frame_matrix<S>(*curve_, t);
        MatX<S> out = full.rightCols(3);
        if (dim_ % 2 == 0) out.col(2) = -out.col(2);
        return out;
      }
    }
    throw Error("unreachable bundle kind");
  }

  struct FrameJet {
    Eigen::MatrixXd value;       // n x 3
    Eigen::MatrixXd derivative;  // n x 3
  };
  FrameJet frame_jet(double t) const;

  /// Orthogonal projection P(t) onto the fiber; P = F F^T.
  Eigen::MatrixXd projection(double t) const;

  struct ProjectionJet {
    Eigen::MatrixXd value;
    Eigen::MatrixXd derivative;
  };
  ProjectionJet projection_jet(double t) const;

  /// The derivative-rule correction operator A_t = P P' (I - P), computed
  /// with the exact P'. Maps everything into the fiber and kills the fiber.
  Eigen::MatrixXd a_operator(double t) const;

  /// Same operator with P' by central finite differences (cross-check path).
  Eigen::MatrixXd a_operator_fd(double t, double h = 1e-4) const;

 private:
  Bundle() = default;

  BundleKind kind_ = BundleKind::ConstantFrame;
  int dim_ = 0;
  std::optional<TrigCurve> curve_;
  Eigen::MatrixXd constant_frame_;
  std::vector<TrigCurve> generators_;
};

/// Covariant derivative (Dh)(t) = P(t) h'(t) of a section, h' by central
/// differences with the given step.
Eigen::VectorXd covariant_derivative(
    const Bundle& bundle, const std::function<Eigen::VectorXd(double)>& section,
    double t, double h = 1e-5);

struct TransportResult {
  Eigen::MatrixXd frame;    // transported columns at t1, raw (no re-orthonormalization)
  double gram_drift = 0.0;  // max |Gram(t1) - Gram(t0)| over the 3x3 entries
  int steps = 0;
};

/// Parallel transport of a triple spanning the fiber at t0 along the ODE
/// h' = (I - P(t)) P'(t) h, which keeps h in the fiber with Dh = 0.
/// Adaptive Cash-Karp 4(5) integration at the given absolute tolerance.
TransportResult parallel_transport(const Bundle& bundle, double t0, double t1,
                                   const Eigen::MatrixXd& start,
                                   double abs_tol = 1e-10);

/// Margins for the push-off regularity conditions: condition 1 away from the
/// diagonal, a Taylor-normalized margin inside the diagonal band, and the
/// three clauses of condition 2 at order k. Failures are reported, not
/// thrown; pass is true iff every margin clears its tolerance.
struct RegularityReport {
  int k = 0;
  int grid = 0;
  bool pass = false;

  double condition1_margin = 0.0;  // min off-band |n_t(alpha(s) - alpha(t))|
  double condition1_t = 0.0, condition1_s = 0.0;
  // band check: k! |n_t delta| / (|s-t|^k |n_t alpha^(k)(t)|) -> 1 on the diagonal
  double band_margin = 0.0;
  double band_t = 0.0, band_s = 0.0;
  double condition2a_margin = 0.0;  // min normalized Gram-Schmidt residual
  double condition2a_t = 0.0;
  double condition2b_max = 0.0;  // max normalized fiber part of low derivatives
  double condition2b_t = 0.0;
  double condition2c_margin = 0.0;  // min normalized area of (n a^(k), n a^(k+1))
  double condition2c_t = 0.0;

  double tol_condition1 = 1e-6;
  double tol_band = 1e-3;
  double tol_2a = 1e-9;
  double tol_2b = 1e-8;
  double tol_2c = 1e-6;
};

RegularityReport check_sl_conditions(const TrigCurve& curve,
                                     const Bundle& bundle, int k,
                                     int grid = 512);

/// Smallest k in [1, n-2] whose condition-2 clauses pass on the grid.
int detect_k(const TrigCurve& curve, const Bundle& bundle, int grid = 256);

}  // namespace curvelink
