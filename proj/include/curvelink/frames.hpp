#pragma once

#include <Eigen/Dense>

#include "curvelink/dual.hpp"
#include "curvelink/errors.hpp"
#include "curvelink/trig_curve.hpp"

namespace curvelink {

/// Cofactor-expansion determinant. Works for any scalar supporting ring ops;
/// intended for the small (n <= 8) matrices of this library.
template <class S>
S det_small(const MatX<S>& m) {
  const int n = static_cast<int>(m.rows());
  if (n == 1) return m(0, 0);
  if (n == 2) return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
  if (n == 3)
    return m(0, 0) * (m(1, 1) * m(2, 2) - m(1, 2) * m(2, 1)) -
           m(0, 1) * (m(1, 0) * m(2, 2) - m(1, 2) * m(2, 0)) +
           m(0, 2) * (m(1, 0) * m(2, 1) - m(1, 1) * m(2, 0));
  S acc(0.0);
  MatX<S> sub(n - 1, n - 1);
  double sign = 1.0;
  for (int i = 0; i < n; ++i) {
    int r = 0;
    for (int row = 0; row < n; ++row) {
      if (row == i) continue;
      for (int col = 1; col < n; ++col) sub(r, col - 1) = m(row, col);
      ++r;
    }
    acc += S(sign) * m(i, 0) * det_small<S>(sub);
    sign = -sign;
  }
  return acc;
}

inline constexpr double kRankTolerance = 1e-9;

template <class S>
struct GramSchmidt {
  MatX<S> basis;      // n x m, orthonormal columns
  VecX<S> residuals;  // m, norms of the orthogonal remainders (R diagonal)
};

/// Classical Gram-Schmidt with re-projection. The i-th output has positive
/// inner product with the part of the i-th input orthogonal to the previous
/// outputs. Throws RankDeficiencyError when a residual norm drops below tol.
template <class S>
GramSchmidt<S> gram_schmidt(const MatX<S>& vectors,
                            double tol = kRankTolerance) {
  const int n = static_cast<int>(vectors.rows());
  const int m = static_cast<int>(vectors.cols());
  if (m > n) throw Error("gram_schmidt: more vectors than the dimension");
  GramSchmidt<S> out;
  out.basis.resize(n, m);
  out.residuals.resize(m);
  for (int i = 0; i < m; ++i) {
    VecX<S> v = vectors.col(i);
    for (int pass = 0; pass < 2; ++pass) {  // second pass for orthogonality
      for (int j = 0; j < i; ++j) {
        const S proj = out.basis.col(j).dot(v);
        v -= proj * out.basis.col(j);
      }
    }
    const S r = v.norm();
    if (value_of(r) < tol)
      throw RankDeficiencyError(
          "gram_schmidt: residual " + std::to_string(value_of(r)) +
          " below tolerance at column " + std::to_string(i));
    out.basis.col(i) = v / r;
    out.residuals[i] = r;
  }
  return out;
}

/// Orientation-completing last basis vector: the unique unit vector orthogonal
/// to the n-1 orthonormal inputs with det(inputs, result) = +1, obtained by
/// cofactor expansion (generalized cross product).
template <class S>
VecX<S> complete_orientation(const MatX<S>& partial, double ortho_tol = 1e-8) {
  const int n = static_cast<int>(partial.rows());
  if (partial.cols() != n - 1)
    throw Error("complete_orientation: need exactly n-1 input vectors");
  for (int i = 0; i < n - 1; ++i) {
    for (int j = i; j < n - 1; ++j) {
      const double g = value_of(partial.col(i).dot(partial.col(j)));
      const double target = (i == j) ? 1.0 : 0.0;
      if (std::abs(g - target) > ortho_tol)
        throw Error("complete_orientation: input columns are not orthonormal");
    }
  }
  VecX<S> v(n);
  MatX<S> minor(n - 1, n - 1);
  for (int i = 0; i < n; ++i) {
    int r = 0;
    for (int row = 0; row < n; ++row) {
      if (row == i) continue;
      minor.row(r++) = partial.row(row);
    }
    // component i of x -> det(partial, x), expanded along the last column
    const double sign = ((i + n + 1) % 2 == 0) ? 1.0 : -1.0;
    v[i] = S(sign) * det_small<S>(minor);
  }
  return v;
}

/// Cross product taken inside the oriented 3-dimensional fiber spanned by the
/// orthonormal frame columns: coordinates of u, v in the frame, R^3 cross
/// product, mapped back. Result lies in the fiber and depends only on the
/// fiber and its orientation.
template <class S>
VecX<S> fiber_cross(const MatX<S>& frame, const VecX<S>& u, const VecX<S>& v) {
  const Eigen::Matrix<S, 3, 1> a = frame.transpose() * u;
  const Eigen::Matrix<S, 3, 1> b = frame.transpose() * v;
  Eigen::Matrix<S, 3, 1> c;
  c[0] = a[1] * b[2] - a[2] * b[1];
  c[1] = a[2] * b[0] - a[0] * b[2];
  c[2] = a[0] * b[1] - a[1] * b[0];
  return frame * c;
}

/// Ordered orthonormal triple spanning an oriented 3-plane in R^n.
struct Frame3 {
  Eigen::MatrixXd basis;  // n x 3

  int dim() const { return static_cast<int>(basis.rows()); }
  bool is_orthonormal(double tol = 1e-10) const;
};

/// Frenet frame f_1..f_n and curvatures kappa_1..kappa_{n-1} at one parameter
/// value. Curvatures follow the arc-length Frenet equations
///   f_i' = |alpha'| (-kappa_{i-1} f_{i-1} + kappa_i f_{i+1}),
/// so kappa_i is the classical arc-length curvature for any parameterization.
struct FrenetApparatus {
  Eigen::MatrixXd frame;       // n x n, columns f_1..f_n, det = +1
  Eigen::VectorXd curvatures;  // n-1; entries 0..n-3 positive, last signed
  double speed = 0.0;          // |alpha'(t)|
};

/// Frenet frame columns with generic scalar (dual evaluation gives the exact
/// frame derivative). residuals, when requested, receives the n-1
/// Gram-Schmidt remainders of the derivative columns.
template <class S>
MatX<S> frenet_frame_matrix(const TrigCurve& curve, S t,
                            VecX<S>* residuals = nullptr) {
  const int n = curve.dim();
  MatX<S> derivs(n, n - 1);
  for (int m = 1; m <= n - 1; ++m) derivs.col(m - 1) = curve.eval<S>(t, m);
  GramSchmidt<S> gs = gram_schmidt<S>(derivs);
  MatX<S> frame(n, n);
  frame.leftCols(n - 1) = gs.basis;
  frame.col(n - 1) = complete_orientation<S>(gs.basis);
  if (residuals) *residuals = gs.residuals;
  return frame;
}

FrenetApparatus frenet(const TrigCurve& curve, double t);

}  // namespace curvelink
