#pragma once

#include <Eigen/Core>
#include <string>
#include <vector>

#include "curvelink/dual.hpp"
#include "curvelink/errors.hpp"

namespace curvelink {

template <class S>
using VecX = Eigen::Matrix<S, Eigen::Dynamic, 1>;
template <class S>
using MatX = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;

/// One coordinate of a closed curve: a trigonometric polynomial
///   x(t) = c0 + sum_k (a_k cos(k t) + b_k sin(k t)),   period 2*pi.
/// Harmonics are stored sparsely; derivatives of any order are exact.
struct TrigCoord {
  struct Harmonic {
    int k = 1;
    double a = 0.0;  // cos coefficient
    double b = 0.0;  // sin coefficient
  };

  double c0 = 0.0;
  std::vector<Harmonic> harmonics;  // sorted by k, unique

  void add_cos(int k, double a);
  void add_sin(int k, double b);

  template <class S>
  S eval(S t, int order = 0) const {
    using std::cos;
    using std::sin;
    S acc = order == 0 ? S(c0) : S(0.0);
    for (const Harmonic& h : harmonics) {
      double f = 1.0;
      for (int i = 0; i < order; ++i) f *= h.k;
      double a = h.a, b = h.b;
      switch (order % 4) {  // each derivative rotates (cos,sin) a quarter turn
        case 0: break;
        case 1: {
          double na = b, nb = -a;
          a = na;
          b = nb;
          break;
        }
        case 2: a = -a; b = -b; break;
        case 3: {
          double na = -b, nb = a;
          a = na;
          b = nb;
          break;
        }
      }
      const S kt = S(static_cast<double>(h.k)) * t;
      acc += S(a * f) * cos(kt) + S(b * f) * sin(kt);
    }
    return acc;
  }

  TrigCoord derivative() const;
};

/// Exact derivatives of a curve at a parameter value:
/// values[j] = alpha^(j)(t) for j = 0..order.
struct Jet {
  double t = 0.0;
  std::vector<Eigen::VectorXd> values;
  int order() const { return static_cast<int>(values.size()) - 1; }
};

/// Closed curve in R^n, n >= 3, with trig-polynomial coordinates. Immutable
/// after construction aside from coefficient setup; all evaluation is const.
class TrigCurve {
 public:
  explicit TrigCurve(int dim);

  int dim() const { return static_cast<int>(coords_.size()); }
  TrigCoord& coord(int i) { return coords_.at(i); }
  const TrigCoord& coord(int i) const { return coords_.at(i); }

  template <class S>
  VecX<S> eval(S t, int order = 0) const {
    VecX<S> out(dim());
    for (int i = 0; i < dim(); ++i) out[i] = coords_[i].eval(t, order);
    return out;
  }

  Eigen::VectorXd point(double t) const { return eval<double>(t, 0); }
  Eigen::VectorXd derivative(double t, int order) const {
    return eval<double>(t, order);
  }

  /// Term-wise derivative as a curve of the same class.
  TrigCurve derivative_curve(int order = 1) const;

  /// this + factor * other, coefficient-wise (exact push-offs, homotopies).
  TrigCurve plus_scaled(double factor, const TrigCurve& other) const;

  /// Curve with reversed traversal direction, t -> -t.
  TrigCurve reversed() const;

 private:
  std::vector<TrigCoord> coords_;
};

Jet eval_jet(const TrigCurve& curve, double t, int order);

/// The two built-in example families (curves in R^4 parameterized by the
/// shape parameter A).
TrigCurve from_preset(const std::string& name, double A);

/// Published invariant values for the built-in presets, used by the
/// paper-table command and the acceptance suite.
struct PresetReference {
  std::string preset;
  double A = 0.0;
  int sl_osculating = 0;       // SL w.r.t. the osculating bundle
  int sl_orthogonal = 0;       // SL w.r.t. the orthogonal bundle
  int chi_perp_roots = 0;      // intersections with the orthogonal developable
  int chi_top_roots = 0;       // intersections with the osculating developable
  std::vector<int> chi_perp_indices;  // intersection indices (sorted)
};
const std::vector<PresetReference>& preset_references();

}  // namespace curvelink
