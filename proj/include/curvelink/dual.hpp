#pragma once

#include <Eigen/Core>
#include <cmath>

namespace curvelink {

/// First-order dual number a + b*eps with eps^2 = 0. Evaluating a smooth
/// scalar expression at Dual::variable(t) yields the expression's value and
/// its exact t-derivative, so frame fields built from curve jets get
/// machine-precision derivatives without finite differencing.
struct Dual {
  double v = 0.0;  // value
  double d = 0.0;  // derivative w.r.t. the seeded variable

  Dual() = default;
  Dual(double value) : v(value) {}  // NOLINT: constants lift implicitly
  Dual(double value, double deriv) : v(value), d(deriv) {}

  static Dual variable(double value) { return {value, 1.0}; }

  Dual operator-() const { return {-v, -d}; }
  Dual& operator+=(const Dual& o) {
    v += o.v;
    d += o.d;
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    v -= o.v;
    d -= o.d;
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    d = d * o.v + v * o.d;
    v *= o.v;
    return *this;
  }
  Dual& operator/=(const Dual& o) {
    d = (d * o.v - v * o.d) / (o.v * o.v);
    v /= o.v;
    return *this;
  }
};

inline Dual operator+(Dual a, const Dual& b) { return a += b; }
inline Dual operator-(Dual a, const Dual& b) { return a -= b; }
inline Dual operator*(Dual a, const Dual& b) { return a *= b; }
inline Dual operator/(Dual a, const Dual& b) { return a /= b; }

inline bool operator<(const Dual& a, const Dual& b) { return a.v < b.v; }
inline bool operator>(const Dual& a, const Dual& b) { return a.v > b.v; }
inline bool operator<=(const Dual& a, const Dual& b) { return a.v <= b.v; }
inline bool operator>=(const Dual& a, const Dual& b) { return a.v >= b.v; }
inline bool operator==(const Dual& a, const Dual& b) { return a.v == b.v; }
inline bool operator!=(const Dual& a, const Dual& b) { return a.v != b.v; }

inline Dual sin(const Dual& x) { return {std::sin(x.v), std::cos(x.v) * x.d}; }
inline Dual cos(const Dual& x) { return {std::cos(x.v), -std::sin(x.v) * x.d}; }
inline Dual sqrt(const Dual& x) {
  const double r = std::sqrt(x.v);
  return {r, x.d / (2.0 * r)};
}
inline Dual abs(const Dual& x) { return x.v < 0.0 ? -x : x; }
inline Dual abs2(const Dual& x) { return x * x; }
inline const Dual& conj(const Dual& x) { return x; }
inline const Dual& real(const Dual& x) { return x; }
inline Dual imag(const Dual&) { return {}; }

/// Uniform accessors so templated code can test tolerances on the value part.
inline double value_of(double x) { return x; }
inline double value_of(const Dual& x) { return x.v; }

}  // namespace curvelink

namespace Eigen {

template <>
struct NumTraits<curvelink::Dual> : NumTraits<double> {
  using Real = curvelink::Dual;
  using NonInteger = curvelink::Dual;
  using Nested = curvelink::Dual;
  using Literal = double;
  enum {
    IsComplex = 0,
    IsInteger = 0,
    IsSigned = 1,
    RequireInitialization = 1,
    ReadCost = 2,
    AddCost = 2,
    MulCost = 4,
  };
  static inline Real epsilon() { return {NumTraits<double>::epsilon()}; }
  static inline Real dummy_precision() {
    return {NumTraits<double>::dummy_precision()};
  }
  static inline Real highest() { return {NumTraits<double>::highest()}; }
  static inline Real lowest() { return {NumTraits<double>::lowest()}; }
};

}  // namespace Eigen
