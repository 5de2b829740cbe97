#include "curvelink/trig_curve.hpp"

#include <algorithm>
#include <cmath>

namespace curvelink {

void TrigCoord::add_cos(int k, double a) {
  if (k < 1) throw SchemaError("harmonic index must be >= 1");
  if (a == 0.0) return;
  auto it = std::lower_bound(
      harmonics.begin(), harmonics.end(), k,
      [](const Harmonic& h, int key) { return h.k < key; });
  if (it != harmonics.end() && it->k == k) {
    it->a += a;
  } else {
    harmonics.insert(it, Harmonic{k, a, 0.0});
  }
}

void TrigCoord::add_sin(int k, double b) {
  if (k < 1) throw SchemaError("harmonic index must be >= 1");
  if (b == 0.0) return;
  auto it = std::lower_bound(
      harmonics.begin(), harmonics.end(), k,
      [](const Harmonic& h, int key) { return h.k < key; });
  if (it != harmonics.end() && it->k == k) {
    it->b += b;
  } else {
    harmonics.insert(it, Harmonic{k, 0.0, b});
  }
}

TrigCoord TrigCoord::derivative() const {
  TrigCoord out;
  out.c0 = 0.0;
  for (const Harmonic& h : harmonics) {
    out.add_cos(h.k, h.b * h.k);
    out.add_sin(h.k, -h.a * h.k);
  }
  return out;
}

TrigCurve::TrigCurve(int dim) {
  if (dim < 3) throw SchemaError("curve dimension must be >= 3");
  coords_.resize(dim);
}

TrigCurve TrigCurve::derivative_curve(int order) const {
  TrigCurve out = *this;
  for (int m = 0; m < order; ++m) {
    for (int i = 0; i < dim(); ++i) out.coords_[i] = out.coords_[i].derivative();
  }
  if (order > 0) {
    for (int i = 0; i < dim(); ++i) out.coords_[i].c0 = 0.0;
  }
  return out;
}

TrigCurve TrigCurve::plus_scaled(double factor, const TrigCurve& other) const {
  if (other.dim() != dim())
    throw SchemaError("dimension mismatch in curve combination");
  TrigCurve out = *this;
  for (int i = 0; i < dim(); ++i) {
    out.coords_[i].c0 += factor * other.coords_[i].c0;
    for (const TrigCoord::Harmonic& h : other.coords_[i].harmonics) {
      out.coords_[i].add_cos(h.k, factor * h.a);
      out.coords_[i].add_sin(h.k, factor * h.b);
    }
  }
  return out;
}

TrigCurve TrigCurve::reversed() const {
  // t -> -t keeps cos terms and flips sin terms.
  TrigCurve out = *this;
  for (int i = 0; i < dim(); ++i) {
    for (TrigCoord::Harmonic& h : out.coords_[i].harmonics) h.b = -h.b;
  }
  return out;
}

Jet eval_jet(const TrigCurve& curve, double t, int order) {
  if (order < 0) throw SchemaError("jet order must be >= 0");
  Jet jet;
  jet.t = t;
  jet.values.reserve(order + 1);
  for (int m = 0; m <= order; ++m) jet.values.push_back(curve.eval<double>(t, m));
  return jet;
}

TrigCurve from_preset(const std::string& name, double A) {
  const double cA = std::cos(A), sA = std::sin(A);
  if (name == "example1") {
    // ( cos(A+t) + sin^2 t, cos(A+2t), cos t, A sin(3t)/27 )
    TrigCurve c(4);
    c.coord(0).c0 = 0.5;  // sin^2 t = 1/2 - cos(2t)/2
    c.coord(0).add_cos(1, cA);
    c.coord(0).add_sin(1, -sA);
    c.coord(0).add_cos(2, -0.5);
    c.coord(1).add_cos(2, cA);
    c.coord(1).add_sin(2, -sA);
    c.coord(2).add_cos(1, 1.0);
    c.coord(3).add_sin(3, A / 27.0);
    return c;
  }
  if (name == "example2") {
    // ( -cos(A+t) + A sin(2t)/8, -A^3 cos(2t)/8 + sin(A+t),
    //   sin(5t)/125, A^2 sin(3t)/27 )
    TrigCurve c(4);
    c.coord(0).add_cos(1, -cA);
    c.coord(0).add_sin(1, sA);
    c.coord(0).add_sin(2, A / 8.0);
    c.coord(1).add_cos(2, -A * A * A / 8.0);
    c.coord(1).add_sin(1, cA);
    c.coord(1).add_cos(1, sA);
    c.coord(2).add_sin(5, 1.0 / 125.0);
    c.coord(3).add_sin(3, A * A / 27.0);
    return c;
  }
  throw SchemaError("unknown preset '" + name + "'");
}

const std::vector<PresetReference>& preset_references() {
  static const std::vector<PresetReference> table = {
      {"example1", 1.0, 1, 1, 4, 2, {-1, 1, 1, 1}},
      {"example1", 1.3, 1, 0, 4, 2, {-1, 1, 1, 1}},
      {"example2", 1.6, 3, -1, 6, 6, {1, 1, 1, 1, 1, 1}},
  };
  return table;
}

}  // namespace curvelink
