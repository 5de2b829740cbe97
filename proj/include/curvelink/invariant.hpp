#pragma once

#include <cmath>
#include <string>

#include "json.hpp"

#include "curvelink/errors.hpp"

namespace curvelink {

enum class Method { integral, intersection, limit, gauss_r3 };

const char* method_name(Method m);

/// An invariant value with its integer-rounding contract: raw real value,
/// rounded integer, residual |raw - value|, the method that produced it, and
/// free-form diagnostics (grids, margins, root tables).
struct InvariantResult {
  double raw = 0.0;
  int value = 0;
  double residual = 0.0;
  Method method = Method::integral;
  nlohmann::json diagnostics;
};

inline constexpr double kResidualTolerance = 0.05;

/// Rounds raw to the nearest integer; refuses (ResidualError) when the
/// residual reaches the tolerance, reporting the raw value instead.
InvariantResult make_invariant(double raw, Method method,
                               nlohmann::json diagnostics = {},
                               double residual_tol = kResidualTolerance);

}  // namespace curvelink
