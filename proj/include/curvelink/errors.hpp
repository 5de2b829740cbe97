#pragma once

#include <stdexcept>
#include <string>

namespace curvelink {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Malformed curve/frame specification (JSON schema violations, unknown
/// presets, out-of-range settings).
class SchemaError : public Error {
 public:
  using Error::Error;
};

/// A Gram-Schmidt residual fell below the rank tolerance: the input vectors
/// are (numerically) linearly dependent at the offending parameter.
class RankDeficiencyError : public Error {
 public:
  RankDeficiencyError(const std::string& msg, double t = 0.0)
      : Error(msg), t_(t) {}
  double parameter() const { return t_; }

 private:
  double t_;
};

/// A geometric regularity condition failed; carries the offending (t, s).
class RegularityError : public Error {
 public:
  RegularityError(const std::string& msg, double t, double s)
      : Error(msg + " at (t, s) = (" + std::to_string(t) + ", " +
              std::to_string(s) + ")"),
        t_(t),
        s_(s) {}
  double t() const { return t_; }
  double s() const { return s_; }

 private:
  double t_, s_;
};

/// An intersection-counting formula met a root whose Jacobian determinant is
/// below the transversality floor; indices would be meaningless.
class TransversalityError : public Error {
 public:
  using Error::Error;
};

/// A real invariant value refused integer rounding (|raw - round(raw)| too
/// large). Carries the raw value.
class ResidualError : public Error {
 public:
  ResidualError(const std::string& msg, double raw)
      : Error(msg + " (raw = " + std::to_string(raw) + ")"), raw_(raw) {}
  double raw() const { return raw_; }

 private:
  double raw_;
};

/// The two push-off scales of a self-linking limit rounded to different
/// integers.
class UnstableLimitError : public Error {
 public:
  UnstableLimitError(const std::string& msg, double raw_a, double raw_b)
      : Error(msg + " (raws " + std::to_string(raw_a) + ", " +
              std::to_string(raw_b) + ")"),
        raw_a_(raw_a),
        raw_b_(raw_b) {}
  double raw_a() const { return raw_a_; }
  double raw_b() const { return raw_b_; }

 private:
  double raw_a_, raw_b_;
};

/// Adaptive ODE step size shrank below the hard floor.
class StepSizeUnderflowError : public Error {
 public:
  using Error::Error;
};

/// Root sets disagreed between the base and the doubled seed resolution.
class RootInstabilityError : public Error {
 public:
  using Error::Error;
};

/// A quadrature node produced a non-finite sample; carries the node.
class IntegrandError : public Error {
 public:
  IntegrandError(const std::string& msg, double t, double s)
      : Error(msg + " at (t, s) = (" + std::to_string(t) + ", " +
              std::to_string(s) + ")"),
        t_(t),
        s_(s) {}
  double t() const { return t_; }
  double s() const { return s_; }

 private:
  double t_, s_;
};

}  // namespace curvelink
