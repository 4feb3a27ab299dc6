// SPDX-License-Identifier: Apache-2.0
//
// dmnkit: synthesis and analysis of decoupling and matching networks
// for compact uniform circular antenna arrays.

#pragma once

#include <stdexcept>
#include <string>

namespace dmnkit {

/// Base class for all dmnkit errors.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A representation conversion requires inverting a matrix whose condition
/// number exceeds the singularity threshold (ideal open/short at this
/// representation).
class SingularConversion : public Error {
 public:
  using Error::Error;
};

/// (Y_AA + Y_load) is numerically singular; the composite network resonates
/// ideally at this frequency.
class SingularTermination : public Error {
 public:
  using Error::Error;
};

class EmptySweep : public Error {
 public:
  using Error::Error;
};

/// An open stub is at (an odd multiple of) quarter-wave resonance and would
/// present an ideal short.
class StubResonance : public Error {
 public:
  using Error::Error;
};

/// The star three-port is evaluated at an excluded angle (sin 2theta = 0).
class StarResonance : public Error {
 public:
  using Error::Error;
};

class GeometryInvalid : public Error {
 public:
  using Error::Error;
};

class QuadratureNotConverged : public Error {
 public:
  using Error::Error;
};

class SingularImpedance : public Error {
 public:
  using Error::Error;
};

class SingularOverlap : public Error {
 public:
  using Error::Error;
};

/// Antenna impedance model and pattern model disagree beyond tolerance; a
/// realized-gain number would be unphysical.
class CmsInconsistent : public Error {
 public:
  using Error::Error;
};

class SingularComposition : public Error {
 public:
  using Error::Error;
};

/// Two-stage feasibility condition a^2 + 2ab - 3b^2 >= 0 violated.
class Infeasible : public Error {
 public:
  Infeasible(const std::string& what, double deficit) : Error(what), deficit_(deficit) {}
  /// Value of a^2 + 2ab - 3b^2 (negative when infeasible).
  double deficit() const { return deficit_; }

 private:
  double deficit_ = 0.0;
};

/// All roots of the star-triangle quartic are complex.
class NoRealRoot : public Error {
 public:
  using Error::Error;
};

/// Every real quartic root makes the augmentation susceptance infinite.
class AllRootsDegenerate : public Error {
 public:
  using Error::Error;
};

/// A solved line impedance falls outside the realizability window.
class UnrealizableImpedance : public Error {
 public:
  using Error::Error;
};

class ResonantAngle : public Error {
 public:
  using Error::Error;
};

/// File-format error; carries a 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line = 0) : Error(what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_ = 0;
};

/// A data row has the wrong number of values for the port count.
class ArityError : public ParseError {
 public:
  using ParseError::ParseError;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace dmnkit
