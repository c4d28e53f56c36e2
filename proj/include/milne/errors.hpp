#pragma once

#include <stdexcept>
#include <string>

namespace milne {

/// Base class for all errors raised by this library.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Two sampled objects live on different grids.
class GridMismatch : public Error {
public:
  explicit GridMismatch(const std::string& what) : Error(what) {}
};

/// Grid has too few points for the requested stencil.
class GridTooSmall : public Error {
public:
  explicit GridTooSmall(const std::string& what) : Error(what) {}
};

/// Grid cannot resolve the phase: the argument advances by ~pi or more
/// between adjacent samples, so unwrapping is ambiguous.
class GridTooCoarse : public Error {
public:
  explicit GridTooCoarse(const std::string& what) : Error(what) {}
};

/// Adaptive integration drove the step below the machine-feasible size;
/// signals stiffness or a singularity on the integration path.
class StepSizeUnderflow : public Error {
public:
  explicit StepSizeUnderflow(const std::string& what) : Error(what) {}
};

/// NaN or Inf appeared in an integration state.
class NonFiniteState : public Error {
public:
  explicit NonFiniteState(const std::string& what) : Error(what) {}
};

/// Milne amplitude reached zero (or the 1/u^3 term overflowed).
class AmplitudeCollapse : public Error {
public:
  explicit AmplitudeCollapse(const std::string& what) : Error(what) {}
};

/// Two solutions are (numerically) proportional: Wronskian below threshold.
class DegeneratePair : public Error {
public:
  explicit DegeneratePair(const std::string& what) : Error(what) {}
};

/// A wavefunction passes through (or too close to) zero, so no smooth
/// polar form with positive amplitude exists.
class NodeEncountered : public Error {
public:
  explicit NodeEncountered(const std::string& what) : Error(what) {}
};

/// Invalid run configuration or operation arguments.
class InvalidConfig : public Error {
public:
  explicit InvalidConfig(const std::string& what) : Error(what) {}
};

/// File output failed.
class IoError : public Error {
public:
  explicit IoError(const std::string& what) : Error(what) {}
};

} // namespace milne
