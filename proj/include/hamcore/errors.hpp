#pragma once

#include <stdexcept>
#include <string>

namespace ham {

// Base class for all domain errors raised by the engine.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// integral_halfline over a term with rate 0 and nonzero coefficient.
struct DivergentIntegral : Error {
  using Error::Error;
};

// An ExpPoly term with negative decay rate was requested; growth
// e^{+lambda t} is not representable in this function class.
struct NegativeRate : Error {
  using Error::Error;
};

// Boundary conditions cannot be met inside the nonnegative-rate class.
struct NoDecayingSolution : Error {
  using Error::Error;
};

// The solution of L(u) = f would grow without bound at infinity.
struct UnboundedResult : Error {
  using Error::Error;
};

// A series term became identically zero before the requested order.
struct DegenerateSeries : Error {
  using Error::Error;
};

// An intermediate term has zero norm while later terms are nonzero.
struct ZeroNormTerm : Error {
  using Error::Error;
};

// The norm required by an error bound diverges on the half-line.
struct InfiniteNorm : Error {
  using Error::Error;
};

// The residual minimizer landed on the edge of the scanned range.
struct BoundaryOptimum : Error {
  using Error::Error;
};

// Pointwise term ratios did not stabilize across orders.
struct NoStableLimit : Error {
  using Error::Error;
};

// Shooting failed to bracket the unknown initial condition.
struct ShootingFailed : Error {
  using Error::Error;
};

struct UnknownProblem : Error {
  using Error::Error;
};

struct NoClosedForm : Error {
  using Error::Error;
};

}  // namespace ham
