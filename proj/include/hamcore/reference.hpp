#pragma once

#include <functional>
#include <string>
#include <vector>

#include "hamcore/number.hpp"

namespace ham {

// Reference solution in the temporal variable of the reduced problem
// (for the separable PDE problems this is the temporal coefficient).
struct ReferenceSolution {
  enum class Kind { ClosedForm, Numeric };
  Kind kind = Kind::ClosedForm;
  std::function<Real(const Real&)> eval;
  std::function<Real(const Real&, unsigned)> eval_derivative;
  Real accuracy = 0;  // certified absolute error (0 = arithmetic precision)
};

// Closed-form value at a full space-time point. Coordinate layout:
// ex1: {t}; ex3: {x, t}; ex4: {x, y, z, t}; ex5: {x, t}.
// Throws NoClosedForm for ids without a paper-given closed form.
Real exact_value(const std::string& id, const std::vector<Real>& point);

// Temporal reference evaluator: closed form where available.
ReferenceSolution exact_reference(const std::string& id);

struct ShootResult {
  ReferenceSolution solution;
  Real matched_ic;  // u'(0) for ex2, u''(0) for ex6
};

// Numeric boundary-value references via shooting: a fixed-step
// high-order Taylor integrator plus bisection/secant on the unknown
// initial condition; step halving certifies the reported accuracy.
ShootResult shoot_reference(const std::string& id, const Real& accuracy);

// Blasius with explicit scaling (ex6 uses lambda = 4).
ShootResult shoot_blasius(const Rat& lambda, const Real& accuracy);

}  // namespace ham
