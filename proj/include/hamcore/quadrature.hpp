#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "hamcore/number.hpp"

namespace ham {

using RealFn = std::function<Real(const Real&)>;

// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton
// iteration at the current working precision and cached.
const std::vector<std::pair<Real, Real>>& gauss_legendre(unsigned n);

struct QuadOptions {
  Real abs_tol = Real("1e-30");
  Real rel_tol = Real("1e-30");
  unsigned points = 24;     // nodes per panel
  unsigned max_depth = 32;  // panel bisection depth
};

// Adaptive panel-bisection integral of a smooth integrand on [a, b].
Real integrate(const RealFn& f, const Real& a, const Real& b, const QuadOptions& opts = {});

// Integral over [a, inf) of a decaying integrand: panels of doubling
// width until two consecutive panels fall below the tolerance.
Real integrate_to_infinity(const RealFn& f, const Real& a, const QuadOptions& opts = {});

// Roots of f in (a, b): dense sampling plus bisection of each bracket.
std::vector<Real> find_sign_changes(const RealFn& f, const Real& a, const Real& b,
                                    unsigned samples = 128);

// Integral of |f| on [a, b]: splits the domain at isolated sign changes
// so each piece is smooth.
Real integrate_abs(const RealFn& f, const Real& a, const Real& b, const QuadOptions& opts = {},
                   unsigned samples = 128);

}  // namespace ham
