#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hamcore/deform.hpp"
#include "hamcore/diagnostics.hpp"
#include "hamcore/problems.hpp"

namespace ham {

// Integration domain for the squared equation residual.
struct ResidualDomain {
  enum class Kind { ProblemDefault, HalfLine, Window } kind = Kind::ProblemDefault;
  Rat window = 0;

  static ResidualDomain problem_default() { return {}; }
  static ResidualDomain half_line() { return {Kind::HalfLine, 0}; }
  static ResidualDomain upto(Rat T) { return {Kind::Window, std::move(T)}; }
};

// Res = int [N(S_M)]^2 over the domain (times the squared spatial cell
// factor for the separable PDE problems). Exact termwise integration on
// the half-line; closed-form high-precision evaluation on windows.
template <class C>
Real residual_for_series(const HomotopySeries<C>& s, unsigned M,
                         ResidualDomain domain = ResidualDomain::problem_default()) {
  const auto& pb = *s.problem;
  BasicExpPoly<C> S = partial_sum(s, M);
  BasicExpPoly<C> NS = pb.apply_nonlinear(S);
  std::optional<Rat> window;
  switch (domain.kind) {
    case ResidualDomain::Kind::ProblemDefault:
      window = pb.residual_window();
      break;
    case ResidualDomain::Kind::HalfLine:
      break;
    case ResidualDomain::Kind::Window:
      window = domain.window;
      break;
  }
  RExpPoly nsr = NS.convert_real();
  RExpPoly sq = nsr * nsr;
  Real temporal;
  if (!window) {
    for (const auto& t : sq.terms())
      if (t.rate == 0)
        throw DivergentIntegral(
            "squared residual diverges on the half-line; configure a window");
    temporal = sq.integral_halfline();
  } else {
    temporal = sq.integral_window(to_real(*window));
  }
  if (temporal < 0) temporal = 0;  // round-off guard
  return spatial_cell_l2sq(pb.spatial()) * temporal;
}

// Convenience: build the series at rational h and evaluate Res.
Real residual(const ReducedProblem& problem, const Rat& h, unsigned M,
              ResidualDomain domain = ResidualDomain::problem_default());
Real residual(ProblemPtr problem, const Rat& h, unsigned M,
              ResidualDomain domain = ResidualDomain::problem_default());

struct HOptimum {
  double h = 0;
  Real res = 0;
  Real stationarity = 0;  // |dRes/dh| central-difference estimate
};

// Coarse grid scan (41 points per decade of range) followed by
// golden-section refinement; raises BoundaryOptimum when the minimum
// sits on the range edge.
HOptimum optimal_h(ProblemPtr problem, unsigned M, double h_lo, double h_hi,
                   double tol = 1e-6, ResidualDomain domain = ResidualDomain::problem_default());

// Physical quantity S_M^{(order)}(0) per h; flat plateaus locate the
// convergent band of the control parameter.
std::vector<std::pair<double, Real>> h_curve(ProblemPtr problem, unsigned deriv_order,
                                             const std::vector<double>& h_grid, unsigned M);

// Theorem-style verdict per h over a grid.
std::vector<std::pair<double, Verdict>> h_interval_scan(ProblemPtr problem,
                                                        const std::vector<double>& h_grid,
                                                        unsigned M, unsigned burn_in = 5);

std::string residual_scan_csv(ProblemPtr problem, const std::vector<double>& h_grid, unsigned M,
                              unsigned burn_in = 5,
                              ResidualDomain domain = ResidualDomain::problem_default());

}  // namespace ham
