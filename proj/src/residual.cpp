#include "hamcore/residual.hpp"

#include <cmath>
#include <sstream>

namespace ham {

Real residual(const ReducedProblem& problem, const Rat& h, unsigned M, ResidualDomain domain) {
  auto ptr = std::make_shared<ReducedProblem>(problem);
  return residual(ProblemPtr(std::move(ptr)), h, M, domain);
}

Real residual(ProblemPtr problem, const Rat& h, unsigned M, ResidualDomain domain) {
  auto s = make_series<Rat>(std::move(problem), h);
  extend(s, M);
  return residual_for_series(s, std::min<unsigned>(M, s.order()), domain);
}

namespace {

Real res_at(const ProblemPtr& problem, double h, unsigned M, const ResidualDomain& domain) {
  return residual(problem, rat_from_double(h), M, domain);
}

}  // namespace

HOptimum optimal_h(ProblemPtr problem, unsigned M, double h_lo, double h_hi, double tol,
                   ResidualDomain domain) {
  if (!(h_hi > h_lo)) throw std::invalid_argument("empty h range");
  // 41 grid points per decade of relative range, at least 41 overall
  double decades = (h_lo > 0) ? std::log10(h_hi / h_lo) : 1.0;
  unsigned n = std::max(41u, static_cast<unsigned>(std::ceil(41.0 * std::max(1.0, decades))));
  std::vector<double> grid(n);
  std::vector<Real> res(n);
  for (unsigned i = 0; i < n; ++i) {
    grid[i] = h_lo + (h_hi - h_lo) * i / (n - 1);
    res[i] = res_at(problem, grid[i], M, domain);
  }
  unsigned best = 0;
  for (unsigned i = 1; i < n; ++i)
    if (res[i] < res[best]) best = i;
  if (best == 0 || best == n - 1)
    throw BoundaryOptimum("residual minimum at the edge of the scanned range [" +
                          std::to_string(h_lo) + ", " + std::to_string(h_hi) + "]");
  // golden-section refinement inside the bracketing neighbours
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = grid[best - 1], b = grid[best + 1];
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  Real f1 = res_at(problem, x1, M, domain), f2 = res_at(problem, x2, M, domain);
  while (b - a > tol) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = res_at(problem, x1, M, domain);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = res_at(problem, x2, M, domain);
    }
  }
  HOptimum out;
  out.h = (a + b) / 2;
  out.res = res_at(problem, out.h, M, domain);
  double delta = std::max(tol, 1e-5);
  Real rp = res_at(problem, out.h + delta, M, domain);
  Real rm = res_at(problem, out.h - delta, M, domain);
  out.stationarity = abs((rp - rm) / (2 * Real(delta)));
  return out;
}

std::vector<std::pair<double, Real>> h_curve(ProblemPtr problem, unsigned deriv_order,
                                             const std::vector<double>& h_grid, unsigned M) {
  std::vector<std::pair<double, Real>> out;
  out.reserve(h_grid.size());
  for (double h : h_grid) {
    auto s = make_series<Rat>(problem, rat_from_double(h));
    extend(s, M);
    ExpPoly S = partial_sum(s, std::min<unsigned>(M, s.order()));
    out.emplace_back(h, to_real(S.diff(deriv_order).value_at_zero()));
  }
  return out;
}

std::vector<std::pair<double, Verdict>> h_interval_scan(ProblemPtr problem,
                                                        const std::vector<double>& h_grid,
                                                        unsigned M, unsigned burn_in) {
  std::vector<std::pair<double, Verdict>> out;
  out.reserve(h_grid.size());
  for (double h : h_grid) {
    auto s = make_series<Rat>(problem, rat_from_double(h));
    extend(s, M);
    if (s.terminated_exactly && s.order() < M) {
      out.emplace_back(h, Verdict{VerdictKind::ConvergedExactly, Real(0)});
      continue;
    }
    auto ratios = ratio_sequence(s);
    out.emplace_back(h, make_verdict(ratios, burn_in, s.terminated_exactly));
  }
  return out;
}

std::string residual_scan_csv(ProblemPtr problem, const std::vector<double>& h_grid, unsigned M,
                              unsigned burn_in, ResidualDomain domain) {
  std::ostringstream oss;
  oss << "h,Res,verdict\n";
  for (double h : h_grid) {
    auto s = make_series<Rat>(problem, rat_from_double(h));
    extend(s, M);
    Real res = residual_for_series(s, std::min<unsigned>(M, s.order()), domain);
    Verdict v;
    if (s.terminated_exactly && s.order() < M) {
      v = {VerdictKind::ConvergedExactly, Real(0)};
    } else {
      v = make_verdict(ratio_sequence(s), burn_in, s.terminated_exactly);
    }
    oss << h << "," << real_to_string(res, 10) << "," << v.str() << "\n";
  }
  return oss.str();
}

}  // namespace ham
