#pragma once

#include <nlohmann/json_fwd.hpp>

#include <optional>
#include <string>
#include <vector>

#include "hamcore/deform.hpp"
#include "hamcore/quadrature.hpp"
#include "hamcore/reference.hpp"

namespace ham {

enum class VerdictKind { Convergent, Divergent, Inconclusive, ConvergedExactly };

struct Verdict {
  VerdictKind kind = VerdictKind::Inconclusive;
  Real r = 0;  // supremum of the tail ratios (Convergent / Divergent)
  std::string str() const;
};

// Successive-term norm ratios rat_k = ||u_{k+1}|| / ||u_k||, k >= 1.
// Entry i of the result is rat_{i+1}; the value reported "at order M"
// in the tables is rat_M = ||u_{M+1}|| / ||u_M||.
std::vector<Real> ratio_sequence_from_norms(const std::vector<Real>& norms,
                                            bool terminated_exactly);

template <class C>
std::vector<Real> ratio_sequence(const HomotopySeries<C>& s,
                                 const std::optional<Real>& window_override = std::nullopt) {
  return ratio_sequence_from_norms(term_norms(s, window_override), s.terminated_exactly);
}

// Tail test: all tail ratios < 1 => Convergent with r = max tail ratio;
// tail ratios >= 1 and nondecreasing => Divergent; otherwise Inconclusive.
// Finitely many early terms are ignored (burn_in).
Verdict make_verdict(const std::vector<Real>& ratios, unsigned burn_in = 5,
                     bool terminated_exactly = false);

// Upper bound r^{M+1}/(1-r) * ||u0|| for the truncation error at order M.
// The norm window defaults to the problem's, then to the supplied
// override; a divergent ||u0|| without a window raises InfiniteNorm.
template <class C>
Real error_bound(const HomotopySeries<C>& s, unsigned M, const Real& r,
                 const std::optional<Real>& window_override = std::nullopt) {
  if (!(r < 1) || r < 0) throw std::invalid_argument("error bound requires 0 <= r < 1");
  std::optional<Real> window = window_override;
  if (!window && s.problem->norm_window()) window = to_real(*s.problem->norm_window());
  Real n0;
  try {
    n0 = s.terms[0].l2_norm(window);
  } catch (const DivergentIntegral&) {
    throw InfiniteNorm("||u0|| diverges on the half-line; configure a finite norm window");
  }
  return pow(r, M + 1) / (1 - r) * n0;
}

// L1 distance between the truncated series and a reference solution,
// integrated over [0, inf) with adaptive truncation of the tail.
template <class C>
Real reference_error(const HomotopySeries<C>& s, unsigned M, const ReferenceSolution& ref,
                     const Real& abs_tol = Real("1e-32")) {
  BasicExpPoly<C> S = partial_sum(s, M);
  ExpPolyEvaluator se(S);
  auto f = [&](const Real& t) { return ref.eval(t) - se(t); };
  QuadOptions opts;
  opts.abs_tol = abs_tol;
  opts.rel_tol = Real("1e-8");
  // doubling panels; stop once contributions fall well below tolerance
  Real total = 0, lo = 0, width = 1;
  unsigned quiet = 0;
  for (unsigned panel = 0; panel < 64 && quiet < 2; ++panel) {
    Real part = integrate_abs(f, lo, lo + width, opts, 96);
    total += part;
    if (part < abs_tol / 10)
      ++quiet;
    else
      quiet = 0;
    lo += width;
    if (width < 16) width *= 2;
  }
  return total;
}

struct TInterval {
  Real lo = 0, hi = 0;
  bool lo_unbounded = false, hi_unbounded = false;
  std::string str() const;
};

// Closed-form validity regions for the built-ins that admit one.
TInterval validity_region_closed_form(const std::string& id, const Rat& h);

struct RegionOptions {
  Real scan_lo = Real(-2);
  Real scan_hi = Real(24);
  unsigned grid = 260;
  Real stab_rel_tol = Real("0.05");
  unsigned pairs = 4;  // trailing ratio pairs examined for stabilization
};

// Numeric region: the t-interval where the stabilized pointwise ratio
// |u_{k+1}(t)/u_k(t)| stays below 1. Raises NoStableLimit when the
// trailing ratios neither settle nor decay toward zero.
template <class C>
TInterval validity_region(const HomotopySeries<C>& s, const RegionOptions& opts = {});

struct ConvergenceReport {
  std::vector<Real> ratios;  // rat_1 ..
  Verdict verdict;
  std::vector<std::pair<unsigned, Real>> error_bounds;     // (M, bound)
  std::vector<std::pair<unsigned, Real>> reference_errors;  // (M, err)
};

std::string report_to_csv(const ConvergenceReport& r);
nlohmann::json report_to_json(const ConvergenceReport& r);

// --- implementation ---

template <class C>
TInterval validity_region(const HomotopySeries<C>& s, const RegionOptions& opts) {
  const unsigned K = s.order();
  if (K < opts.pairs + 1) throw std::invalid_argument("series order too low for region scan");
  std::vector<ExpPolyEvaluator> evals;
  for (unsigned k = K - opts.pairs; k <= K; ++k) evals.emplace_back(s.terms[k]);

  // stabilized limit ratio at a point, or nullopt
  auto rho_at = [&](const Real& t) -> std::optional<Real> {
    std::vector<Real> r;
    Real prev = evals[0](t);
    for (std::size_t i = 1; i < evals.size(); ++i) {
      Real cur = evals[i](t);
      if (abs(prev) < pow(Real(2), -static_cast<int>(precision_bits()) / 2)) return std::nullopt;
      r.push_back(abs(cur / prev));
      prev = cur;
    }
    Real mx = 0, mn = r[0];
    for (const auto& v : r) {
      if (v > mx) mx = v;
      if (v < mn) mn = v;
    }
    if (mx == 0) return Real(0);
    if ((mx - mn) <= opts.stab_rel_tol * mx) return r.back();
    // ratios shrinking toward zero also pin the limit
    bool decreasing = true;
    for (std::size_t i = 1; i < r.size(); ++i)
      if (r[i] > r[i - 1]) decreasing = false;
    if (decreasing && r.back() < Real("0.2")) return r.back();
    return std::nullopt;
  };

  std::vector<std::optional<Real>> rho(opts.grid + 1);
  unsigned stable = 0;
  for (unsigned i = 0; i <= opts.grid; ++i) {
    Real t = opts.scan_lo + (opts.scan_hi - opts.scan_lo) * i / opts.grid;
    rho[i] = rho_at(t);
    if (rho[i]) ++stable;
  }
  if (stable < (opts.grid + 1) / 2)
    throw NoStableLimit("pointwise term ratios did not stabilize across orders");

  // largest contiguous run with rho < 1
  int best_lo = -1, best_hi = -2, cur_lo = -1;
  for (int i = 0; i <= static_cast<int>(opts.grid); ++i) {
    bool in = rho[i] && *rho[i] < 1;
    if (in && cur_lo < 0) cur_lo = i;
    if ((!in || i == static_cast<int>(opts.grid)) && cur_lo >= 0) {
      int end = in ? i : i - 1;
      if (end - cur_lo > best_hi - best_lo) {
        best_lo = cur_lo;
        best_hi = end;
      }
      cur_lo = -1;
    }
  }
  if (best_lo < 0) throw NoStableLimit("no region with ratio below 1 found in scan range");

  auto grid_t = [&](int i) {
    return opts.scan_lo + (opts.scan_hi - opts.scan_lo) * i / static_cast<int>(opts.grid);
  };

  TInterval out;
  if (best_lo == 0) {
    out.lo = grid_t(0);
    out.lo_unbounded = true;
  } else {
    Real a = grid_t(best_lo - 1), b = grid_t(best_lo);
    // crossing with inside at b
    for (int it = 0; it < 80; ++it) {
      Real mid = (a + b) / 2;
      auto v = rho_at(mid);
      if (v && *v < 1)
        b = mid;
      else
        a = mid;
      if (b - a < Real("1e-12")) break;
    }
    out.lo = (a + b) / 2;
  }
  if (best_hi == static_cast<int>(opts.grid)) {
    out.hi = grid_t(best_hi);
    out.hi_unbounded = true;
  } else {
    Real a = grid_t(best_hi), b = grid_t(best_hi + 1);
    for (int it = 0; it < 80; ++it) {
      Real mid = (a + b) / 2;
      auto v = rho_at(mid);
      if (v && *v < 1)
        a = mid;  // a stays inside
      else
        b = mid;
      if (b - a < Real("1e-12")) break;
    }
    out.hi = (a + b) / 2;
  }
  return out;
}

}  // namespace ham
