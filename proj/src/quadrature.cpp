#include "hamcore/quadrature.hpp"

#include <boost/math/constants/constants.hpp>

#include <cmath>
#include <map>
#include <mutex>

namespace ham {

namespace {

std::pair<Real, Real> legendre_and_derivative(unsigned n, const Real& x) {
  Real p0 = 1, p1 = x;
  for (unsigned k = 2; k <= n; ++k) {
    Real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  // P_n'(x) = n (x P_n - P_{n-1}) / (x^2 - 1)
  Real dp = n * (x * p1 - p0) / (x * x - 1);
  return {p1, dp};
}

}  // namespace

const std::vector<std::pair<Real, Real>>& gauss_legendre(unsigned n) {
  static std::mutex mu;
  static std::map<std::pair<unsigned, unsigned>, std::vector<std::pair<Real, Real>>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(n, precision_bits());
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;

  std::vector<std::pair<Real, Real>> nw(n);
  const Real pi = boost::math::constants::pi<Real>();
  Real tol = pow(Real(2), -static_cast<int>(precision_bits()) + 8);
  for (unsigned i = 0; i < n; ++i) {
    Real x = cos(pi * (i + Real("0.75")) / (n + Real("0.5")));
    for (int iter = 0; iter < 200; ++iter) {
      auto [p, dp] = legendre_and_derivative(n, x);
      Real dx = p / dp;
      x -= dx;
      if (abs(dx) < tol) break;
    }
    auto [p, dp] = legendre_and_derivative(n, x);
    (void)p;
    Real w = 2 / ((1 - x * x) * dp * dp);
    nw[i] = {x, w};
  }
  auto [pos, ok] = cache.emplace(key, std::move(nw));
  (void)ok;
  return pos->second;
}

namespace {

Real gl_panel(const RealFn& f, const Real& a, const Real& b, unsigned n) {
  const auto& nw = gauss_legendre(n);
  Real half = (b - a) / 2, mid = (a + b) / 2;
  Real sum = 0;
  for (const auto& [x, w] : nw) sum += w * f(mid + half * x);
  return sum * half;
}

Real integrate_rec(const RealFn& f, const Real& a, const Real& b, const Real& whole,
                   const QuadOptions& opts, const Real& abs_tol, unsigned depth) {
  Real mid = (a + b) / 2;
  Real left = gl_panel(f, a, mid, opts.points);
  Real right = gl_panel(f, mid, b, opts.points);
  Real diff = abs(left + right - whole);
  if (depth >= opts.max_depth || diff <= abs_tol ||
      diff <= opts.rel_tol * abs(left + right))
    return left + right;
  return integrate_rec(f, a, mid, left, opts, abs_tol / 2, depth + 1) +
         integrate_rec(f, mid, b, right, opts, abs_tol / 2, depth + 1);
}

}  // namespace

Real integrate(const RealFn& f, const Real& a, const Real& b, const QuadOptions& opts) {
  if (a == b) return Real(0);
  Real whole = gl_panel(f, a, b, opts.points);
  return integrate_rec(f, a, b, whole, opts, opts.abs_tol, 0);
}

Real integrate_to_infinity(const RealFn& f, const Real& a, const QuadOptions& opts) {
  Real total = 0;
  Real lo = a, width = 1;
  unsigned quiet = 0;
  for (unsigned panel = 0; panel < 80; ++panel) {
    QuadOptions local = opts;
    local.abs_tol = opts.abs_tol / 4;
    Real part = integrate(f, lo, lo + width, local);
    total += part;
    if (abs(part) < opts.abs_tol / 4)
      ++quiet;
    else
      quiet = 0;
    if (quiet >= 2) break;
    lo += width;
    width *= 2;
  }
  return total;
}

std::vector<Real> find_sign_changes(const RealFn& f, const Real& a, const Real& b,
                                    unsigned samples) {
  std::vector<Real> roots;
  Real step = (b - a) / samples;
  Real x0 = a;
  Real f0 = f(x0);
  for (unsigned i = 1; i <= samples; ++i) {
    Real x1 = a + step * i;
    Real f1 = f(x1);
    if ((f0 < 0 && f1 > 0) || (f0 > 0 && f1 < 0)) {
      Real lo = x0, hi = x1, flo = f0;
      for (int iter = 0; iter < 120; ++iter) {
        Real mid = (lo + hi) / 2;
        Real fm = f(mid);
        if (fm == 0) {
          lo = hi = mid;
          break;
        }
        if ((flo < 0) == (fm < 0)) {
          lo = mid;
          flo = fm;
        } else {
          hi = mid;
        }
      }
      roots.push_back((lo + hi) / 2);
    }
    x0 = x1;
    f0 = f1;
  }
  return roots;
}

Real integrate_abs(const RealFn& f, const Real& a, const Real& b, const QuadOptions& opts,
                   unsigned samples) {
  auto roots = find_sign_changes(f, a, b, samples);
  std::vector<Real> cuts;
  cuts.push_back(a);
  for (const auto& r : roots) cuts.push_back(r);
  cuts.push_back(b);
  Real total = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] <= cuts[i]) continue;
    Real piece = integrate(f, cuts[i], cuts[i + 1], opts);
    total += abs(piece);
  }
  return total;
}

}  // namespace ham
