#pragma once

#include <string>
#include <utility>
#include <vector>

#include "hamcore/errors.hpp"
#include "hamcore/expfun.hpp"
#include "hamcore/number.hpp"

namespace ham {

struct BoundaryCondition {
  enum class Kind { ValueAtZero, DecayAtInfinity, DerivativeVanishesAtInfinity };
  Kind kind = Kind::ValueAtZero;
  unsigned order = 0;  // derivative order (ValueAtZero / DerivativeVanishesAtInfinity)

  static BoundaryCondition value_at_zero(unsigned k) {
    return {Kind::ValueAtZero, k};
  }
  static BoundaryCondition decay_at_infinity() {
    return {Kind::DecayAtInfinity, 0};
  }
  static BoundaryCondition derivative_vanishes_at_infinity(unsigned k) {
    return {Kind::DerivativeVanishesAtInfinity, k};
  }
};

// Constant-coefficient linear differential operator, given by the real
// rational roots of its characteristic polynomial, together with the
// homogeneous boundary conditions used when inverting it.
//
// Roots <= 0 span the usable kernel basis t^j e^{r t}. A positive root is
// allowed only when a decay-at-infinity condition is present: that branch
// grows and is discarded a priori, so the solver never leaves the
// nonnegative-rate function class.
class LinearOp {
 public:
  struct Root {
    Rat value;
    unsigned multiplicity = 1;
  };

  LinearOp(std::vector<Root> roots, std::vector<BoundaryCondition> bcs);

  unsigned order() const { return order_; }
  const std::vector<Root>& roots() const { return roots_; }
  const std::vector<BoundaryCondition>& bcs() const { return bcs_; }
  const std::vector<Rat>& char_poly() const { return poly_; }  // low to high, monic

  template <class C>
  BasicExpPoly<C> apply(const BasicExpPoly<C>& u) const {
    BasicExpPoly<C> out;
    for (unsigned k = 0; k < poly_.size(); ++k) {
      if (poly_[k] == 0) continue;
      out += u.diff(k).scaled(CoeffOps<C>::from_rat(poly_[k]));
    }
    return out;
  }

  // Unique u with L(u) = f meeting every boundary condition. Particular
  // part by undetermined coefficients with resonance lift t^m; kernel
  // coefficients fixed by the boundary conditions. The result is checked
  // by re-applying L before being returned.
  template <class C>
  BasicExpPoly<C> solve(const BasicExpPoly<C>& f) const;

  std::string str() const;

 private:
  // multiplicity of s as characteristic root (0 if not a root)
  unsigned multiplicity_of(const Rat& s) const;

  // Taylor coefficient p^(k)(s)/k! of the characteristic polynomial.
  Rat char_taylor(const Rat& s, unsigned k) const;

  std::vector<Root> roots_;
  std::vector<BoundaryCondition> bcs_;
  std::vector<Rat> poly_;
  unsigned order_ = 0;
};

namespace detail {

// Dense linear solve with pivoting; A is row-major n x (m+1) augmented.
// Returns false when inconsistent; throws on underdetermined systems.
template <class C>
bool gaussian_solve(std::vector<std::vector<C>>& rows, unsigned unknowns, std::vector<C>& out,
                    std::size_t* bad_row = nullptr);

}  // namespace detail

template <class C>
BasicExpPoly<C> LinearOp::solve(const BasicExpPoly<C>& f) const {
  using Poly = BasicExpPoly<C>;
  using Term = typename Poly::Term;

  // Group forcing terms by rate (terms are sorted, so groups are runs).
  Poly particular;
  const auto& ft = f.terms();
  std::size_t i = 0;
  while (i < ft.size()) {
    std::size_t j = i;
    while (j < ft.size() && ft[j].rate == ft[i].rate) ++j;
    const Rat rate = ft[i].rate;
    const Rat s = -rate;
    const unsigned m = multiplicity_of(s);
    unsigned d = 0;
    for (std::size_t k = i; k < j; ++k) d = std::max(d, ft[k].power);
    std::vector<C> target(d + 1, CoeffOps<C>::from_rat(0));
    for (std::size_t k = i; k < j; ++k) target[ft[k].power] = ft[k].coeff;

    // Ansatz q(t) = sum_i c_i t^{m+i}; matching t^j gives an upper
    // triangular system with diagonal p_m (m+j)!/j! != 0.
    std::vector<Rat> ptay(order_ + 1);
    for (unsigned k = 0; k <= order_; ++k) ptay[k] = char_taylor(s, k);
    std::vector<C> c(d + 1, CoeffOps<C>::from_rat(0));
    for (int jj = static_cast<int>(d); jj >= 0; --jj) {
      C acc = target[jj];
      for (unsigned ii = jj + 1; ii <= d; ++ii) {
        unsigned k = m + ii - jj;
        if (k > order_) continue;
        if (ptay[k] == 0) continue;
        // falling factorial (m+ii)! / jj!
        Rat fall = 1;
        for (unsigned q = jj + 1; q <= m + ii; ++q) fall *= q;
        acc -= c[ii] * CoeffOps<C>::from_rat(ptay[k] * fall);
      }
      Rat fall = 1;
      for (unsigned q = jj + 1; q <= static_cast<unsigned>(m + jj); ++q) fall *= q;
      Rat diag = ptay[m] * fall;
      c[jj] = acc / CoeffOps<C>::from_rat(diag);
    }
    std::vector<Term> pterms;
    for (unsigned ii = 0; ii <= d; ++ii) {
      if (CoeffOps<C>::is_zero(c[ii])) continue;
      pterms.push_back({c[ii], m + ii, rate});
    }
    particular += Poly(std::move(pterms));
    i = j;
  }

  // Kernel basis from nonpositive roots.
  struct Basis {
    Rat rate;  // -root
    unsigned power;
  };
  std::vector<Basis> basis;
  for (const auto& r : roots_) {
    if (r.value > 0) continue;
    for (unsigned jj = 0; jj < r.multiplicity; ++jj) basis.push_back({-r.value, jj});
  }
  std::vector<Poly> basis_fn;
  for (const auto& b : basis)
    basis_fn.push_back(Poly::term(CoeffOps<C>::from_rat(1), b.power, b.rate));

  // Boundary-condition rows (augmented with the right-hand side).
  std::vector<std::vector<C>> rows;
  std::vector<bool> row_from_infinity;
  std::vector<bool> row_unbounded;  // infinity row involving t^j, j >= 1
  auto add_row = [&](std::vector<C> row, bool inf_row, bool unb) {
    rows.push_back(std::move(row));
    row_from_infinity.push_back(inf_row);
    row_unbounded.push_back(unb);
  };

  for (const auto& bc : bcs_) {
    if (bc.kind == BoundaryCondition::Kind::ValueAtZero) {
      std::vector<C> row;
      row.reserve(basis.size() + 1);
      for (const auto& fn : basis_fn) row.push_back(fn.diff(bc.order).value_at_zero());
      row.push_back(-particular.diff(bc.order).value_at_zero());
      add_row(std::move(row), false, false);
    } else {
      // infinity conditions constrain the rate-0 polynomial part
      unsigned min_power = bc.kind == BoundaryCondition::Kind::DecayAtInfinity ? 0 : bc.order;
      unsigned max_power = 0;
      for (const auto& b : basis)
        if (b.rate == 0) max_power = std::max(max_power, b.power);
      for (const auto& t : particular.terms())
        if (t.rate == 0) max_power = std::max(max_power, t.power);
      for (unsigned p = min_power; p <= max_power; ++p) {
        std::vector<C> row(basis.size() + 1, CoeffOps<C>::from_rat(0));
        bool any = false;
        for (std::size_t b = 0; b < basis.size(); ++b) {
          if (basis[b].rate == 0 && basis[b].power == p) {
            row[b] = CoeffOps<C>::from_rat(1);
            any = true;
          }
        }
        C rhs = CoeffOps<C>::from_rat(0);
        for (const auto& t : particular.terms())
          if (t.rate == 0 && t.power == p) {
            rhs -= t.coeff;
            any = true;
          }
        row.back() = rhs;
        if (any) add_row(std::move(row), true, p >= 1);
      }
    }
  }

  std::vector<C> alpha;
  std::size_t bad = 0;
  if (!detail::gaussian_solve(rows, static_cast<unsigned>(basis.size()), alpha, &bad)) {
    if (bad < row_from_infinity.size() && row_from_infinity[bad] && row_unbounded[bad])
      throw UnboundedResult("solution would grow at infinity under operator " + str());
    throw NoDecayingSolution("boundary conditions cannot be satisfied for operator " + str());
  }

  Poly result = particular;
  for (std::size_t b = 0; b < basis.size(); ++b)
    result += basis_fn[b].scaled(alpha[b]);

  // Validate by re-applying L.
  Poly back = apply(result) - f;
  if constexpr (std::is_same_v<C, Rat>) {
    if (!back.is_zero()) throw Error("internal solver check failed for " + str());
  } else {
    Real scale = 0;
    for (const auto& t : f.terms()) scale = std::max(scale, abs(CoeffOps<C>::to_real(t.coeff)));
    for (const auto& t : back.terms())
      if (abs(CoeffOps<C>::to_real(t.coeff)) >
          scale * pow(Real(2), -static_cast<int>(precision_bits()) + 48))
        throw Error("internal solver check failed for " + str());
  }
  return result;
}

namespace detail {

template <class C>
bool gaussian_solve(std::vector<std::vector<C>>& rows, unsigned unknowns, std::vector<C>& out,
                    std::size_t* bad_row) {
  const std::size_t n = rows.size();
  std::vector<std::size_t> origin(n);
  for (std::size_t i = 0; i < n; ++i) origin[i] = i;
  std::size_t rank = 0;
  for (unsigned col = 0; col < unknowns && rank < n; ++col) {
    std::size_t pivot = n;
    if constexpr (std::is_same_v<C, Rat>) {
      for (std::size_t r = rank; r < n; ++r)
        if (rows[r][col] != 0) {
          pivot = r;
          break;
        }
    } else {
      Real best = 0;
      for (std::size_t r = rank; r < n; ++r) {
        Real a = abs(CoeffOps<C>::to_real(rows[r][col]));
        if (a > best) {
          best = a;
          pivot = r;
        }
      }
    }
    if (pivot == n) continue;
    std::swap(rows[rank], rows[pivot]);
    std::swap(origin[rank], origin[pivot]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == rank || CoeffOps<C>::is_zero(rows[r][col])) continue;
      C factor = rows[r][col] / rows[rank][col];
      for (std::size_t cc = col; cc < rows[r].size(); ++cc)
        rows[r][cc] -= factor * rows[rank][cc];
    }
    ++rank;
  }
  // consistency: zero rows must have zero rhs
  for (std::size_t r = 0; r < n; ++r) {
    bool all_zero = true;
    for (unsigned c = 0; c < unknowns; ++c)
      if (!CoeffOps<C>::is_zero(rows[r][c])) {
        all_zero = false;
        break;
      }
    bool rhs_zero;
    if constexpr (std::is_same_v<C, Rat>) {
      rhs_zero = CoeffOps<C>::is_zero(rows[r].back());
    } else {
      rhs_zero = abs(CoeffOps<C>::to_real(rows[r].back())) <
                 pow(Real(2), -static_cast<int>(precision_bits()) + 48);
    }
    if (all_zero && !rhs_zero) {
      if (bad_row) *bad_row = origin[r];
      return false;
    }
  }
  // extract solution; every pivot column determines one unknown
  out.assign(unknowns, CoeffOps<C>::from_rat(0));
  std::size_t row = 0;
  for (unsigned col = 0; col < unknowns; ++col) {
    if (row < n && !CoeffOps<C>::is_zero(rows[row][col])) {
      C v = rows[row].back() / rows[row][col];
      out[col] = std::move(v);
      ++row;
    } else {
      // column never pivoted: unknown unconstrained
      bool has_any = false;
      for (std::size_t r = 0; r < n; ++r)
        if (!CoeffOps<C>::is_zero(rows[r][col])) has_any = true;
      if (has_any) throw Error("underdetermined boundary-condition system");
      out[col] = CoeffOps<C>::from_rat(0);
    }
  }
  return true;
}

}  // namespace detail

}  // namespace ham
