#pragma once

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "hamcore/errors.hpp"
#include "hamcore/number.hpp"

namespace ham {

template <class C>
struct CoeffOps;

template <>
struct CoeffOps<Rat> {
  static Rat from_rat(const Rat& q) { return q; }
  static bool is_zero(const Rat& c) { return c.is_zero(); }
  static Real to_real(const Rat& c) { return Real(c); }
  static std::string str(const Rat& c) { return rat_to_string(c); }
};

template <>
struct CoeffOps<Real> {
  static Real from_rat(const Rat& q) { return Real(q); }
  static bool is_zero(const Real& c) { return c.is_zero(); }
  static Real to_real(const Real& c) { return c; }
  static std::string str(const Real& c) { return real_to_string(c, 24); }
};

// Finite sum of terms c * t^j * exp(-lambda t) with j >= 0 and lambda >= 0.
// This class is closed under the algebra the deformation recurrences need:
// sums, products, derivatives, and half-line integration.
//
// Terms are kept canonical: sorted lexicographically by (rate, power),
// merged, and free of zero coefficients. Values are immutable after
// construction and safe to share across threads.
template <class C>
class BasicExpPoly {
 public:
  struct Term {
    C coeff;
    unsigned power = 0;
    Rat rate = 0;
  };

  BasicExpPoly() = default;

  explicit BasicExpPoly(std::vector<Term> raw) : terms_(std::move(raw)) { normalize(); }

  static BasicExpPoly term(C coeff, unsigned power, Rat rate) {
    if (rate < 0)
      throw NegativeRate("exp(+" + rat_to_string(-rate) +
                         " t) is not representable (growth not allowed)");
    BasicExpPoly p;
    if (!CoeffOps<C>::is_zero(coeff)) p.terms_.push_back({std::move(coeff), power, std::move(rate)});
    return p;
  }

  static BasicExpPoly constant(C value) { return term(std::move(value), 0, 0); }

  const std::vector<Term>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  bool operator==(const BasicExpPoly& o) const {
    if (terms_.size() != o.terms_.size()) return false;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      if (terms_[i].power != o.terms_[i].power || terms_[i].rate != o.terms_[i].rate ||
          terms_[i].coeff != o.terms_[i].coeff)
        return false;
    }
    return true;
  }
  bool operator!=(const BasicExpPoly& o) const { return !(*this == o); }

  BasicExpPoly operator-() const {
    BasicExpPoly r = *this;
    for (auto& t : r.terms_) t.coeff = -t.coeff;
    return r;
  }

  friend BasicExpPoly operator+(const BasicExpPoly& a, const BasicExpPoly& b) {
    std::vector<Term> merged;
    merged.reserve(a.terms_.size() + b.terms_.size());
    auto ia = a.terms_.begin(), ib = b.terms_.begin();
    while (ia != a.terms_.end() && ib != b.terms_.end()) {
      int c = key_cmp(*ia, *ib);
      if (c < 0)
        merged.push_back(*ia++);
      else if (c > 0)
        merged.push_back(*ib++);
      else {
        Term t = *ia;
        t.coeff += ib->coeff;
        if (!CoeffOps<C>::is_zero(t.coeff)) merged.push_back(std::move(t));
        ++ia;
        ++ib;
      }
    }
    merged.insert(merged.end(), ia, a.terms_.end());
    merged.insert(merged.end(), ib, b.terms_.end());
    BasicExpPoly r;
    r.terms_ = std::move(merged);
    return r;
  }

  friend BasicExpPoly operator-(const BasicExpPoly& a, const BasicExpPoly& b) { return a + (-b); }

  BasicExpPoly& operator+=(const BasicExpPoly& o) { return *this = *this + o; }
  BasicExpPoly& operator-=(const BasicExpPoly& o) { return *this = *this - o; }

  friend BasicExpPoly operator*(const BasicExpPoly& a, const BasicExpPoly& b) {
    BasicExpPoly r;
    mul_add_into(r, a, b, nullptr);
    return r;
  }

  BasicExpPoly scaled(const C& s) const {
    if (CoeffOps<C>::is_zero(s)) return {};
    BasicExpPoly r = *this;
    for (auto& t : r.terms_) t.coeff *= s;
    return r;
  }

  // r += s * (a*b); shared accumulation keeps Cauchy products cheap.
  static void mul_add_into(BasicExpPoly& r, const BasicExpPoly& a, const BasicExpPoly& b,
                           const C* s) {
    if (a.is_zero() || b.is_zero()) return;
    std::map<std::pair<Rat, unsigned>, C> acc;
    for (const auto& t : r.terms_) acc.emplace(std::make_pair(t.rate, t.power), t.coeff);
    for (const auto& ta : a.terms_) {
      const C ca = s ? C(ta.coeff * *s) : ta.coeff;
      for (const auto& tb : b.terms_) {
        std::pair<Rat, unsigned> key(ta.rate + tb.rate, ta.power + tb.power);
        auto it = acc.find(key);
        if (it == acc.end())
          acc.emplace(std::move(key), C(ca * tb.coeff));
        else
          it->second += ca * tb.coeff;
      }
    }
    std::vector<Term> out;
    out.reserve(acc.size());
    for (auto& [k, v] : acc)
      if (!CoeffOps<C>::is_zero(v)) out.push_back({std::move(v), k.second, k.first});
    r.terms_ = std::move(out);
  }

  // Exact derivative of the given order.
  BasicExpPoly diff(unsigned order = 1) const {
    BasicExpPoly cur = *this;
    for (unsigned n = 0; n < order; ++n) {
      std::vector<Term> out;
      out.reserve(2 * cur.terms_.size());
      for (const auto& t : cur.terms_) {
        if (t.power > 0) {
          C c = t.coeff * CoeffOps<C>::from_rat(Rat(t.power));
          out.push_back({std::move(c), t.power - 1, t.rate});
        }
        if (t.rate != 0) {
          C c = t.coeff * CoeffOps<C>::from_rat(-t.rate);
          out.push_back({std::move(c), t.power, t.rate});
        }
      }
      cur = BasicExpPoly(std::move(out));
    }
    return cur;
  }

  // Antiderivative evaluated as int_0^inf; every term needs rate > 0.
  // Termwise: int_0^inf t^j e^{-l t} dt = j! / l^{j+1}.
  C integral_halfline() const {
    C total = CoeffOps<C>::from_rat(0);
    for (const auto& t : terms_) {
      if (t.rate == 0)
        throw DivergentIntegral("term with rate 0 makes the half-line integral divergent");
      Rat fact = 1;
      for (unsigned j = 2; j <= t.power; ++j) fact *= j;
      C val = t.coeff * CoeffOps<C>::from_rat(fact / rat_pow(t.rate, t.power + 1));
      total += val;
    }
    return total;
  }

  // int_0^T of this poly, computed termwise via the incomplete-gamma
  // recurrence  I_j = (j I_{j-1} - T^j e^{-l T}) / l,  I_0 = (1-e^{-l T})/l.
  Real integral_window(const Real& T) const {
    Real total = 0;
    for (const auto& t : terms_) {
      Real l = to_real(t.rate);
      Real val;
      if (t.rate == 0) {
        val = pow(T, t.power + 1) / (t.power + 1);
      } else {
        Real emlT = exp(-l * T);
        Real I = (1 - emlT) / l;
        Real Tj = 1;
        for (unsigned j = 1; j <= t.power; ++j) {
          Tj *= T;
          I = (j * I - Tj * emlT) / l;
        }
        val = I;
      }
      total += CoeffOps<C>::to_real(t.coeff) * val;
    }
    return total;
  }

  Real eval(const Real& t) const {
    Real total = 0;
    std::size_t i = 0;
    while (i < terms_.size()) {
      // terms are grouped by rate; Horner over the polynomial part
      std::size_t j = i;
      while (j < terms_.size() && terms_[j].rate == terms_[i].rate) ++j;
      Real horner = 0;
      unsigned last_power = 0;
      for (std::size_t k = j; k-- > i;) {  // highest power down
        for (unsigned d = terms_[k].power; d < last_power; ++d) horner *= t;
        horner += CoeffOps<C>::to_real(terms_[k].coeff);
        last_power = terms_[k].power;
      }
      for (unsigned d = 0; d < last_power; ++d) horner *= t;
      if (terms_[i].rate != 0) horner *= exp(-to_real(terms_[i].rate) * t);
      total += horner;
      i = j;
    }
    return total;
  }

  // Value at t=0 in coefficient arithmetic (only power-0 terms survive).
  C value_at_zero() const {
    C v = CoeffOps<C>::from_rat(0);
    for (const auto& t : terms_)
      if (t.power == 0) v += t.coeff;
    return v;
  }

  // Polynomial (rate-0) part, as coefficients by power.
  std::vector<std::pair<unsigned, C>> polynomial_part() const {
    std::vector<std::pair<unsigned, C>> out;
    for (const auto& t : terms_)
      if (t.rate == 0) out.emplace_back(t.power, t.coeff);
    return out;
  }

  // Limit at t -> infinity, if it exists in this class: the rate-0 part
  // must be a constant (possibly absent).
  std::optional<C> limit_at_infinity() const {
    C v = CoeffOps<C>::from_rat(0);
    for (const auto& t : terms_) {
      if (t.rate == 0) {
        if (t.power > 0) return std::nullopt;
        v += t.coeff;
      }
    }
    return v;
  }

  // L2 norm over [0, inf) (default) or [0, T]. Squaring is done
  // symbolically in high-precision arithmetic.
  Real l2_norm(const std::optional<Real>& window = std::nullopt) const {
    Real sq = l2_norm_sq(window);
    if (sq < 0) sq = 0;  // guard tiny negative round-off
    return sqrt(sq);
  }

  Real l2_norm_sq(const std::optional<Real>& window = std::nullopt) const {
    BasicExpPoly<Real> mirror = convert_real();
    BasicExpPoly<Real> square = mirror * mirror;
    if (!window) {
      for (const auto& t : square.terms())
        if (t.rate == 0)
          throw DivergentIntegral("L2 norm diverges on the half-line; use a finite window");
      return square.integral_halfline();
    }
    return square.integral_window(*window);
  }

  BasicExpPoly<Real> convert_real() const {
    std::vector<typename BasicExpPoly<Real>::Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) out.push_back({CoeffOps<C>::to_real(t.coeff), t.power, t.rate});
    return BasicExpPoly<Real>(std::move(out));
  }

  // Drops coefficients below rel_eps * max|coeff|; used by the floating
  // coefficient mode to shed cancellation dust.
  BasicExpPoly pruned(const Real& rel_eps) const {
    if (terms_.empty()) return *this;
    Real maxc = 0;
    for (const auto& t : terms_) {
      Real a = abs(CoeffOps<C>::to_real(t.coeff));
      if (a > maxc) maxc = a;
    }
    Real cut = maxc * rel_eps;
    std::vector<Term> out;
    for (const auto& t : terms_)
      if (abs(CoeffOps<C>::to_real(t.coeff)) > cut) out.push_back(t);
    BasicExpPoly r;
    r.terms_ = std::move(out);
    return r;
  }

  std::string str() const {
    if (terms_.empty()) return "0";
    std::string s;
    for (std::size_t i = 0; i < terms_.size(); ++i) {
      const auto& t = terms_[i];
      if (i) s += " + ";
      s += CoeffOps<C>::str(t.coeff);
      if (t.power > 0) s += "*t^" + std::to_string(t.power);
      if (t.rate != 0) s += "*exp(-" + rat_to_string(t.rate) + "*t)";
    }
    return s;
  }

  // Substitutes t -> a*t (a > 0): rates scale by a, powers pick up a^j.
  BasicExpPoly substitute_scaled(const Rat& a) const {
    if (a <= 0) throw std::invalid_argument("scale must be positive");
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (const auto& t : terms_) {
      C c = t.coeff * CoeffOps<C>::from_rat(rat_pow(a, t.power));
      out.push_back({std::move(c), t.power, t.rate * a});
    }
    return BasicExpPoly(std::move(out));
  }

 private:
  static int key_cmp(const Term& a, const Term& b) {
    if (a.rate < b.rate) return -1;
    if (b.rate < a.rate) return 1;
    if (a.power < b.power) return -1;
    if (a.power > b.power) return 1;
    return 0;
  }

  void normalize() {
    std::sort(terms_.begin(), terms_.end(),
              [](const Term& a, const Term& b) { return key_cmp(a, b) < 0; });
    std::vector<Term> out;
    out.reserve(terms_.size());
    for (auto& t : terms_) {
      if (t.rate < 0)
        throw NegativeRate("exp(+" + rat_to_string(-t.rate) + " t) is not representable");
      if (!out.empty() && out.back().power == t.power && out.back().rate == t.rate)
        out.back().coeff += t.coeff;
      else
        out.push_back(std::move(t));
    }
    out.erase(std::remove_if(out.begin(), out.end(),
                             [](const Term& t) { return CoeffOps<C>::is_zero(t.coeff); }),
              out.end());
    terms_ = std::move(out);
  }

  std::vector<Term> terms_;
};

using ExpPoly = BasicExpPoly<Rat>;
using RExpPoly = BasicExpPoly<Real>;

inline RExpPoly to_real_poly(const ExpPoly& p) { return p.convert_real(); }

template <class C>
BasicExpPoly<C> convert_from_exact(const ExpPoly& p) {
  std::vector<typename BasicExpPoly<C>::Term> out;
  out.reserve(p.terms().size());
  for (const auto& t : p.terms()) out.push_back({CoeffOps<C>::from_rat(t.coeff), t.power, t.rate});
  return BasicExpPoly<C>(std::move(out));
}

// JSON wire format: array of {"coeff": "p/q", "power": int, "rate": "p/q"}.
nlohmann::json expoly_to_json(const ExpPoly& p);
ExpPoly expoly_from_json(const nlohmann::json& j);

// Repeated-evaluation helper: one exp() per point, integer powers for the
// individual rates. Rates must share a common denominator (they do here).
class ExpPolyEvaluator {
 public:
  template <class C>
  explicit ExpPolyEvaluator(const BasicExpPoly<C>& p) {
    Int den_lcm = 1;
    for (const auto& t : p.terms()) den_lcm = lcm(den_lcm, Int(denominator(t.rate)));
    den_ = den_lcm;
    for (const auto& t : p.terms()) {
      Int k = Int(numerator(t.rate)) * (den_lcm / Int(denominator(t.rate)));
      terms_.push_back({CoeffOps<C>::to_real(t.coeff), t.power, k.convert_to<unsigned long>()});
    }
  }

  Real operator()(const Real& t) const {
    if (terms_.empty()) return Real(0);
    Real base = exp(-t / Real(den_));
    Real total = 0;
    unsigned long cur_k = 0;
    Real cur_e = 1;
    // terms arrive sorted by rate, so exponent bumps are incremental
    for (const auto& tm : terms_) {
      if (tm.exp_num != cur_k) {
        if (tm.exp_num > cur_k && tm.exp_num - cur_k <= 8) {
          for (unsigned long i = cur_k; i < tm.exp_num; ++i) cur_e *= base;
        } else {
          cur_e = pow(base, tm.exp_num);
        }
        cur_k = tm.exp_num;
      }
      Real v = tm.coeff;
      for (unsigned d = 0; d < tm.power; ++d) v *= t;
      total += v * cur_e;
    }
    return total;
  }

 private:
  struct T {
    Real coeff;
    unsigned power;
    unsigned long exp_num;
  };
  std::vector<T> terms_;
  Int den_ = 1;
};

}  // namespace ham
