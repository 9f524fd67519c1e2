#include "hamcore/number.hpp"

#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace ham {

namespace {
unsigned g_bits = 256;
}

void set_precision_bits(unsigned bits) {
  if (bits < 53) bits = 53;
  g_bits = bits;
  // boost tracks precision in decimal digits; round up.
  Real::default_precision(static_cast<unsigned>(bits * 0.30103) + 2);
}

unsigned precision_bits() { return g_bits; }

Rat rat_from_string(const std::string& s) {
  if (s.find_first_of(".eE") != std::string::npos && s.find('/') == std::string::npos) {
    // decimal literal: parse mantissa/exponent exactly
    double probe = std::strtod(s.c_str(), nullptr);
    // Decimal strings with few digits are handled exactly below; the
    // strtod probe only validates syntax.
    (void)probe;
    std::string t = s;
    bool neg = false;
    if (!t.empty() && (t[0] == '+' || t[0] == '-')) {
      neg = t[0] == '-';
      t.erase(0, 1);
    }
    long exp10 = 0;
    auto epos = t.find_first_of("eE");
    if (epos != std::string::npos) {
      exp10 = std::strtol(t.c_str() + epos + 1, nullptr, 10);
      t.erase(epos);
    }
    auto dot = t.find('.');
    if (dot != std::string::npos) {
      exp10 -= static_cast<long>(t.size() - dot - 1);
      t.erase(dot, 1);
    }
    if (t.empty() || t.find_first_not_of("0123456789") != std::string::npos)
      throw std::invalid_argument("bad rational literal: " + s);
    t.erase(0, std::min(t.find_first_not_of('0'), t.size() - 1));  // no octal surprises
    Int mant(t);
    Rat r(mant);
    if (exp10 > 0)
      r *= Rat(pow(Int(10), static_cast<unsigned>(exp10)));
    else if (exp10 < 0)
      r /= Rat(pow(Int(10), static_cast<unsigned>(-exp10)));
    return neg ? -r : r;
  }
  return Rat(s);
}

std::string rat_to_string(const Rat& q) {
  std::ostringstream oss;
  oss << q;
  return oss.str();
}

Rat rat_from_double(double x) {
  if (!std::isfinite(x)) throw std::invalid_argument("non-finite value");
  Rat r(x);  // gmp conversion from double is exact
  return r;
}

std::string real_to_string(const Real& x, unsigned digits) {
  return x.str(digits, std::ios_base::scientific);
}

}  // namespace ham
