#pragma once

#include <boost/multiprecision/gmp.hpp>
#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <string>

namespace ham {

// Exact arbitrary-precision rational, the default coefficient ring.
using Rat = boost::multiprecision::mpq_rational;
using Int = boost::multiprecision::mpz_int;

// High-precision float (MPFR); precision is process-global and set once
// at startup via set_precision_bits.
using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<0>,
                                           boost::multiprecision::et_off>;

void set_precision_bits(unsigned bits);
unsigned precision_bits();

inline Real to_real(const Rat& q) { return Real(q); }

// Parses "p/q" or "p" (also accepts plain decimal strings like "1.5",
// which are converted exactly).
Rat rat_from_string(const std::string& s);
std::string rat_to_string(const Rat& q);

// Exact conversion: every finite double is a dyadic rational.
Rat rat_from_double(double x);

// Deterministic scientific formatting used by all CSV/JSON emitters.
std::string real_to_string(const Real& x, unsigned digits = 15);

inline Rat rat_pow(Rat base, unsigned e) {
  Rat acc = 1;
  while (e) {
    if (e & 1u) acc *= base;
    e >>= 1u;
    if (e) base *= base;
  }
  return acc;
}

// Machine-readable but lossy; fine for bindings and plots.
inline double to_double(const Real& x) { return x.convert_to<double>(); }
inline double to_double(const Rat& q) { return q.convert_to<double>(); }

}  // namespace ham
