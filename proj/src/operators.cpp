#include "hamcore/operators.hpp"

#include <sstream>

namespace ham {

LinearOp::LinearOp(std::vector<Root> roots, std::vector<BoundaryCondition> bcs)
    : roots_(std::move(roots)), bcs_(std::move(bcs)) {
  order_ = 0;
  bool has_positive = false;
  for (const auto& r : roots_) {
    if (r.multiplicity == 0) throw std::invalid_argument("root multiplicity must be positive");
    order_ += r.multiplicity;
    if (r.value > 0) has_positive = true;
  }
  if (order_ == 0) throw std::invalid_argument("operator must have positive order");
  if (bcs_.size() != order_)
    throw std::invalid_argument("number of boundary conditions must equal the operator order");
  if (has_positive) {
    bool has_decay = false;
    for (const auto& bc : bcs_)
      if (bc.kind == BoundaryCondition::Kind::DecayAtInfinity) has_decay = true;
    if (!has_decay)
      throw std::invalid_argument(
          "a positive characteristic root requires a decay-at-infinity condition");
  }
  // expand monic characteristic polynomial
  poly_.assign(1, Rat(1));
  for (const auto& r : roots_) {
    for (unsigned m = 0; m < r.multiplicity; ++m) {
      std::vector<Rat> next(poly_.size() + 1, Rat(0));
      for (std::size_t i = 0; i < poly_.size(); ++i) {
        next[i + 1] += poly_[i];
        next[i] -= poly_[i] * r.value;
      }
      poly_ = std::move(next);
    }
  }
}

unsigned LinearOp::multiplicity_of(const Rat& s) const {
  unsigned m = 0;
  for (const auto& r : roots_)
    if (r.value == s) m += r.multiplicity;
  return m;
}

Rat LinearOp::char_taylor(const Rat& s, unsigned k) const {
  Rat sum = 0;
  for (std::size_t i = k; i < poly_.size(); ++i) {
    // binomial(i, k)
    Rat binom = 1;
    for (unsigned j = 0; j < k; ++j) binom = binom * Rat(i - j) / Rat(j + 1);
    sum += poly_[i] * binom * rat_pow(s, static_cast<unsigned>(i - k));
  }
  return sum;
}

std::string LinearOp::str() const {
  std::ostringstream oss;
  bool first = true;
  for (std::size_t k = poly_.size(); k-- > 0;) {
    if (poly_[k] == 0) continue;
    if (!first) oss << " + ";
    first = false;
    if (k == 0 || poly_[k] != 1) oss << rat_to_string(poly_[k]);
    if (k > 0) {
      if (poly_[k] != 1) oss << "*";
      oss << "D^" << k;
    }
  }
  return oss.str();
}

}  // namespace ham
