#include "hamcore/diagnostics.hpp"

#include <nlohmann/json.hpp>

#include <sstream>

namespace ham {

std::string Verdict::str() const {
  switch (kind) {
    case VerdictKind::Convergent:
      return "convergent(r=" + real_to_string(r, 6) + ")";
    case VerdictKind::Divergent:
      return "divergent(r=" + real_to_string(r, 6) + ")";
    case VerdictKind::Inconclusive:
      return "inconclusive";
    case VerdictKind::ConvergedExactly:
      return "converged-exactly";
  }
  return "?";
}

std::vector<Real> ratio_sequence_from_norms(const std::vector<Real>& norms,
                                            bool terminated_exactly) {
  // locate last nonzero norm
  std::size_t last = norms.size();
  while (last > 0 && norms[last - 1] == 0) --last;
  if (last < 3 && !terminated_exactly)
    throw std::invalid_argument("ratio sequence needs at least two nonzero series terms");
  std::vector<Real> out;
  for (std::size_t k = 1; k + 1 < last; ++k) {
    if (norms[k] == 0)
      throw ZeroNormTerm("term " + std::to_string(k) +
                         " has zero norm while later terms are nonzero");
    out.push_back(norms[k + 1] / norms[k]);
  }
  return out;
}

Verdict make_verdict(const std::vector<Real>& ratios, unsigned burn_in,
                     bool terminated_exactly) {
  if (terminated_exactly) return {VerdictKind::ConvergedExactly, Real(0)};
  // ratios[i] = rat_{i+1}; tail keeps k > burn_in
  std::vector<Real> tail;
  for (std::size_t i = 0; i < ratios.size(); ++i)
    if (i + 1 > burn_in) tail.push_back(ratios[i]);
  if (tail.empty()) return {VerdictKind::Inconclusive, Real(0)};
  bool all_below = true, all_at_least = true, nondecreasing = true;
  Real sup = tail[0];
  for (std::size_t i = 0; i < tail.size(); ++i) {
    if (!(tail[i] < 1)) all_below = false;
    if (tail[i] < 1) all_at_least = false;
    if (i > 0 && tail[i] < tail[i - 1] - Real("1e-9")) nondecreasing = false;
    if (tail[i] > sup) sup = tail[i];
  }
  if (all_below) return {VerdictKind::Convergent, sup};
  if (all_at_least && nondecreasing) return {VerdictKind::Divergent, sup};
  return {VerdictKind::Inconclusive, sup};
}

std::string TInterval::str() const {
  std::string lo_s = lo_unbounded ? "-inf" : real_to_string(lo, 10);
  std::string hi_s = hi_unbounded ? "inf" : real_to_string(hi, 10);
  return "(" + lo_s + ", " + hi_s + ")";
}

TInterval validity_region_closed_form(const std::string& id, const Rat& h) {
  if (id == "ex1") {
    // limit ratio |1 - exp(-2t)| / 2 < 1  <=>  t > -ln(3)/2 (for h = 1)
    if (h != 1) throw NoClosedForm("closed-form region for ex1 is available at h = 1 only");
    TInterval r;
    r.lo = -log(Real(3)) / 2;
    r.hi_unbounded = true;
    return r;
  }
  if (id == "ex3") {
    // limit ratio |1 - h(1+2t)| < 1  <=>  -1/2 < t < (2-h)/(2h), 0 < h < 2
    if (!(h > 0 && h < 2))
      throw NoClosedForm("closed-form region for ex3 requires 0 < h < 2");
    TInterval r;
    r.lo = Real(Rat(-1, 2));
    r.hi = Real((Rat(2) - h) / (2 * h));
    return r;
  }
  throw NoClosedForm("no closed-form validity region for " + id);
}

std::string report_to_csv(const ConvergenceReport& r) {
  std::ostringstream oss;
  bool have_bound = !r.error_bounds.empty();
  bool have_err = !r.reference_errors.empty();
  oss << "M,rat";
  if (have_bound) oss << ",bound";
  if (have_err) oss << ",err";
  oss << "\n";
  auto find_in = [](const std::vector<std::pair<unsigned, Real>>& v,
                    unsigned M) -> const Real* {
    for (const auto& [m, x] : v)
      if (m == M) return &x;
    return nullptr;
  };
  for (std::size_t i = 0; i < r.ratios.size(); ++i) {
    unsigned M = static_cast<unsigned>(i + 1);
    oss << M << "," << real_to_string(r.ratios[i], 10);
    if (have_bound) {
      const Real* b = find_in(r.error_bounds, M);
      oss << "," << (b ? real_to_string(*b, 10) : "");
    }
    if (have_err) {
      const Real* e = find_in(r.reference_errors, M);
      oss << "," << (e ? real_to_string(*e, 10) : "");
    }
    oss << "\n";
  }
  return oss.str();
}

nlohmann::json report_to_json(const ConvergenceReport& r) {
  nlohmann::json j;
  j["schema_version"] = 1;
  j["ratios"] = nlohmann::json::array();
  for (std::size_t i = 0; i < r.ratios.size(); ++i)
    j["ratios"].push_back({{"k", i + 1}, {"rat", real_to_string(r.ratios[i], 12)}});
  j["verdict"] = r.verdict.str();
  j["error_bounds"] = nlohmann::json::array();
  for (const auto& [m, b] : r.error_bounds)
    j["error_bounds"].push_back({{"M", m}, {"bound", real_to_string(b, 12)}});
  j["reference_errors"] = nlohmann::json::array();
  for (const auto& [m, e] : r.reference_errors)
    j["reference_errors"].push_back({{"M", m}, {"err", real_to_string(e, 12)}});
  return j;
}

}  // namespace ham
