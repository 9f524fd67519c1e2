#pragma once

#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hamcore/expfun.hpp"
#include "hamcore/operators.hpp"

namespace ham {

struct LinearTerm {
  Rat coeff;
  unsigned order = 0;
};

struct QuadraticTerm {
  Rat coeff;
  unsigned order_a = 0;
  unsigned order_b = 0;
};

// Spatial multiplier for the PDE model problems, reduced out of the
// temporal recurrence; see docs/reductions.md for the derivations.
enum class SpatialFactor { None, LinearX, SumMinusCos3, ExpNegX };

struct ProblemBoundaryValue {
  BoundaryCondition bc;
  Rat value = 0;
};

// A problem in reduced form: N(u) = sum a_i D^{d_i} u
//                                  + sum b_j (D^{p_j} u)(D^{q_j} u)
//                                  + gamma,
// together with the auxiliary operator L and the initial guess u0. The
// homotopy is  H(u,p) = (1-p)[L(u)-L(u0)] + p h N(u)  (h multiplies +N).
class ReducedProblem {
 public:
  ReducedProblem(std::string name, std::vector<LinearTerm> linear,
                 std::vector<QuadraticTerm> quadratic, Rat forcing, LinearOp op, ExpPoly u0,
                 std::vector<ProblemBoundaryValue> u0_bcs,
                 SpatialFactor spatial = SpatialFactor::None,
                 std::optional<Rat> norm_window = std::nullopt,
                 std::optional<Rat> residual_window = std::nullopt);

  const std::string& name() const { return name_; }
  const std::vector<LinearTerm>& linear() const { return linear_; }
  const std::vector<QuadraticTerm>& quadratic() const { return quadratic_; }
  const Rat& forcing() const { return forcing_; }
  const LinearOp& op() const { return op_; }
  const ExpPoly& u0() const { return u0_; }
  const std::vector<ProblemBoundaryValue>& u0_bcs() const { return u0_bcs_; }
  SpatialFactor spatial() const { return spatial_; }
  const std::optional<Rat>& norm_window() const { return norm_window_; }
  const std::optional<Rat>& residual_window() const { return residual_window_; }
  static constexpr const char* h_sign_convention = "plus_phN";

  // N applied to a single function (used by residuals and oracles).
  template <class C>
  BasicExpPoly<C> apply_nonlinear(const BasicExpPoly<C>& u) const {
    BasicExpPoly<C> out = BasicExpPoly<C>::constant(CoeffOps<C>::from_rat(forcing_));
    for (const auto& lt : linear_)
      out += u.diff(lt.order).scaled(CoeffOps<C>::from_rat(lt.coeff));
    for (const auto& qt : quadratic_) {
      const C s = CoeffOps<C>::from_rat(qt.coeff);
      BasicExpPoly<C>::mul_add_into(out, u.diff(qt.order_a), u.diff(qt.order_b), &s);
    }
    return out;
  }

 private:
  std::string name_;
  std::vector<LinearTerm> linear_;
  std::vector<QuadraticTerm> quadratic_;
  Rat forcing_;
  LinearOp op_;
  ExpPoly u0_;
  std::vector<ProblemBoundaryValue> u0_bcs_;
  SpatialFactor spatial_;
  std::optional<Rat> norm_window_;
  std::optional<Rat> residual_window_;
};

using ProblemPtr = std::shared_ptr<const ReducedProblem>;

// The computed homotopy series u_0..u_M for one value of the convergence
// control parameter. Immutable once extended; safe to share across threads.
template <class C>
struct HomotopySeries {
  ProblemPtr problem;
  C h;
  std::vector<BasicExpPoly<C>> terms;      // u_0 .. u_M
  bool terminated_exactly = false;          // hit an identically-zero term
  // cache of L(u_k) for the recurrence (rhs used to solve u_k, k >= 1)
  std::vector<BasicExpPoly<C>> applied_l;

  unsigned order() const { return static_cast<unsigned>(terms.size()) - 1; }
};

template <class C>
HomotopySeries<C> make_series(ProblemPtr problem, C h) {
  HomotopySeries<C> s;
  s.problem = std::move(problem);
  s.h = std::move(h);
  s.terms.push_back(convert_from_exact<C>(s.problem->u0()));
  s.applied_l.push_back(BasicExpPoly<C>());  // placeholder for k=0
  return s;
}

// R_m: the m-th Taylor coefficient in p of N(u(p)), assembled from the
// terms u_0..u_m (Cauchy convolution for the quadratic part).
template <class C>
BasicExpPoly<C> homotopy_rhs(const HomotopySeries<C>& s, unsigned m) {
  if (m >= s.terms.size()) throw std::out_of_range("homotopy_rhs: term not computed");
  const auto& pb = *s.problem;
  BasicExpPoly<C> out;
  if (m == 0 && pb.forcing() != 0)
    out += BasicExpPoly<C>::constant(CoeffOps<C>::from_rat(pb.forcing()));
  for (const auto& lt : pb.linear())
    out += s.terms[m].diff(lt.order).scaled(CoeffOps<C>::from_rat(lt.coeff));
  for (const auto& qt : pb.quadratic()) {
    const C c = CoeffOps<C>::from_rat(qt.coeff);
    for (unsigned i = 0; i <= m; ++i)
      BasicExpPoly<C>::mul_add_into(out, s.terms[i].diff(qt.order_a),
                                    s.terms[m - i].diff(qt.order_b), &c);
  }
  return out;
}

enum class OnDegenerate { Stop, Throw };

// Extends the series to the target order via the high-order deformation
// recurrence  L(u_k) = chi_k L(u_{k-1}) - h R_{k-1},  chi_1 = 0.
template <class C>
void extend(HomotopySeries<C>& s, unsigned target_order,
            OnDegenerate on_degenerate = OnDegenerate::Stop);

template <class C>
BasicExpPoly<C> partial_sum(const HomotopySeries<C>& s, unsigned M) {
  if (M >= s.terms.size()) {
    if (!s.terminated_exactly) throw std::out_of_range("partial_sum: order not computed");
    M = static_cast<unsigned>(s.terms.size()) - 1;
  }
  BasicExpPoly<C> sum;
  for (unsigned k = 0; k <= M; ++k) sum += s.terms[k];
  return sum;
}

// Per-term norms under the problem's configured norm window (or an
// explicit override; nullopt in the problem means half-line L2). A
// non-decaying u_0 gets an infinite norm marker; it never enters the
// reported ratios, which start at ||u_2||/||u_1||.
template <class C>
std::vector<Real> term_norms(const HomotopySeries<C>& s,
                             const std::optional<Real>& window_override = std::nullopt) {
  std::optional<Real> window = window_override;
  if (!window && s.problem->norm_window()) window = to_real(*s.problem->norm_window());
  std::vector<Real> norms;
  norms.reserve(s.terms.size());
  for (std::size_t k = 0; k < s.terms.size(); ++k) {
    try {
      norms.push_back(s.terms[k].l2_norm(window));
    } catch (const DivergentIntegral&) {
      if (k == 0)
        norms.push_back(std::numeric_limits<Real>::infinity());
      else
        throw;
    }
  }
  return norms;
}

// --- implementation ---

template <class C>
void extend(HomotopySeries<C>& s, unsigned target_order, OnDegenerate on_degenerate) {
  const auto& pb = *s.problem;
  // derivative cache: diffs_[k][order]
  std::vector<std::map<unsigned, BasicExpPoly<C>>> diffs(s.terms.size());
  auto dcache = [&](unsigned k, unsigned order) -> const BasicExpPoly<C>& {
    auto& slot = diffs[k];
    auto it = slot.find(order);
    if (it == slot.end()) it = slot.emplace(order, s.terms[k].diff(order)).first;
    return it->second;
  };

  const bool real_mode = std::is_same_v<C, Real>;
  const Real prune_eps =
      real_mode ? pow(Real(2), -static_cast<int>(precision_bits()) + 28) : Real(0);

  while (s.terms.size() <= target_order) {
    if (s.terminated_exactly) {
      if (on_degenerate == OnDegenerate::Throw)
        throw DegenerateSeries("series terminated exactly at order " +
                               std::to_string(s.terms.size() - 1));
      return;
    }
    const unsigned k = static_cast<unsigned>(s.terms.size());  // computing u_k
    const unsigned m = k - 1;
    // R_m from cached derivatives
    BasicExpPoly<C> R;
    if (m == 0 && pb.forcing() != 0)
      R += BasicExpPoly<C>::constant(CoeffOps<C>::from_rat(pb.forcing()));
    for (const auto& lt : pb.linear())
      R += dcache(m, lt.order).scaled(CoeffOps<C>::from_rat(lt.coeff));
    for (const auto& qt : pb.quadratic()) {
      const C c = CoeffOps<C>::from_rat(qt.coeff);
      for (unsigned i = 0; i <= m; ++i)
        BasicExpPoly<C>::mul_add_into(R, dcache(i, qt.order_a), dcache(m - i, qt.order_b), &c);
    }
    BasicExpPoly<C> rhs = (-R).scaled(s.h);
    if (k >= 2) rhs += s.applied_l[m];  // chi_k = 1 for k >= 2
    BasicExpPoly<C> u_k = pb.op().template solve<C>(rhs);
    if (real_mode) u_k = u_k.pruned(prune_eps);
    if (u_k.is_zero()) {
      s.terminated_exactly = true;
      if (on_degenerate == OnDegenerate::Throw)
        throw DegenerateSeries("series terminated exactly at order " + std::to_string(k - 1));
      return;
    }
    s.terms.push_back(std::move(u_k));
    s.applied_l.push_back(std::move(rhs));
    diffs.emplace_back();
  }
}

}  // namespace ham
