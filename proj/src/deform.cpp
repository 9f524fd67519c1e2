#include "hamcore/deform.hpp"

namespace ham {

ReducedProblem::ReducedProblem(std::string name, std::vector<LinearTerm> linear,
                               std::vector<QuadraticTerm> quadratic, Rat forcing, LinearOp op,
                               ExpPoly u0, std::vector<ProblemBoundaryValue> u0_bcs,
                               SpatialFactor spatial, std::optional<Rat> norm_window,
                               std::optional<Rat> residual_window)
    : name_(std::move(name)),
      linear_(std::move(linear)),
      quadratic_(std::move(quadratic)),
      forcing_(std::move(forcing)),
      op_(std::move(op)),
      u0_(std::move(u0)),
      u0_bcs_(std::move(u0_bcs)),
      spatial_(spatial),
      norm_window_(std::move(norm_window)),
      residual_window_(std::move(residual_window)) {
  // The initial guess must satisfy the stated boundary values exactly.
  for (const auto& pb : u0_bcs_) {
    switch (pb.bc.kind) {
      case BoundaryCondition::Kind::ValueAtZero: {
        if (u0_.diff(pb.bc.order).value_at_zero() != pb.value)
          throw std::invalid_argument(name_ + ": u0 violates a value-at-zero condition");
        break;
      }
      case BoundaryCondition::Kind::DecayAtInfinity: {
        auto lim = u0_.limit_at_infinity();
        if (!lim || *lim != pb.value)
          throw std::invalid_argument(name_ + ": u0 violates the far-field condition");
        break;
      }
      case BoundaryCondition::Kind::DerivativeVanishesAtInfinity: {
        auto lim = u0_.diff(pb.bc.order).limit_at_infinity();
        if (!lim || *lim != pb.value)
          throw std::invalid_argument(name_ + ": u0 violates the far-field derivative condition");
        break;
      }
    }
  }
}

}  // namespace ham
