#pragma once

#include <nlohmann/json_fwd.hpp>

#include "hamcore/deform.hpp"

namespace ham {

struct ProblemRegistryEntry {
  std::string id;
  ProblemPtr problem;
  enum class RefKind { ClosedForm, Shooting } ref_kind;
  std::vector<double> default_h_grid;
  std::string table_binding;  // which bundled reference grid this feeds
};

// Built-in model problems, registered as "ex1".."ex6".
const ProblemRegistryEntry& get_problem(const std::string& id);  // throws UnknownProblem
std::vector<std::string> problem_ids();

// Blasius problem in rescaled variables with configurable scaling.
ProblemPtr make_blasius_problem(const Rat& lambda,
                                std::optional<Rat> norm_window = std::nullopt);

// Maps a series computed in t = lambda * eta back to physical variables:
// y(eta) = u(lambda eta) / lambda.
ExpPoly blasius_transform(const ExpPoly& u_of_t, const Rat& lambda);

// Integral of the squared spatial factor over the unit cell; multiplies
// temporal residual integrals for the separable PDE problems.
Real spatial_cell_l2sq(SpatialFactor f);

// JSON problem-definition schema (mirrors the ReducedProblem fields).
ProblemPtr problem_from_json(const nlohmann::json& j);
nlohmann::json problem_to_json(const ReducedProblem& p);

}  // namespace ham
