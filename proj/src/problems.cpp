#include "hamcore/problems.hpp"

#include <nlohmann/json.hpp>

#include <map>
#include <mutex>

namespace ham {

namespace {

ExpPoly ep_term(const Rat& c, unsigned power, const Rat& rate) {
  return ExpPoly::term(c, power, rate);
}

ProblemPtr make_ex1() {
  // u' + u^2 - 1 = 0, u(0) = 0; L = D + 2, u0 = 1 - exp(-2t)
  LinearOp L({{Rat(-2), 1}}, {BoundaryCondition::value_at_zero(0)});
  ExpPoly u0 = ep_term(1, 0, 0) - ep_term(1, 0, 2);
  return std::make_shared<ReducedProblem>(
      "ex1", std::vector<LinearTerm>{{Rat(1), 1}}, std::vector<QuadraticTerm>{{Rat(1), 0, 0}},
      Rat(-1), std::move(L), std::move(u0),
      std::vector<ProblemBoundaryValue>{{BoundaryCondition::value_at_zero(0), Rat(0)}});
}

ProblemPtr make_ex2() {
  // 2u'' + u - u^2 = 0, u(0) = 0, u(inf) = 1; L = D^2 - 1, u0 = 1 - exp(-t).
  // The +1 characteristic branch grows and is discarded by the decay
  // condition; the solver works with the decaying kernel {exp(-t)} only.
  LinearOp L({{Rat(-1), 1}, {Rat(1), 1}},
             {BoundaryCondition::value_at_zero(0), BoundaryCondition::decay_at_infinity()});
  ExpPoly u0 = ep_term(1, 0, 0) - ep_term(1, 0, 1);
  return std::make_shared<ReducedProblem>(
      "ex2", std::vector<LinearTerm>{{Rat(2), 2}, {Rat(1), 0}},
      std::vector<QuadraticTerm>{{Rat(-1), 0, 0}}, Rat(0), std::move(L), std::move(u0),
      std::vector<ProblemBoundaryValue>{{BoundaryCondition::value_at_zero(0), Rat(0)},
                                        {BoundaryCondition::decay_at_infinity(), Rat(1)}});
}

ProblemPtr make_ex3() {
  // Burgers with u(x,t) = x c(t): temporal form c' + c^2 = 0-forcing,
  // c(0) = 2; L = D. Norm window [0,1], residual window [0,1/4].
  LinearOp L({{Rat(0), 1}}, {BoundaryCondition::value_at_zero(0)});
  ExpPoly c0 = ep_term(2, 0, 0);
  return std::make_shared<ReducedProblem>(
      "ex3", std::vector<LinearTerm>{{Rat(1), 1}}, std::vector<QuadraticTerm>{{Rat(1), 0, 0}},
      Rat(0), std::move(L), std::move(c0),
      std::vector<ProblemBoundaryValue>{{BoundaryCondition::value_at_zero(0), Rat(2)}},
      SpatialFactor::LinearX, Rat(1), Rat(1, 4));
}

ProblemPtr make_ex4() {
  // Beam equation with u = S(x,y,z) c(t): temporal form c'' - c,
  // c(0) = 1, c'(0) = -1; L = D^2.
  LinearOp L({{Rat(0), 2}},
             {BoundaryCondition::value_at_zero(0), BoundaryCondition::value_at_zero(1)});
  ExpPoly c0 = ep_term(1, 0, 0) - ep_term(1, 1, 0);
  return std::make_shared<ReducedProblem>(
      "ex4", std::vector<LinearTerm>{{Rat(1), 2}, {Rat(-1), 0}}, std::vector<QuadraticTerm>{},
      Rat(0), std::move(L), std::move(c0),
      std::vector<ProblemBoundaryValue>{{BoundaryCondition::value_at_zero(0), Rat(1)},
                                        {BoundaryCondition::value_at_zero(1), Rat(-1)}},
      SpatialFactor::SumMinusCos3, Rat(1), Rat(1, 4));
}

ProblemPtr make_ex5() {
  // Dispersive equation with u = exp(-x) c(t): temporal form -c' - c,
  // c(0) = 1; L = D.
  LinearOp L({{Rat(0), 1}}, {BoundaryCondition::value_at_zero(0)});
  ExpPoly c0 = ep_term(1, 0, 0);
  return std::make_shared<ReducedProblem>(
      "ex5", std::vector<LinearTerm>{{Rat(-1), 1}, {Rat(-1), 0}}, std::vector<QuadraticTerm>{},
      Rat(0), std::move(L), std::move(c0),
      std::vector<ProblemBoundaryValue>{{BoundaryCondition::value_at_zero(0), Rat(1)}},
      SpatialFactor::ExpNegX, Rat(1), Rat(1, 4));
}

}  // namespace

ProblemPtr make_blasius_problem(const Rat& lambda, std::optional<Rat> norm_window) {
  if (lambda <= 0) throw std::invalid_argument("scaling parameter must be positive");
  // u''' + u u'' / (2 lambda^2) = 0, u(0) = u'(0) = 0, u'(inf) = 1;
  // L = D^3 + D^2, u0 = -1 + t + exp(-t).
  LinearOp L({{Rat(0), 2}, {Rat(-1), 1}},
             {BoundaryCondition::value_at_zero(0), BoundaryCondition::value_at_zero(1),
              BoundaryCondition::derivative_vanishes_at_infinity(1)});
  ExpPoly u0 = ep_term(-1, 0, 0) + ep_term(1, 1, 0) + ep_term(1, 0, 1);
  Rat qc = Rat(1) / (2 * lambda * lambda);
  return std::make_shared<ReducedProblem>(
      "ex6", std::vector<LinearTerm>{{Rat(1), 3}}, std::vector<QuadraticTerm>{{qc, 0, 2}},
      Rat(0), std::move(L), std::move(u0),
      std::vector<ProblemBoundaryValue>{
          {BoundaryCondition::value_at_zero(0), Rat(0)},
          {BoundaryCondition::value_at_zero(1), Rat(0)},
          {BoundaryCondition::derivative_vanishes_at_infinity(1), Rat(1)}},
      SpatialFactor::None, norm_window.value_or(Rat(10)), std::nullopt);
}

ExpPoly blasius_transform(const ExpPoly& u_of_t, const Rat& lambda) {
  if (lambda <= 0) throw std::invalid_argument("scaling parameter must be positive");
  return u_of_t.substitute_scaled(lambda).scaled(Rat(1) / lambda);
}

Real spatial_cell_l2sq(SpatialFactor f) {
  switch (f) {
    case SpatialFactor::None:
      return Real(1);
    case SpatialFactor::LinearX:
      return Real(Rat(1, 3));  // int_0^1 x^2 dx
    case SpatialFactor::ExpNegX:
      return (1 - exp(Real(-2))) / 2;  // int_0^1 exp(-2x) dx
    case SpatialFactor::SumMinusCos3: {
      // S = sum_i (x_i - cos x_i) over the unit cube:
      // int S^2 = 3 int (x-cos x)^2 dx + 6 (int (x-cos x) dx)^2
      Real s1 = sin(Real(1)), c1 = cos(Real(1)), s2 = sin(Real(2));
      Real a = Real(Rat(1, 2)) - s1;
      Real b = Real(Rat(1, 3)) - 2 * (c1 + s1 - 1) + Real(Rat(1, 2)) + s2 / 4;
      return 3 * b + 6 * a * a;
    }
  }
  throw std::logic_error("unknown spatial factor");
}

namespace {

std::map<std::string, ProblemRegistryEntry> build_registry() {
  std::map<std::string, ProblemRegistryEntry> reg;
  reg["ex1"] = {"ex1", make_ex1(), ProblemRegistryEntry::RefKind::ClosedForm,
                {2.0, 1.5, 1.3, 1.0, 0.5}, "table1"};
  reg["ex2"] = {"ex2", make_ex2(), ProblemRegistryEntry::RefKind::Shooting,
                {1.2, 1.0, 0.8, 0.6}, "table2"};
  reg["ex3"] = {"ex3", make_ex3(), ProblemRegistryEntry::RefKind::ClosedForm,
                {0.5, 1.0, 1.5}, ""};
  reg["ex4"] = {"ex4", make_ex4(), ProblemRegistryEntry::RefKind::ClosedForm, {1.0}, ""};
  reg["ex5"] = {"ex5", make_ex5(), ProblemRegistryEntry::RefKind::ClosedForm, {-1.0, 1.0}, ""};
  reg["ex6"] = {"ex6", make_blasius_problem(Rat(4)), ProblemRegistryEntry::RefKind::Shooting,
                {1.6, 1.5, 1.4, 1.0}, "table3"};
  return reg;
}

const std::map<std::string, ProblemRegistryEntry>& registry() {
  static const std::map<std::string, ProblemRegistryEntry> reg = build_registry();
  return reg;
}

}  // namespace

const ProblemRegistryEntry& get_problem(const std::string& id) {
  const auto& reg = registry();
  auto it = reg.find(id);
  if (it == reg.end()) throw UnknownProblem("no such problem: " + id);
  return it->second;
}

std::vector<std::string> problem_ids() {
  std::vector<std::string> ids;
  for (const auto& [k, v] : registry()) ids.push_back(k);
  return ids;
}

namespace {

BoundaryCondition bc_from_json(const nlohmann::json& j) {
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "value_at_zero")
    return BoundaryCondition::value_at_zero(j.value("order", 0u));
  if (kind == "decay_at_infinity") return BoundaryCondition::decay_at_infinity();
  if (kind == "derivative_vanishes_at_infinity")
    return BoundaryCondition::derivative_vanishes_at_infinity(j.value("order", 0u));
  throw std::invalid_argument("unknown boundary condition kind: " + kind);
}

nlohmann::json bc_to_json(const BoundaryCondition& bc) {
  switch (bc.kind) {
    case BoundaryCondition::Kind::ValueAtZero:
      return {{"kind", "value_at_zero"}, {"order", bc.order}};
    case BoundaryCondition::Kind::DecayAtInfinity:
      return {{"kind", "decay_at_infinity"}};
    case BoundaryCondition::Kind::DerivativeVanishesAtInfinity:
      return {{"kind", "derivative_vanishes_at_infinity"}, {"order", bc.order}};
  }
  throw std::logic_error("unknown bc kind");
}

SpatialFactor spatial_from_string(const std::string& s) {
  if (s == "none") return SpatialFactor::None;
  if (s == "linear_x") return SpatialFactor::LinearX;
  if (s == "sum_minus_cos3") return SpatialFactor::SumMinusCos3;
  if (s == "exp_neg_x") return SpatialFactor::ExpNegX;
  throw std::invalid_argument("unknown spatial factor: " + s);
}

std::string spatial_to_string(SpatialFactor f) {
  switch (f) {
    case SpatialFactor::None:
      return "none";
    case SpatialFactor::LinearX:
      return "linear_x";
    case SpatialFactor::SumMinusCos3:
      return "sum_minus_cos3";
    case SpatialFactor::ExpNegX:
      return "exp_neg_x";
  }
  throw std::logic_error("unknown spatial factor");
}

}  // namespace

ProblemPtr problem_from_json(const nlohmann::json& j) {
  std::vector<LinearTerm> linear;
  for (const auto& e : j.value("linear_terms", nlohmann::json::array()))
    linear.push_back({rat_from_string(e.at("coeff").get<std::string>()),
                      e.at("order").get<unsigned>()});
  std::vector<QuadraticTerm> quadratic;
  for (const auto& e : j.value("quadratic_terms", nlohmann::json::array()))
    quadratic.push_back({rat_from_string(e.at("coeff").get<std::string>()),
                         e.at("order_a").get<unsigned>(), e.at("order_b").get<unsigned>()});
  Rat forcing = rat_from_string(j.value("forcing", std::string("0")));

  const auto& opj = j.at("operator");
  std::vector<LinearOp::Root> roots;
  for (const auto& e : opj.at("roots"))
    roots.push_back({rat_from_string(e.at("root").get<std::string>()),
                     e.value("mult", 1u)});
  std::vector<BoundaryCondition> bcs;
  for (const auto& e : opj.at("bcs")) bcs.push_back(bc_from_json(e));
  LinearOp op(std::move(roots), std::move(bcs));

  ExpPoly u0 = expoly_from_json(j.at("u0"));
  std::vector<ProblemBoundaryValue> u0_bcs;
  for (const auto& e : j.value("u0_bcs", nlohmann::json::array()))
    u0_bcs.push_back({bc_from_json(e), rat_from_string(e.value("value", std::string("0")))});

  std::optional<Rat> norm_window, residual_window;
  if (j.contains("norm_window") && !j["norm_window"].is_null())
    norm_window = rat_from_string(j["norm_window"].get<std::string>());
  if (j.contains("residual_window") && !j["residual_window"].is_null())
    residual_window = rat_from_string(j["residual_window"].get<std::string>());

  return std::make_shared<ReducedProblem>(
      j.value("name", std::string("user")), std::move(linear), std::move(quadratic),
      std::move(forcing), std::move(op), std::move(u0), std::move(u0_bcs),
      spatial_from_string(j.value("spatial_factor", std::string("none"))),
      std::move(norm_window), std::move(residual_window));
}

nlohmann::json problem_to_json(const ReducedProblem& p) {
  nlohmann::json j;
  j["name"] = p.name();
  j["h_sign_convention"] = ReducedProblem::h_sign_convention;
  j["linear_terms"] = nlohmann::json::array();
  for (const auto& t : p.linear())
    j["linear_terms"].push_back({{"coeff", rat_to_string(t.coeff)}, {"order", t.order}});
  j["quadratic_terms"] = nlohmann::json::array();
  for (const auto& t : p.quadratic())
    j["quadratic_terms"].push_back({{"coeff", rat_to_string(t.coeff)},
                                    {"order_a", t.order_a},
                                    {"order_b", t.order_b}});
  j["forcing"] = rat_to_string(p.forcing());
  nlohmann::json opj;
  opj["roots"] = nlohmann::json::array();
  for (const auto& r : p.op().roots())
    opj["roots"].push_back({{"root", rat_to_string(r.value)}, {"mult", r.multiplicity}});
  opj["bcs"] = nlohmann::json::array();
  for (const auto& bc : p.op().bcs()) opj["bcs"].push_back(bc_to_json(bc));
  j["operator"] = std::move(opj);
  j["u0"] = expoly_to_json(p.u0());
  j["u0_bcs"] = nlohmann::json::array();
  for (const auto& pb : p.u0_bcs()) {
    auto e = bc_to_json(pb.bc);
    e["value"] = rat_to_string(pb.value);
    j["u0_bcs"].push_back(std::move(e));
  }
  j["spatial_factor"] = spatial_to_string(p.spatial());
  if (p.norm_window())
    j["norm_window"] = rat_to_string(*p.norm_window());
  else
    j["norm_window"] = nullptr;
  if (p.residual_window())
    j["residual_window"] = rat_to_string(*p.residual_window());
  else
    j["residual_window"] = nullptr;
  return j;
}

}  // namespace ham
