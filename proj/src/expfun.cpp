#include "hamcore/expfun.hpp"

#include <nlohmann/json.hpp>

namespace ham {

nlohmann::json expoly_to_json(const ExpPoly& p) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& t : p.terms()) {
    arr.push_back({{"coeff", rat_to_string(t.coeff)},
                   {"power", t.power},
                   {"rate", rat_to_string(t.rate)}});
  }
  return arr;
}

ExpPoly expoly_from_json(const nlohmann::json& j) {
  std::vector<ExpPoly::Term> terms;
  for (const auto& e : j) {
    ExpPoly::Term t;
    t.coeff = rat_from_string(e.at("coeff").get<std::string>());
    t.power = e.at("power").get<unsigned>();
    t.rate = rat_from_string(e.at("rate").get<std::string>());
    terms.push_back(std::move(t));
  }
  return ExpPoly(std::move(terms));
}

}  // namespace ham
