#pragma once

#include <json.hpp>

#include "bicm/density.hpp"

namespace bicm {

inline nlohmann::json to_json(const LlrDensity& d) {
  return nlohmann::json{
      {"grid", {{"max_llr", d.grid().max_llr}, {"half_cells", d.grid().half_cells}}},
      {"mass_minus_inf", d.mass_minus_inf()},
      {"mass_plus_inf", d.mass_plus_inf()},
      {"weights", d.weights()},
  };
}

inline LlrDensity density_from_json(const nlohmann::json& j) {
  GridSpec grid;
  grid.max_llr = j.at("grid").at("max_llr").get<double>();
  grid.half_cells = j.at("grid").at("half_cells").get<int>();
  LlrDensity d(grid);
  const auto w = j.at("weights").get<std::vector<double>>();
  if (static_cast<int>(w.size()) != grid.points())
    throw std::invalid_argument("density_from_json: weight count does not match grid");
  d.weights() = w;
  d.mass_minus_inf() = j.at("mass_minus_inf").get<double>();
  d.mass_plus_inf() = j.at("mass_plus_inf").get<double>();
  return d;
}

}  // namespace bicm
