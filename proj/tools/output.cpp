#include "output.hpp"

#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "bicm/version.hpp"

namespace bicm::cli {

nlohmann::json curve_to_json(const GexitCurve& curve) {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& p : curve.points) {
    pts.push_back({{"alpha", p.alpha},
                   {"g", p.g},
                   {"stderr", p.stderr_},
                   {"sigma", p.sigma},
                   {"de_converged", p.de_converged},
                   {"de_iterations", p.de_iterations}});
  }
  return nlohmann::json{{"ensemble", curve.ensemble},
                        {"channel", curve.channel},
                        {"demapper", curve.demapper},
                        {"design_rate", curve.design_rate},
                        {"bits_per_symbol", curve.bits_per_symbol},
                        {"seed", curve.seed},
                        {"points", pts}};
}

GexitCurve curve_from_json(const nlohmann::json& j) {
  GexitCurve curve;
  curve.ensemble = j.at("ensemble").get<std::string>();
  curve.channel = j.at("channel").get<std::string>();
  curve.demapper = j.at("demapper").get<std::string>();
  curve.design_rate = j.at("design_rate").get<double>();
  curve.bits_per_symbol = j.at("bits_per_symbol").get<int>();
  curve.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& p : j.at("points")) {
    GexitPoint pt;
    pt.alpha = p.at("alpha").get<double>();
    pt.g = p.at("g").get<double>();
    pt.stderr_ = p.at("stderr").get<double>();
    pt.sigma = p.at("sigma").get<double>();
    pt.de_converged = p.at("de_converged").get<bool>();
    pt.de_iterations = p.at("de_iterations").get<int>();
    curve.points.push_back(pt);
  }
  return curve;
}

void write_curve_csv(const GexitCurve& curve, const std::string& path) {
  if (curve.points.empty())
    throw std::invalid_argument("write_curve_csv: refusing to write an empty curve");
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (f == nullptr) throw std::runtime_error("write_curve_csv: cannot open " + path);
  std::fputs("alpha,g,stderr\n", f);
  for (const auto& p : curve.points)
    std::fprintf(f, "%.17g,%.17g,%.17g\n", p.alpha, p.g, p.stderr_);
  std::fclose(f);
}

GexitCurve curve_from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("curve_from_csv: cannot open " + path);
  std::string line;
  if (!std::getline(in, line) || line != "alpha,g,stderr")
    throw std::runtime_error("curve_from_csv: bad header in " + path);
  GexitCurve curve;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    GexitPoint p;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf", &p.alpha, &p.g, &p.stderr_) != 3)
      throw std::runtime_error("curve_from_csv: bad row: " + line);
    curve.points.push_back(p);
  }
  return curve;
}

nlohmann::json make_envelope(const nlohmann::json& config, std::uint64_t seed,
                             nlohmann::json result) {
  return nlohmann::json{{"version", kVersion},
                        {"seed", seed},
                        {"config", config},
                        {"result", std::move(result)}};
}

void write_json_file(const nlohmann::json& j, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file " + path);
  out << j.dump(2) << "\n";
}

}  // namespace bicm::cli
