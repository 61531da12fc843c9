#include "bicm/profile.hpp"

#include <cmath>
#include <stdexcept>

namespace bicm {

DegreeProfile DegreeProfile::regular(int var_degree, int chk_degree) {
  if (var_degree < 2 || chk_degree <= var_degree)
    throw std::invalid_argument("regular profile requires 2 <= dl < dr");
  DegreeProfile p;
  p.lambda.assign(var_degree + 1, 0.0);
  p.lambda[var_degree] = 1.0;
  p.rho.assign(chk_degree + 1, 0.0);
  p.rho[chk_degree] = 1.0;
  return p;
}

void DegreeProfile::validate() const {
  auto check = [](const std::vector<double>& v, const char* name) {
    double sum = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] < 0.0) throw std::invalid_argument(std::string(name) + ": negative coefficient");
      if (v[i] > 0.0 && i < 2) throw std::invalid_argument(std::string(name) + ": degree < 2");
      sum += v[i];
    }
    if (std::abs(sum - 1.0) > 1e-9)
      throw std::invalid_argument(std::string(name) + ": coefficients must sum to 1");
  };
  check(lambda, "lambda");
  check(rho, "rho");
}

std::vector<double> DegreeProfile::node_dist() const {
  std::vector<double> node(lambda.size(), 0.0);
  double norm = 0.0;
  for (std::size_t i = 1; i < lambda.size(); ++i) norm += lambda[i] / static_cast<double>(i);
  for (std::size_t i = 1; i < lambda.size(); ++i)
    node[i] = lambda[i] / static_cast<double>(i) / norm;
  return node;
}

double DegreeProfile::design_rate() const {
  double int_lambda = 0.0, int_rho = 0.0;
  for (std::size_t i = 1; i < lambda.size(); ++i) int_lambda += lambda[i] / static_cast<double>(i);
  for (std::size_t i = 1; i < rho.size(); ++i) int_rho += rho[i] / static_cast<double>(i);
  return 1.0 - int_rho / int_lambda;
}

LlrDensity apply_profile(const DegreeProfile& profile, ProfileSide side, const LlrDensity& a) {
  const bool chk = side == ProfileSide::ChkEdge;
  const std::vector<double>& coeffs = [&]() -> const std::vector<double>& {
    switch (side) {
      case ProfileSide::VarEdge: return profile.lambda;
      case ProfileSide::ChkEdge: return profile.rho;
      default: return profile.lambda;  // VarNode derives from lambda below
    }
  }();
  std::vector<double> mix =
      side == ProfileSide::VarNode ? profile.node_dist() : coeffs;
  if (mix.empty()) throw std::invalid_argument("apply_profile: empty profile");

  // Fold count for degree i: i-1 for edge polynomials, i for L.
  const int offset = side == ProfileSide::VarNode ? 0 : 1;

  LlrDensity out(a.grid());
  // Running power a^{x k}, starting from k = 1; the k = 0 identity is
  // accumulated directly when a degree needs it.
  LlrDensity power = a;
  int folds = 1;
  bool any = false;
  for (std::size_t deg = 1; deg < mix.size(); ++deg) {
    if (mix[deg] == 0.0) continue;
    const int want = static_cast<int>(deg) - offset;
    if (want == 0) {
      out.accumulate(chk ? delta_density(a.grid(), DeltaKind::PlusInfinity)
                         : delta_density(a.grid(), DeltaKind::Zero),
                     mix[deg]);
      any = true;
      continue;
    }
    while (folds < want) {
      power = chk ? chk_conv(power, a) : var_conv(power, a);
      ++folds;
    }
    out.accumulate(power, mix[deg]);
    any = true;
  }
  if (!any) throw std::invalid_argument("apply_profile: profile has no mass");
  return out;
}

}  // namespace bicm
