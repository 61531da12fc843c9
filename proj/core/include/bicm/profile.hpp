#pragma once

#include <vector>

#include "bicm/density.hpp"

namespace bicm {

/// Edge-perspective degree polynomials lambda, rho (index = degree; entry =
/// fraction of edges). The node-perspective polynomial L and the design rate
/// are derived.
struct DegreeProfile {
  std::vector<double> lambda;
  std::vector<double> rho;

  static DegreeProfile regular(int var_degree, int chk_degree);

  std::vector<double> node_dist() const;  // L_i
  double design_rate() const;             // 1 - int(rho)/int(lambda)
  void validate() const;
};

enum class ProfileSide {
  VarEdge,  // lambda: mixture of (i-1)-fold variable convolutions
  ChkEdge,  // rho:    mixture of (i-1)-fold check convolutions
  VarNode,  // L:      mixture of i-fold variable convolutions
};

LlrDensity apply_profile(const DegreeProfile& profile, ProfileSide side, const LlrDensity& a);

}  // namespace bicm
