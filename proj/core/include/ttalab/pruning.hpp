#pragma once

#include <cstddef>
#include <vector>

#include "ttalab/gamma.hpp"

namespace ttalab {

/// Outcome of testing whether strategy k can be dropped from a uniform TTA.
///
/// lhs = (2m - 1) * sum_ij Gamma_ij
/// rhs = 2 m^2 * sum_{i != k} Gamma_ik + m^2 * Gamma_kk
/// removable = rhs >= lhs (ties within rounding count), which is the same statement as
/// risk_after <= risk_before for the uniform risks over m and m - 1 strategies.
struct PruneDecision {
  std::size_t index_k;
  double lhs;
  double rhs;
  bool removable;
  double risk_before;
  double risk_after;

  double margin() const noexcept { return rhs - lhs; }
};

/// Zero-based k. Throws InvalidArgument when m < 2 or k >= m.
PruneDecision prune_check(const GammaMatrix& gamma, std::size_t k);

/// Repeatedly drops the removable strategy with the largest margin (lowest
/// index on ties) until nothing is removable or only `min_keep` remain.
/// `index_k` in the returned decisions refers to the ORIGINAL indexing.
std::vector<PruneDecision> greedy_prune(const GammaMatrix& gamma, std::size_t min_keep);

/// Uniform-weight risk sum_ij Gamma_ij / m^2.
double uniform_risk(const GammaMatrix& gamma);

}  // namespace ttalab
