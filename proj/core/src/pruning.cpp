#include "ttalab/pruning.hpp"

#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "ttalab/error.hpp"

namespace ttalab {

double uniform_risk(const GammaMatrix& gamma) {
  const auto m = static_cast<double>(gamma.size());
  return gamma.entries().sum() / (m * m);
}

PruneDecision prune_check(const GammaMatrix& gamma, std::size_t k) {
  const std::size_t m = gamma.size();
  if (m < 2) throw InvalidArgument("prune_check: need at least two strategies");
  if (k >= m) {
    throw InvalidArgument("prune_check: index " + std::to_string(k) + " out of range for m = " +
                          std::to_string(m));
  }
  const Eigen::MatrixXd& g = gamma.entries();
  const auto ki = static_cast<Eigen::Index>(k);
  const double md = static_cast<double>(m);

  const double total = g.sum();
  const double diag = g(ki, ki);
  const double cross = g.col(ki).sum() - diag;  // sum_{i != k} Gamma_ik

  PruneDecision d{};
  d.index_k = k;
  d.lhs = (2.0 * md - 1.0) * total;
  d.rhs = 2.0 * md * md * cross + md * md * diag;
  // Ties count as removable. Exact ties (e.g. a constant Gamma) only survive
  // rounding up to a few ulps of the summed magnitudes.
  const double magnitude = (2.0 * md - 1.0) * g.cwiseAbs().sum() +
                           2.0 * md * md * g.col(ki).cwiseAbs().sum() + md * md * std::abs(diag);
  const double tie = 4.0 * md * std::numeric_limits<double>::epsilon() * magnitude;
  d.removable = d.rhs >= d.lhs - tie;
  d.risk_before = total / (md * md);
  d.risk_after = (total - 2.0 * cross - diag) / ((md - 1.0) * (md - 1.0));
  return d;
}

std::vector<PruneDecision> greedy_prune(const GammaMatrix& gamma, std::size_t min_keep) {
  const std::size_t m = gamma.size();
  if (min_keep < 1 || min_keep > m) {
    throw InvalidArgument("greedy_prune: min_keep must lie in [1, " + std::to_string(m) + "]");
  }
  std::vector<std::size_t> alive(m);
  std::iota(alive.begin(), alive.end(), std::size_t{0});

  std::vector<PruneDecision> removed;
  while (alive.size() > min_keep) {
    const GammaMatrix sub = gamma.principal(alive);
    bool found = false;
    PruneDecision best{};
    std::size_t best_pos = 0;
    for (std::size_t pos = 0; pos < alive.size(); ++pos) {
      const PruneDecision d = prune_check(sub, pos);
      if (d.removable && (!found || d.margin() > best.margin())) {
        best = d;
        best_pos = pos;
        found = true;
      }
    }
    if (!found) break;
    best.index_k = alive[best_pos];
    removed.push_back(best);
    alive.erase(alive.begin() + static_cast<std::ptrdiff_t>(best_pos));
  }
  return removed;
}

}  // namespace ttalab
