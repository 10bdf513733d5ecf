#pragma once

#include <Eigen/Dense>

#include "wrdist/geometry.hpp"

namespace wrd {

/// Optimal coupling between two discrete distributions.
///
/// `plan(i, j)` is the mass moved from source point i to target point j. Row
/// sums reproduce the source masses, column sums the target masses.
struct TransportPlan {
  Eigen::MatrixXd plan;
  double cost = 0.0;
};

/// Clamps entries in [-1e-12, 0) to zero and rescales to unit sum.
/// Throws on entries below -1e-12, non-finite entries, or an all-zero vector.
Eigen::VectorXd validate_distribution(const Eigen::Ref<const Eigen::VectorXd>& masses);

/// Exact earth mover's distance.
///
/// Solves the transportation linear program with a primal network simplex
/// on the bipartite source/target graph and returns an optimal vertex: at most
/// n + n' - 1 entries of the plan are positive. Masses must each sum to 1
/// within 1e-6 and are renormalized exactly; zero-mass points are removed
/// before solving and come back as zero rows/columns.
TransportPlan emd(const Eigen::Ref<const Eigen::VectorXd>& source_mass,
                  const Eigen::Ref<const Eigen::VectorXd>& target_mass,
                  const Eigen::Ref<const Eigen::MatrixXd>& cost);

inline TransportPlan emd(const Eigen::Ref<const Eigen::VectorXd>& source_mass,
                         const Eigen::Ref<const Eigen::VectorXd>& target_mass,
                         const CostMatrix& cost) {
  return emd(source_mass, target_mass, cost.values);
}

}  // namespace wrd
