#pragma once

#include <span>

#include <Eigen/Dense>

namespace wrd {

// Below this a vector has no usable direction.
inline constexpr double kZeroNormTolerance = 1e-12;

struct NormDirection {
  double norm = 0.0;
  Eigen::VectorXd direction;
};

/// Splits v into its Euclidean norm and unit direction. Throws ZeroNormError
/// when the norm is at or below kZeroNormTolerance.
NormDirection decompose(const Eigen::Ref<const Eigen::VectorXd>& v);

/// Cosine of the angle between a and b, clamped to [-1, 1].
double cosine_similarity(const Eigen::Ref<const Eigen::VectorXd>& a,
                         const Eigen::Ref<const Eigen::VectorXd>& b);
double cosine_distance(const Eigen::Ref<const Eigen::VectorXd>& a,
                       const Eigen::Ref<const Eigen::VectorXd>& b);
double euclidean_distance(const Eigen::Ref<const Eigen::VectorXd>& a,
                          const Eigen::Ref<const Eigen::VectorXd>& b);
double dot_product(const Eigen::Ref<const Eigen::VectorXd>& a,
                   const Eigen::Ref<const Eigen::VectorXd>& b);

enum class GroundMetric { euclidean, cosine };

struct CostMatrix {
  Eigen::MatrixXd values;
  GroundMetric metric = GroundMetric::euclidean;
};

/// Pairwise ground-metric costs, rows indexed by `a`, columns by `b`.
CostMatrix cost_matrix(std::span<const Eigen::VectorXd> a, std::span<const Eigen::VectorXd> b,
                       GroundMetric metric);

}  // namespace wrd
