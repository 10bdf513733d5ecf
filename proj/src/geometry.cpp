#include "wrdist/geometry.hpp"

#include <algorithm>

#include <fmt/format.h>

#include "wrdist/errors.hpp"

namespace wrd {

namespace {

void require_same_dim(const Eigen::Ref<const Eigen::VectorXd>& a,
                      const Eigen::Ref<const Eigen::VectorXd>& b) {
  if (a.size() != b.size()) {
    throw DimensionError(fmt::format("dimension mismatch: {} vs {}", a.size(), b.size()));
  }
}

double checked_norm(const Eigen::Ref<const Eigen::VectorXd>& v) {
  const double n = v.norm();
  if (!(n > kZeroNormTolerance)) throw ZeroNormError("vector norm is zero");
  return n;
}

}  // namespace

NormDirection decompose(const Eigen::Ref<const Eigen::VectorXd>& v) {
  const double n = checked_norm(v);
  return {n, v / n};
}

double cosine_similarity(const Eigen::Ref<const Eigen::VectorXd>& a,
                         const Eigen::Ref<const Eigen::VectorXd>& b) {
  require_same_dim(a, b);
  const double c = a.dot(b) / (checked_norm(a) * checked_norm(b));
  return std::clamp(c, -1.0, 1.0);
}

double cosine_distance(const Eigen::Ref<const Eigen::VectorXd>& a,
                       const Eigen::Ref<const Eigen::VectorXd>& b) {
  return 1.0 - cosine_similarity(a, b);
}

double euclidean_distance(const Eigen::Ref<const Eigen::VectorXd>& a,
                          const Eigen::Ref<const Eigen::VectorXd>& b) {
  require_same_dim(a, b);
  return (a - b).norm();
}

double dot_product(const Eigen::Ref<const Eigen::VectorXd>& a,
                   const Eigen::Ref<const Eigen::VectorXd>& b) {
  require_same_dim(a, b);
  return a.dot(b);
}

CostMatrix cost_matrix(std::span<const Eigen::VectorXd> a, std::span<const Eigen::VectorXd> b,
                       GroundMetric metric) {
  const auto n = static_cast<Eigen::Index>(a.size());
  const auto m = static_cast<Eigen::Index>(b.size());
  CostMatrix out{Eigen::MatrixXd(n, m), metric};
  if (n == 0 || m == 0) return out;
  const auto dim = a.front().size();
  auto check = [dim](std::span<const Eigen::VectorXd> vs, const char* side) {
    for (std::size_t i = 0; i < vs.size(); ++i) {
      if (vs[i].size() != dim) {
        throw DimensionError(fmt::format("{}[{}] has dimension {}, expected {}", side, i,
                                         vs[i].size(), dim));
      }
    }
  };
  check(a, "a");
  check(b, "b");

  if (metric == GroundMetric::euclidean) {
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = 0; j < m; ++j) out.values(i, j) = (a[i] - b[j]).norm();
    return out;
  }

  auto check_norms = [](std::span<const Eigen::VectorXd> vs, const char* side) {
    for (std::size_t i = 0; i < vs.size(); ++i) {
      if (!(vs[i].norm() > kZeroNormTolerance)) {
        throw ZeroNormError(fmt::format("{}[{}] has zero norm", side, i));
      }
    }
  };
  check_norms(a, "a");
  check_norms(b, "b");
  // Entrywise so each cost is bit-identical to cosine_distance.
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < m; ++j) out.values(i, j) = cosine_distance(a[i], b[j]);
  return out;
}

}  // namespace wrd
