#include "wrdist/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <fmt/format.h>

#include "wrdist/errors.hpp"

namespace wrd {

namespace {

constexpr double kMassSumTolerance = 1e-6;
constexpr double kNegativeMassTolerance = 1e-12;

// Transportation simplex over a spanning-tree basis of the complete bipartite
// graph rows x cols. Node ids: rows are [0, m), columns are [m, m + n).
class TransportationSimplex {
 public:
  TransportationSimplex(const Eigen::VectorXd& supply, const Eigen::VectorXd& demand,
                        const Eigen::MatrixXd& cost)
      : m_(static_cast<int>(supply.size())),
        n_(static_cast<int>(demand.size())),
        cost_(cost),
        is_basic_(static_cast<std::size_t>(m_ * n_), -1),
        u_(static_cast<std::size_t>(m_)),
        v_(static_cast<std::size_t>(n_)) {
    const double scale = std::max(1.0, cost.cwiseAbs().maxCoeff());
    reduced_cost_eps_ = 1e-12 * scale;
    northwest_corner(supply, demand);
  }

  Eigen::MatrixXd solve() {
    const long max_iterations = 100000L + 50L * m_ * n_;
    const int bland_threshold = m_ + n_;
    int degenerate_run = 0;
    for (long iter = 0; iter < max_iterations; ++iter) {
      compute_potentials();
      const bool bland = degenerate_run > bland_threshold;
      const int entering = select_entering(bland);
      if (entering < 0) return extract_plan();
      const double theta = pivot(entering, bland);
      degenerate_run = theta > 0.0 ? 0 : degenerate_run + 1;
    }
    throw DataError("transportation simplex did not converge");
  }

 private:
  struct Arc {
    int row;
    int col;
    double flow;
  };

  int cell(int r, int c) const { return r * n_ + c; }

  void add_basic(int r, int c, double flow) {
    is_basic_[static_cast<std::size_t>(cell(r, c))] = static_cast<int>(basis_.size());
    basis_.push_back({r, c, flow});
  }

  // Walks the staircase from (0,0) to (m-1,n-1): exactly m + n - 1 cells,
  // which always form a spanning tree even when some flows are zero.
  void northwest_corner(Eigen::VectorXd supply, Eigen::VectorXd demand) {
    int r = 0;
    int c = 0;
    while (true) {
      if (r == m_ - 1 && c == n_ - 1) {
        add_basic(r, c, std::max(0.0, std::min(supply[r], demand[c])));
        break;
      }
      const double q = std::max(0.0, std::min(supply[r], demand[c]));
      add_basic(r, c, q);
      supply[r] -= q;
      demand[c] -= q;
      if ((supply[r] <= demand[c] && r < m_ - 1) || c == n_ - 1) {
        ++r;
      } else {
        ++c;
      }
    }
  }

  void build_adjacency() {
    adjacency_.assign(static_cast<std::size_t>(m_ + n_), {});
    for (int k = 0; k < static_cast<int>(basis_.size()); ++k) {
      adjacency_[static_cast<std::size_t>(basis_[k].row)].push_back(k);
      adjacency_[static_cast<std::size_t>(m_ + basis_[k].col)].push_back(k);
    }
  }

  int other_end(const Arc& a, int node) const { return node < m_ ? m_ + a.col : a.row; }

  // u_r + v_c = cost(r, c) on every basic cell, with u_0 = 0.
  void compute_potentials() {
    build_adjacency();
    std::vector<char> seen(static_cast<std::size_t>(m_ + n_), 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    u_[0] = 0.0;
    while (!stack.empty()) {
      const int node = stack.back();
      stack.pop_back();
      for (const int k : adjacency_[static_cast<std::size_t>(node)]) {
        const Arc& a = basis_[static_cast<std::size_t>(k)];
        const int next = other_end(a, node);
        if (seen[static_cast<std::size_t>(next)]) continue;
        seen[static_cast<std::size_t>(next)] = 1;
        if (next < m_) {
          u_[static_cast<std::size_t>(next)] = cost_(a.row, a.col) - v_[static_cast<std::size_t>(a.col)];
        } else {
          v_[static_cast<std::size_t>(a.col)] = cost_(a.row, a.col) - u_[static_cast<std::size_t>(a.row)];
        }
        stack.push_back(next);
      }
    }
  }

  // Dantzig's rule, or the lowest-index improving cell under Bland's rule.
  int select_entering(bool bland) const {
    int best = -1;
    double best_rc = -reduced_cost_eps_;
    for (int r = 0; r < m_; ++r) {
      for (int c = 0; c < n_; ++c) {
        if (is_basic_[static_cast<std::size_t>(cell(r, c))] >= 0) continue;
        const double rc = cost_(r, c) - u_[static_cast<std::size_t>(r)] - v_[static_cast<std::size_t>(c)];
        if (rc < best_rc) {
          best = cell(r, c);
          if (bland) return best;
          best_rc = rc;
        }
      }
    }
    return best;
  }

  // Tree path from row node `from` to column node `to`, as basic arc indices
  // in order of traversal.
  std::vector<int> tree_path(int from, int to) const {
    std::vector<int> parent_arc(static_cast<std::size_t>(m_ + n_), -1);
    std::vector<char> seen(static_cast<std::size_t>(m_ + n_), 0);
    std::vector<int> queue{from};
    seen[static_cast<std::size_t>(from)] = 1;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const int node = queue[head];
      if (node == to) break;
      for (const int k : adjacency_[static_cast<std::size_t>(node)]) {
        const int next = other_end(basis_[static_cast<std::size_t>(k)], node);
        if (seen[static_cast<std::size_t>(next)]) continue;
        seen[static_cast<std::size_t>(next)] = 1;
        parent_arc[static_cast<std::size_t>(next)] = k;
        queue.push_back(next);
      }
    }
    std::vector<int> path;
    for (int node = to; node != from;) {
      const int k = parent_arc[static_cast<std::size_t>(node)];
      path.push_back(k);
      node = other_end(basis_[static_cast<std::size_t>(k)], node);
    }
    std::reverse(path.begin(), path.end());
    return path;
  }

  double pivot(int entering, bool bland) {
    const int r = entering / n_;
    const int c = entering % n_;
    // Cycle: +entering, then the path from row r to column c alternates
    // (-, +, -, ...) starting from the arc at r.
    const std::vector<int> path = tree_path(r, m_ + c);
    int leaving = -1;
    double theta = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < path.size(); p += 2) {
      const Arc& a = basis_[static_cast<std::size_t>(path[p])];
      const bool better =
          a.flow < theta ||
          (bland && a.flow == theta &&
           cell(a.row, a.col) < cell(basis_[static_cast<std::size_t>(leaving)].row,
                                     basis_[static_cast<std::size_t>(leaving)].col));
      if (better) {
        theta = a.flow;
        leaving = path[p];
      }
    }
    theta = std::max(0.0, theta);
    for (std::size_t p = 0; p < path.size(); ++p) {
      Arc& a = basis_[static_cast<std::size_t>(path[p])];
      a.flow += (p % 2 == 0) ? -theta : theta;
    }
    // Replace the leaving arc in place with the entering one.
    Arc& out = basis_[static_cast<std::size_t>(leaving)];
    is_basic_[static_cast<std::size_t>(cell(out.row, out.col))] = -1;
    out = {r, c, theta};
    is_basic_[static_cast<std::size_t>(entering)] = leaving;
    return theta;
  }

  Eigen::MatrixXd extract_plan() const {
    Eigen::MatrixXd plan = Eigen::MatrixXd::Zero(m_, n_);
    for (const Arc& a : basis_) plan(a.row, a.col) = std::max(0.0, a.flow);
    return plan;
  }

  int m_;
  int n_;
  const Eigen::MatrixXd& cost_;
  std::vector<Arc> basis_;
  std::vector<int> is_basic_;
  std::vector<std::vector<int>> adjacency_;
  std::vector<double> u_;
  std::vector<double> v_;
  double reduced_cost_eps_ = 0.0;
};

std::vector<Eigen::Index> support(const Eigen::VectorXd& masses) {
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < masses.size(); ++i)
    if (masses[i] > 0.0) idx.push_back(i);
  return idx;
}

void check_mass_sum(const Eigen::Ref<const Eigen::VectorXd>& masses, const char* side) {
  const double s = masses.sum();
  if (!(std::abs(s - 1.0) <= kMassSumTolerance)) {
    throw DataError(fmt::format("{} masses sum to {}, expected 1", side, s));
  }
}

}  // namespace

Eigen::VectorXd validate_distribution(const Eigen::Ref<const Eigen::VectorXd>& masses) {
  if (masses.size() == 0) throw DataError("empty mass vector");
  Eigen::VectorXd out = masses;
  for (Eigen::Index i = 0; i < out.size(); ++i) {
    if (!std::isfinite(out[i])) throw DataError(fmt::format("mass {} is not finite", i));
    if (out[i] < -kNegativeMassTolerance) {
      throw DataError(fmt::format("mass {} is negative: {}", i, out[i]));
    }
    if (out[i] < 0.0) out[i] = 0.0;
  }
  const double total = out.sum();
  if (!(total > 0.0)) throw DataError("mass vector is all zero");
  return out / total;
}

TransportPlan emd(const Eigen::Ref<const Eigen::VectorXd>& source_mass,
                  const Eigen::Ref<const Eigen::VectorXd>& target_mass,
                  const Eigen::Ref<const Eigen::MatrixXd>& cost) {
  if (cost.rows() != source_mass.size() || cost.cols() != target_mass.size()) {
    throw DimensionError(fmt::format("cost matrix is {}x{}, masses are {} and {}", cost.rows(),
                                     cost.cols(), source_mass.size(), target_mass.size()));
  }
  if (!cost.allFinite()) throw DataError("cost matrix has non-finite entries");
  if ((cost.array() < 0.0).any()) throw DataError("cost matrix has negative entries");
  const Eigen::VectorXd a = validate_distribution(source_mass);
  const Eigen::VectorXd b = validate_distribution(target_mass);
  check_mass_sum(source_mass, "source");
  check_mass_sum(target_mass, "target");

  const auto rows = support(a);
  const auto cols = support(b);
  Eigen::VectorXd supply(static_cast<Eigen::Index>(rows.size()));
  Eigen::VectorXd demand(static_cast<Eigen::Index>(cols.size()));
  Eigen::MatrixXd reduced(supply.size(), demand.size());
  for (std::size_t i = 0; i < rows.size(); ++i) supply[static_cast<Eigen::Index>(i)] = a[rows[i]];
  for (std::size_t j = 0; j < cols.size(); ++j) demand[static_cast<Eigen::Index>(j)] = b[cols[j]];
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j)
      reduced(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cost(rows[i], cols[j]);

  const Eigen::MatrixXd compact = TransportationSimplex(supply, demand, reduced).solve();

  TransportPlan out{Eigen::MatrixXd::Zero(cost.rows(), cost.cols()), 0.0};
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      const double t = compact(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      out.plan(rows[i], cols[j]) = t;
      out.cost += t * cost(rows[i], cols[j]);
    }
  }
  return out;
}

}  // namespace wrd
