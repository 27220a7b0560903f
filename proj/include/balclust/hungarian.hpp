#pragma once

#include <vector>

#include <Eigen/Dense>

namespace balclust {

/// Kuhn-Munkres on a square cost matrix. Returns col[row], the minimum-cost
/// perfect matching. O(n^3).
std::vector<int> min_cost_matching(const Eigen::MatrixXd& cost);

}  // namespace balclust
