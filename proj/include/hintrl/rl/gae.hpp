#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace hintrl::rl {

struct GaeResult {
    Eigen::VectorXd advantages;
    Eigen::VectorXd returns;
};

// Generalized advantage estimation over one worker's step sequence:
//   delta_t = r_t + gamma * V_{t+1} * (1 - done_t) - V_t
//   A_t     = delta_t + gamma * lambda * (1 - done_t) * A_{t+1}
//   returns = advantages + values
// with V_T supplied as bootstrap_value. Lengths must match.
GaeResult compute_gae(const Eigen::VectorXd& rewards, const Eigen::VectorXd& values,
                      const std::vector<uint8_t>& dones, double gamma, double lam,
                      double bootstrap_value);

}  // namespace hintrl::rl
