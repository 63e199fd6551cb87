#include "hintrl/rl/gae.hpp"

#include "hintrl/util/error.hpp"

namespace hintrl::rl {

GaeResult compute_gae(const Eigen::VectorXd& rewards, const Eigen::VectorXd& values,
                      const std::vector<uint8_t>& dones, double gamma, double lam,
                      double bootstrap_value) {
    const Eigen::Index n = rewards.size();
    if (values.size() != n || static_cast<Eigen::Index>(dones.size()) != n) {
        throw util::UsageError("compute_gae: rewards, values and dones must have equal length");
    }
    GaeResult out;
    out.advantages.resize(n);
    out.returns.resize(n);
    double acc = 0.0;
    for (Eigen::Index t = n - 1; t >= 0; --t) {
        const double not_done = dones[static_cast<size_t>(t)] ? 0.0 : 1.0;
        const double next_value = t + 1 < n ? values(t + 1) : bootstrap_value;
        const double delta = rewards(t) + gamma * next_value * not_done - values(t);
        acc = delta + gamma * lam * not_done * acc;
        out.advantages(t) = acc;
        out.returns(t) = acc + values(t);
    }
    return out;
}

}  // namespace hintrl::rl
