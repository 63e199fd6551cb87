#pragma once

#include <vector>

#include <Eigen/Core>

#include "hintrl/rl/net.hpp"
#include "hintrl/util/rng.hpp"

namespace hintrl::rl {

struct PPOConfig {
    double gamma = 0.99;
    double lam = 0.95;
    double clip = 0.2;
    double lr = 2.5e-4;
    int epochs = 4;
    int minibatch = 256;
    int horizon = 128;
    int workers = 8;
    double value_coef = 0.5;
    double entropy_coef = 0.01;
    double grad_clip = 0.5;
    std::vector<int> hidden = {128, 128};

    void validate() const;  // throws ConfigError naming the offending field
};

// Fixed-horizon on-policy storage for W workers. Samples are laid out worker
// major: row = worker * horizon + step.
class RolloutBuffer {
public:
    RolloutBuffer(int workers, int horizon, int feature_dim);

    void add(int worker, const Eigen::VectorXd& feature, int action, double log_prob, double value,
             double reward, bool done);
    bool full() const;
    bool finished() const { return finished_; }
    int size() const { return workers_ * horizon_; }

    // Computes per-worker GAE; must run before ppo_update touches the buffer.
    void finish(const Eigen::VectorXd& bootstrap_values, double gamma, double lam);
    void clear();

    const Eigen::MatrixXd& features() const { return features_; }
    const std::vector<int>& actions() const { return actions_; }
    const Eigen::VectorXd& log_probs() const { return log_probs_; }
    const Eigen::VectorXd& values() const { return values_; }
    const Eigen::VectorXd& rewards() const { return rewards_; }
    const std::vector<uint8_t>& dones() const { return dones_; }
    const Eigen::VectorXd& advantages() const { return advantages_; }
    const Eigen::VectorXd& returns() const { return returns_; }

private:
    int workers_;
    int horizon_;
    std::vector<int> counts_;
    Eigen::MatrixXd features_;
    std::vector<int> actions_;
    Eigen::VectorXd log_probs_;
    Eigen::VectorXd values_;
    Eigen::VectorXd rewards_;
    std::vector<uint8_t> dones_;
    Eigen::VectorXd advantages_;
    Eigen::VectorXd returns_;
    bool finished_ = false;
};

class AdamOptimizer {
public:
    explicit AdamOptimizer(double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8);
    void step(PolicyNet& net, const PolicyNet::Gradients& grads);

private:
    double lr_, beta1_, beta2_, eps_;
    long t_ = 0;
    std::vector<Eigen::MatrixXd> m_w_, v_w_;
    std::vector<Eigen::VectorXd> m_b_, v_b_;
};

struct BatchLoss {
    double total = 0.0;
    double policy = 0.0;
    double value = 0.0;
    double entropy = 0.0;
    double clip_fraction = 0.0;
};

// Clipped-surrogate PPO objective on one minibatch (advantages already
// normalized by the caller):
//   loss = -mean(min(ratio*A, clip(ratio, 1 +- clip)*A))
//          + value_coef * mean((V - returns)^2) - entropy_coef * entropy
BatchLoss ppo_loss(const PolicyNet& net, const Eigen::MatrixXd& features,
                   const std::vector<int>& actions, const Eigen::VectorXd& old_log_probs,
                   const Eigen::VectorXd& advantages, const Eigen::VectorXd& returns,
                   const PPOConfig& cfg);

// Same objective with its analytic parameter gradient.
std::pair<BatchLoss, PolicyNet::Gradients> ppo_loss_grad(
    const PolicyNet& net, const Eigen::MatrixXd& features, const std::vector<int>& actions,
    const Eigen::VectorXd& old_log_probs, const Eigen::VectorXd& advantages,
    const Eigen::VectorXd& returns, const PPOConfig& cfg);

struct UpdateStats {
    double policy_loss = 0.0;
    double value_loss = 0.0;
    double entropy = 0.0;
    double clip_fraction = 0.0;
    double grad_norm = 0.0;  // pre-clip, averaged over minibatches
};

// One full PPO update cycle (epochs x shuffled minibatches) over a finished
// buffer. Advantages are normalized per batch (zero mean, unit variance,
// eps 1e-8). The buffer is cleared afterwards. Throws on non-finite loss.
UpdateStats ppo_update(PolicyNet& net, AdamOptimizer& adam, RolloutBuffer& buffer,
                       const PPOConfig& cfg, util::Rng& rng);

}  // namespace hintrl::rl
