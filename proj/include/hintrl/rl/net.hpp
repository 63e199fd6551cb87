#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "hintrl/util/rng.hpp"

namespace hintrl::rl {

struct NetConfig {
    int input_dim = 0;
    std::vector<int> hidden = {128, 128};
    int actions = 7;
};

// Feedforward actor-critic: tanh hidden layers with two linear heads, action
// logits and state value. Parameters are plain Eigen matrices; layer i maps
// activations[i] -> activations[i+1], followed by the policy head and the
// value head (last two entries of `weights`).
class PolicyNet {
public:
    PolicyNet(NetConfig cfg, uint64_t seed);

    struct Forward {
        Eigen::MatrixXd logits;                    // N x actions
        Eigen::VectorXd values;                    // N
        std::vector<Eigen::MatrixXd> activations;  // [X, tanh1, ..., tanhH]
    };
    Forward forward(const Eigen::MatrixXd& inputs) const;

    struct Gradients {
        std::vector<Eigen::MatrixXd> weights;
        std::vector<Eigen::VectorXd> biases;

        double squared_norm() const;
        void scale(double factor);
    };
    // Backprop of a summed scalar loss; dlogits and dvalues carry any batch
    // averaging factors already.
    Gradients backward(const Forward& fwd, const Eigen::MatrixXd& dlogits,
                       const Eigen::VectorXd& dvalues) const;

    int parameter_count() const;
    Eigen::VectorXd flat_parameters() const;
    void set_flat_parameters(const Eigen::VectorXd& flat);

    const NetConfig& config() const { return config_; }

    std::vector<Eigen::MatrixXd> weights;  // each out x in
    std::vector<Eigen::VectorXd> biases;

private:
    NetConfig config_;
};

// Row-wise numerically stable log-softmax.
Eigen::MatrixXd log_softmax(const Eigen::MatrixXd& logits);

struct ActResult {
    int action = 0;
    double log_prob = 0.0;
    double value = 0.0;
};

// Samples an action from softmax(logits) for a single feature vector.
ActResult act(const PolicyNet& net, const Eigen::VectorXd& feature, util::Rng& rng);

// Greedy (argmax) action for evaluation.
int act_greedy(const PolicyNet& net, const Eigen::VectorXd& feature);

// Sample from one precomputed logits row.
ActResult sample_row(const Eigen::RowVectorXd& logits, util::Rng& rng);

}  // namespace hintrl::rl
