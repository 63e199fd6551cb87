#include "hintrl/rl/net.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "hintrl/util/error.hpp"

namespace hintrl::rl {

namespace {

// Deterministic standard normal via Box-Muller on the project RNG.
double gaussian(util::Rng& rng) {
    double u1 = rng.unit();
    while (u1 <= 0.0) u1 = rng.unit();
    const double u2 = rng.unit();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

// Orthogonal initialization, the usual choice for small policy-gradient MLPs.
Eigen::MatrixXd orthogonal(int rows, int cols, double gain, util::Rng& rng) {
    const int n = std::max(rows, cols);
    Eigen::MatrixXd a(n, n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) a(r, c) = gaussian(rng);
    }
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
    Eigen::MatrixXd q = qr.householderQ();
    const Eigen::MatrixXd r_mat = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int c = 0; c < n; ++c) {
        if (r_mat(c, c) < 0) q.col(c) = -q.col(c);
    }
    return gain * q.topLeftCorner(rows, cols);
}

}  // namespace

PolicyNet::PolicyNet(NetConfig cfg, uint64_t seed) : config_(std::move(cfg)) {
    util::Rng rng(seed);
    int prev = config_.input_dim;
    for (int width : config_.hidden) {
        weights.push_back(orthogonal(width, prev, std::sqrt(2.0), rng));
        biases.push_back(Eigen::VectorXd::Zero(width));
        prev = width;
    }
    weights.push_back(orthogonal(config_.actions, prev, 0.01, rng));  // policy head
    biases.push_back(Eigen::VectorXd::Zero(config_.actions));
    weights.push_back(orthogonal(1, prev, 1.0, rng));  // value head
    biases.push_back(Eigen::VectorXd::Zero(1));
}

PolicyNet::Forward PolicyNet::forward(const Eigen::MatrixXd& inputs) const {
    Forward fwd;
    fwd.activations.reserve(config_.hidden.size() + 1);
    fwd.activations.push_back(inputs);
    for (size_t i = 0; i < config_.hidden.size(); ++i) {
        Eigen::MatrixXd z =
            (fwd.activations.back() * weights[i].transpose()).rowwise() + biases[i].transpose();
        fwd.activations.push_back(z.array().tanh().matrix());
    }
    const Eigen::MatrixXd& top = fwd.activations.back();
    const size_t pi = config_.hidden.size();
    const size_t vi = pi + 1;
    fwd.logits = (top * weights[pi].transpose()).rowwise() + biases[pi].transpose();
    fwd.values = (top * weights[vi].transpose()).col(0).array() + biases[vi](0);
    return fwd;
}

PolicyNet::Gradients PolicyNet::backward(const Forward& fwd, const Eigen::MatrixXd& dlogits,
                                         const Eigen::VectorXd& dvalues) const {
    Gradients g;
    g.weights.resize(weights.size());
    g.biases.resize(biases.size());

    const size_t pi = config_.hidden.size();
    const size_t vi = pi + 1;
    const Eigen::MatrixXd& top = fwd.activations.back();

    g.weights[pi] = dlogits.transpose() * top;
    g.biases[pi] = dlogits.colwise().sum().transpose();
    g.weights[vi] = dvalues.transpose() * top;
    g.biases[vi] = Eigen::VectorXd::Constant(1, dvalues.sum());

    Eigen::MatrixXd dact = dlogits * weights[pi] + dvalues * weights[vi];
    for (int i = static_cast<int>(config_.hidden.size()) - 1; i >= 0; --i) {
        const Eigen::MatrixXd& out = fwd.activations[static_cast<size_t>(i) + 1];
        const Eigen::MatrixXd dz = dact.array() * (1.0 - out.array().square());
        g.weights[static_cast<size_t>(i)] = dz.transpose() * fwd.activations[static_cast<size_t>(i)];
        g.biases[static_cast<size_t>(i)] = dz.colwise().sum().transpose();
        if (i > 0) dact = dz * weights[static_cast<size_t>(i)];
    }
    return g;
}

double PolicyNet::Gradients::squared_norm() const {
    double total = 0.0;
    for (const auto& w : weights) total += w.squaredNorm();
    for (const auto& b : biases) total += b.squaredNorm();
    return total;
}

void PolicyNet::Gradients::scale(double factor) {
    for (auto& w : weights) w *= factor;
    for (auto& b : biases) b *= factor;
}

int PolicyNet::parameter_count() const {
    int count = 0;
    for (const auto& w : weights) count += static_cast<int>(w.size());
    for (const auto& b : biases) count += static_cast<int>(b.size());
    return count;
}

Eigen::VectorXd PolicyNet::flat_parameters() const {
    Eigen::VectorXd flat(parameter_count());
    Eigen::Index at = 0;
    for (const auto& w : weights) {
        flat.segment(at, w.size()) = Eigen::Map<const Eigen::VectorXd>(w.data(), w.size());
        at += w.size();
    }
    for (const auto& b : biases) {
        flat.segment(at, b.size()) = b;
        at += b.size();
    }
    return flat;
}

void PolicyNet::set_flat_parameters(const Eigen::VectorXd& flat) {
    if (flat.size() != parameter_count()) {
        throw util::ConfigError("parameter vector size mismatch: expected " +
                                std::to_string(parameter_count()) + ", got " +
                                std::to_string(flat.size()));
    }
    Eigen::Index at = 0;
    for (auto& w : weights) {
        Eigen::Map<Eigen::VectorXd>(w.data(), w.size()) = flat.segment(at, w.size());
        at += w.size();
    }
    for (auto& b : biases) {
        b = flat.segment(at, b.size());
        at += b.size();
    }
}

Eigen::MatrixXd log_softmax(const Eigen::MatrixXd& logits) {
    Eigen::MatrixXd shifted = logits.colwise() - logits.rowwise().maxCoeff();
    const Eigen::VectorXd log_z = shifted.array().exp().rowwise().sum().log();
    return shifted.colwise() - log_z;
}

ActResult sample_row(const Eigen::RowVectorXd& logits, util::Rng& rng) {
    const Eigen::RowVectorXd logp = log_softmax(logits);
    const Eigen::RowVectorXd probs = logp.array().exp();
    const double u = rng.unit();
    double acc = 0.0;
    int action = static_cast<int>(probs.size()) - 1;
    for (int i = 0; i < probs.size(); ++i) {
        acc += probs(i);
        if (u < acc) {
            action = i;
            break;
        }
    }
    return {action, logp(action), 0.0};
}

ActResult act(const PolicyNet& net, const Eigen::VectorXd& feature, util::Rng& rng) {
    const auto fwd = net.forward(feature.transpose());
    ActResult r = sample_row(fwd.logits.row(0), rng);
    r.value = fwd.values(0);
    return r;
}

int act_greedy(const PolicyNet& net, const Eigen::VectorXd& feature) {
    const auto fwd = net.forward(feature.transpose());
    Eigen::Index best = 0;
    fwd.logits.row(0).maxCoeff(&best);
    return static_cast<int>(best);
}

}  // namespace hintrl::rl
