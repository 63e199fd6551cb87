#include "hintrl/rl/ppo.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "hintrl/rl/gae.hpp"
#include "hintrl/util/error.hpp"

namespace hintrl::rl {

using util::ConfigError;
using util::UsageError;

void PPOConfig::validate() const {
    if (gamma < 0.0 || gamma > 1.0) throw ConfigError("ppo.gamma must be in [0,1]");
    if (lam < 0.0 || lam > 1.0) throw ConfigError("ppo.lam must be in [0,1]");
    if (clip <= 0.0) throw ConfigError("ppo.clip must be > 0");
    if (lr <= 0.0) throw ConfigError("ppo.lr must be > 0");
    if (epochs < 1) throw ConfigError("ppo.epochs must be >= 1");
    if (minibatch < 1) throw ConfigError("ppo.minibatch must be >= 1");
    if (horizon < 1) throw ConfigError("ppo.horizon must be >= 1");
    if (workers < 1) throw ConfigError("ppo.workers must be >= 1");
    if (value_coef < 0.0) throw ConfigError("ppo.value_coef must be >= 0");
    if (entropy_coef < 0.0) throw ConfigError("ppo.entropy_coef must be >= 0");
    if (grad_clip <= 0.0) throw ConfigError("ppo.grad_clip must be > 0");
    if (hidden.empty()) throw ConfigError("ppo.hidden must name at least one layer width");
    for (int w : hidden) {
        if (w < 1) throw ConfigError("ppo.hidden widths must be >= 1");
    }
}

RolloutBuffer::RolloutBuffer(int workers, int horizon, int feature_dim)
    : workers_(workers),
      horizon_(horizon),
      counts_(static_cast<size_t>(workers), 0),
      features_(workers * horizon, feature_dim),
      actions_(static_cast<size_t>(workers * horizon), 0),
      log_probs_(workers * horizon),
      values_(workers * horizon),
      rewards_(workers * horizon),
      dones_(static_cast<size_t>(workers * horizon), 0) {}

void RolloutBuffer::add(int worker, const Eigen::VectorXd& feature, int action, double log_prob,
                        double value, double reward, bool done) {
    if (worker < 0 || worker >= workers_) throw UsageError("RolloutBuffer.add: bad worker index");
    int& count = counts_[static_cast<size_t>(worker)];
    if (count >= horizon_) throw UsageError("RolloutBuffer.add: worker lane already full");
    const int row = worker * horizon_ + count;
    features_.row(row) = feature.transpose();
    actions_[static_cast<size_t>(row)] = action;
    log_probs_(row) = log_prob;
    values_(row) = value;
    rewards_(row) = reward;
    dones_[static_cast<size_t>(row)] = done ? 1 : 0;
    ++count;
}

bool RolloutBuffer::full() const {
    for (int c : counts_) {
        if (c < horizon_) return false;
    }
    return true;
}

void RolloutBuffer::finish(const Eigen::VectorXd& bootstrap_values, double gamma, double lam) {
    if (!full()) throw UsageError("RolloutBuffer.finish: buffer not full");
    if (bootstrap_values.size() != workers_) {
        throw UsageError("RolloutBuffer.finish: one bootstrap value per worker required");
    }
    advantages_.resize(size());
    returns_.resize(size());
    for (int w = 0; w < workers_; ++w) {
        const int base = w * horizon_;
        const std::vector<uint8_t> lane_dones(dones_.begin() + base, dones_.begin() + base + horizon_);
        const GaeResult g = compute_gae(rewards_.segment(base, horizon_), values_.segment(base, horizon_),
                                        lane_dones, gamma, lam, bootstrap_values(w));
        advantages_.segment(base, horizon_) = g.advantages;
        returns_.segment(base, horizon_) = g.returns;
    }
    finished_ = true;
}

void RolloutBuffer::clear() {
    std::fill(counts_.begin(), counts_.end(), 0);
    finished_ = false;
}

AdamOptimizer::AdamOptimizer(double lr, double beta1, double beta2, double eps)
    : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

void AdamOptimizer::step(PolicyNet& net, const PolicyNet::Gradients& grads) {
    if (m_w_.empty()) {
        for (const auto& w : net.weights) {
            m_w_.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
            v_w_.push_back(Eigen::MatrixXd::Zero(w.rows(), w.cols()));
        }
        for (const auto& b : net.biases) {
            m_b_.push_back(Eigen::VectorXd::Zero(b.size()));
            v_b_.push_back(Eigen::VectorXd::Zero(b.size()));
        }
    }
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (size_t i = 0; i < net.weights.size(); ++i) {
        m_w_[i] = beta1_ * m_w_[i] + (1.0 - beta1_) * grads.weights[i];
        v_w_[i] = beta2_ * v_w_[i].array() + (1.0 - beta2_) * grads.weights[i].array().square();
        net.weights[i].array() -=
            lr_ * (m_w_[i].array() / bc1) / ((v_w_[i].array() / bc2).sqrt() + eps_);
    }
    for (size_t i = 0; i < net.biases.size(); ++i) {
        m_b_[i] = beta1_ * m_b_[i] + (1.0 - beta1_) * grads.biases[i];
        v_b_[i] = beta2_ * v_b_[i].array() + (1.0 - beta2_) * grads.biases[i].array().square();
        net.biases[i].array() -=
            lr_ * (m_b_[i].array() / bc1) / ((v_b_[i].array() / bc2).sqrt() + eps_);
    }
}

namespace {

struct LossWork {
    BatchLoss loss;
    Eigen::MatrixXd dlogits;
    Eigen::VectorXd dvalues;
    PolicyNet::Forward fwd;
};

LossWork ppo_loss_core(const PolicyNet& net, const Eigen::MatrixXd& features,
                       const std::vector<int>& actions, const Eigen::VectorXd& old_log_probs,
                       const Eigen::VectorXd& advantages, const Eigen::VectorXd& returns,
                       const PPOConfig& cfg, bool want_grad) {
    const Eigen::Index n = features.rows();
    LossWork work;
    work.fwd = net.forward(features);
    const Eigen::MatrixXd logp = log_softmax(work.fwd.logits);
    const Eigen::MatrixXd probs = logp.array().exp();
    const double inv_n = 1.0 / static_cast<double>(n);

    if (want_grad) {
        work.dlogits = Eigen::MatrixXd::Zero(n, net.config().actions);
        work.dvalues.resize(n);
    }

    double policy_sum = 0.0, entropy_sum = 0.0, value_sum = 0.0;
    long clipped = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        const int a = actions[static_cast<size_t>(i)];
        const double adv = advantages(i);
        const double ratio = std::exp(logp(i, a) - old_log_probs(i));
        const double clamped = std::clamp(ratio, 1.0 - cfg.clip, 1.0 + cfg.clip);
        const double surr1 = ratio * adv;
        const double surr2 = clamped * adv;
        policy_sum += std::min(surr1, surr2);
        if (std::abs(ratio - 1.0) > cfg.clip) ++clipped;

        const double entropy_i = -(probs.row(i).array() * logp.row(i).array()).sum();
        entropy_sum += entropy_i;

        const double verr = work.fwd.values(i) - returns(i);
        value_sum += verr * verr;

        if (want_grad) {
            // d(-mean(min))/d ratio: the unclipped branch contributes A;
            // the clipped branch contributes A only while inside the window.
            double dmin_dratio;
            if (surr1 <= surr2) {
                dmin_dratio = adv;
            } else {
                dmin_dratio = (ratio > 1.0 - cfg.clip && ratio < 1.0 + cfg.clip) ? adv : 0.0;
            }
            const double dloss_dlogp_a = -inv_n * dmin_dratio * ratio;
            work.dlogits.row(i) = -dloss_dlogp_a * probs.row(i);
            work.dlogits(i, a) += dloss_dlogp_a;
            // entropy bonus: d(-c_e * mean(H))/dz_k = c_e/n * p_k (logp_k + H)
            work.dlogits.row(i).array() +=
                cfg.entropy_coef * inv_n * probs.row(i).array() * (logp.row(i).array() + entropy_i);
            work.dvalues(i) = cfg.value_coef * 2.0 * verr * inv_n;
        }
    }

    work.loss.policy = -policy_sum * inv_n;
    work.loss.value = value_sum * inv_n;
    work.loss.entropy = entropy_sum * inv_n;
    work.loss.clip_fraction = static_cast<double>(clipped) * inv_n;
    work.loss.total =
        work.loss.policy + cfg.value_coef * work.loss.value - cfg.entropy_coef * work.loss.entropy;
    return work;
}

}  // namespace

BatchLoss ppo_loss(const PolicyNet& net, const Eigen::MatrixXd& features,
                   const std::vector<int>& actions, const Eigen::VectorXd& old_log_probs,
                   const Eigen::VectorXd& advantages, const Eigen::VectorXd& returns,
                   const PPOConfig& cfg) {
    return ppo_loss_core(net, features, actions, old_log_probs, advantages, returns, cfg, false).loss;
}

std::pair<BatchLoss, PolicyNet::Gradients> ppo_loss_grad(
    const PolicyNet& net, const Eigen::MatrixXd& features, const std::vector<int>& actions,
    const Eigen::VectorXd& old_log_probs, const Eigen::VectorXd& advantages,
    const Eigen::VectorXd& returns, const PPOConfig& cfg) {
    LossWork work =
        ppo_loss_core(net, features, actions, old_log_probs, advantages, returns, cfg, true);
    PolicyNet::Gradients grads = net.backward(work.fwd, work.dlogits, work.dvalues);
    return {work.loss, std::move(grads)};
}

UpdateStats ppo_update(PolicyNet& net, AdamOptimizer& adam, RolloutBuffer& buffer,
                       const PPOConfig& cfg, util::Rng& rng) {
    if (!buffer.finished()) {
        throw UsageError("ppo_update: buffer advantages not computed (call finish first)");
    }
    const int n = buffer.size();

    Eigen::VectorXd adv = buffer.advantages();
    const double mean = adv.mean();
    adv.array() -= mean;
    const double stdev = std::sqrt(adv.squaredNorm() / static_cast<double>(n));
    adv /= stdev + 1e-8;

    std::vector<int> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0);

    UpdateStats stats;
    long batches = 0;
    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (int i = n - 1; i > 0; --i) {
            std::swap(order[static_cast<size_t>(i)], order[static_cast<size_t>(rng.below(i + 1))]);
        }
        for (int start = 0; start < n; start += cfg.minibatch) {
            const int count = std::min(cfg.minibatch, n - start);
            Eigen::MatrixXd mb_x(count, buffer.features().cols());
            std::vector<int> mb_a(static_cast<size_t>(count));
            Eigen::VectorXd mb_logp(count), mb_adv(count), mb_ret(count);
            for (int j = 0; j < count; ++j) {
                const int idx = order[static_cast<size_t>(start + j)];
                mb_x.row(j) = buffer.features().row(idx);
                mb_a[static_cast<size_t>(j)] = buffer.actions()[static_cast<size_t>(idx)];
                mb_logp(j) = buffer.log_probs()(idx);
                mb_adv(j) = adv(idx);
                mb_ret(j) = buffer.returns()(idx);
            }
            auto [loss, grads] = ppo_loss_grad(net, mb_x, mb_a, mb_logp, mb_adv, mb_ret, cfg);
            if (!std::isfinite(loss.total)) {
                std::ostringstream dump;
                dump << "ppo_update: non-finite loss (policy=" << loss.policy
                     << ", value=" << loss.value << ", entropy=" << loss.entropy
                     << ", batch=" << batches << ")";
                throw std::runtime_error(dump.str());
            }
            const double norm = std::sqrt(grads.squared_norm());
            if (norm > cfg.grad_clip && norm > 0.0) grads.scale(cfg.grad_clip / norm);
            adam.step(net, grads);

            stats.policy_loss += loss.policy;
            stats.value_loss += loss.value;
            stats.entropy += loss.entropy;
            stats.clip_fraction += loss.clip_fraction;
            stats.grad_norm += norm;
            ++batches;
        }
    }
    const double inv = batches > 0 ? 1.0 / static_cast<double>(batches) : 0.0;
    stats.policy_loss *= inv;
    stats.value_loss *= inv;
    stats.entropy *= inv;
    stats.clip_fraction *= inv;
    stats.grad_norm *= inv;

    buffer.clear();
    return stats;
}

}  // namespace hintrl::rl
