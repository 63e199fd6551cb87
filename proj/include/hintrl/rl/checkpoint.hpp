#pragma once

#include <string>

#include "json.hpp"

#include "hintrl/rl/feature.hpp"
#include "hintrl/rl/net.hpp"

namespace hintrl::rl {

inline constexpr int kCheckpointVersion = 1;

struct Checkpoint {
    NetConfig net_config;
    FeatureSpec feature_spec;
    Eigen::VectorXd params;
    nlohmann::json meta;
};

void save_checkpoint(const std::string& path, const PolicyNet& net, const FeatureSpec& spec,
                     const nlohmann::json& meta = nlohmann::json::object());

// Throws ConfigError on unreadable files, version mismatch or inconsistent
// parameter counts.
Checkpoint load_checkpoint(const std::string& path);

// Rebuilds the network; `expected_input_dim` (when >= 0) guards against
// loading a checkpoint whose feature layout does not match the caller's.
PolicyNet restore_net(const Checkpoint& ckpt, int expected_input_dim = -1);

}  // namespace hintrl::rl
