#include "hintrl/rl/checkpoint.hpp"

#include <fstream>

#include "hintrl/util/error.hpp"

namespace hintrl::rl {

using util::ConfigError;

void save_checkpoint(const std::string& path, const PolicyNet& net, const FeatureSpec& spec,
                     const nlohmann::json& meta) {
    const Eigen::VectorXd flat = net.flat_parameters();
    nlohmann::json j = {
        {"version", kCheckpointVersion},
        {"net", {{"input_dim", net.config().input_dim}, {"hidden", net.config().hidden},
                 {"actions", net.config().actions}}},
        {"feature", {{"mission_text", spec.mission_text}, {"dim", spec.dim()}}},
        {"params", std::vector<double>(flat.data(), flat.data() + flat.size())},
        {"meta", meta},
    };
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write checkpoint: " + path);
    out << j.dump();
}

Checkpoint load_checkpoint(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read checkpoint: " + path);
    nlohmann::json j = nlohmann::json::parse(in, nullptr, false);
    if (j.is_discarded()) throw ConfigError("checkpoint is not valid JSON: " + path);
    if (j.value("version", -1) != kCheckpointVersion) {
        throw ConfigError("unsupported checkpoint version in " + path);
    }
    Checkpoint ckpt;
    ckpt.net_config.input_dim = j.at("net").at("input_dim").get<int>();
    ckpt.net_config.hidden = j.at("net").at("hidden").get<std::vector<int>>();
    ckpt.net_config.actions = j.at("net").at("actions").get<int>();
    ckpt.feature_spec.mission_text = j.at("feature").at("mission_text").get<bool>();
    const auto params = j.at("params").get<std::vector<double>>();
    ckpt.params = Eigen::Map<const Eigen::VectorXd>(params.data(), static_cast<Eigen::Index>(params.size()));
    ckpt.meta = j.value("meta", nlohmann::json::object());

    if (ckpt.feature_spec.dim() != ckpt.net_config.input_dim) {
        throw ConfigError("checkpoint feature dim disagrees with network input dim: " + path);
    }
    return ckpt;
}

PolicyNet restore_net(const Checkpoint& ckpt, int expected_input_dim) {
    if (expected_input_dim >= 0 && expected_input_dim != ckpt.net_config.input_dim) {
        throw ConfigError("checkpoint input dim " + std::to_string(ckpt.net_config.input_dim) +
                          " does not match expected feature dim " + std::to_string(expected_input_dim));
    }
    PolicyNet net(ckpt.net_config, 0);
    net.set_flat_parameters(ckpt.params);
    return net;
}

}  // namespace hintrl::rl
