#include "hintrl/rl/feature.hpp"

namespace hintrl::rl {

const std::vector<std::string>& mission_vocabulary() {
    static const std::vector<std::string> vocab = {
        // colors
        "red", "green", "blue", "purple", "yellow", "grey",
        // object kinds
        "key", "ball", "box", "door",
        // location phrases
        "in the top-left corner", "in the top-right corner", "in the bottom-left corner",
        "in the bottom-right corner", "in the middle of the room", "at the top of the room",
        "at the bottom of the room", "on the left side", "on the right side"};
    return vocab;
}

int FeatureSpec::dim() const {
    return kBaseDim + (mission_text ? static_cast<int>(mission_vocabulary().size()) : 0);
}

Eigen::VectorXd featurize(const hints::EnhancedObservation& obs, const FeatureSpec& spec) {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(spec.dim());

    constexpr int per_cell = env::kNumViewKinds + env::kNumColors + env::kNumViewStates;
    for (size_t i = 0; i < obs.base.view.size(); ++i) {
        const auto& cell = obs.base.view[i];
        const int base = static_cast<int>(i) * per_cell;
        out[base + cell[0]] = 1.0;
        out[base + env::kNumViewKinds + cell[1]] = 1.0;
        out[base + env::kNumViewKinds + env::kNumColors + cell[2]] = 1.0;
    }

    int offset = FeatureSpec::kViewDim;
    out[offset + obs.hint.action] = 1.0;
    offset += FeatureSpec::kHintActionDim;
    out[offset + static_cast<int>(obs.hint.subgoal)] = 1.0;
    offset += FeatureSpec::kSubgoalDim;
    out[offset] = obs.hint_available ? 1.0 : 0.0;
    offset += 1;
    out[offset + (obs.base.carrying ? 1 + *obs.base.carrying : 0)] = 1.0;
    offset += FeatureSpec::kCarryDim;

    if (spec.mission_text) {
        const auto& vocab = mission_vocabulary();
        for (size_t i = 0; i < vocab.size(); ++i) {
            if (obs.base.mission_text.find(vocab[i]) != std::string::npos) {
                out[offset + static_cast<int>(i)] = 1.0;
            }
        }
    }
    return out;
}

}  // namespace hintrl::rl
