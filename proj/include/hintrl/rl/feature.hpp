#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "hintrl/hints/types.hpp"

namespace hintrl::rl {

// Flat feature layout:
//   7x7 view one-hot (11 kind + 6 color + 3 state = 20 per cell -> 980)
//   hint action one-hot (8: actions 0-6 plus neutral 7)
//   subgoal one-hot (8)
//   hint_available (1)
//   carrying one-hot (7: none + 6 object kinds)
//   optional mission bag-of-words over the closed mission vocabulary
struct FeatureSpec {
    bool mission_text = false;  // the "+Text" condition

    int dim() const;

    static constexpr int kViewDim =
        env::Observation::kViewSize * env::Observation::kViewSize *
        (env::kNumViewKinds + env::kNumColors + env::kNumViewStates);
    static constexpr int kHintActionDim = env::kNumActions + 1;
    static constexpr int kSubgoalDim = hints::kNumSubgoals;
    static constexpr int kCarryDim = 1 + env::kNumObjectKinds;
    static constexpr int kBaseDim = kViewDim + kHintActionDim + kSubgoalDim + 1 + kCarryDim;
};

// Closed mission vocabulary: color terms, object kinds, location phrases.
const std::vector<std::string>& mission_vocabulary();

Eigen::VectorXd featurize(const hints::EnhancedObservation& obs, const FeatureSpec& spec);

}  // namespace hintrl::rl
