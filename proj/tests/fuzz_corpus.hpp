#pragma once

#include <string>
#include <vector>

#include "hintrl/hints/types.hpp"

namespace test_util {

struct FuzzCase {
    std::string input;
    bool ok;
    int action;                 // when ok
    hintrl::hints::Subgoal subgoal;  // when ok
};

// The chain-of-thought response shown in the paper's figure, verbatim.
inline const std::string kFigureResponse =
    "Prediction(\n"
    "  reasoning=\"The agent's mission is to go to the purple key. The purple key is located to "
    "the north of the agent. Since the agent is facing north, it first needs to move forward "
    "towards the purple key. The action to move the agent forward would be the most efficient "
    "first step.\",\n"
    "  primitive_action=2,\n"
    "  subgoal=GoNextToSubgoal\n"
    ")";

// 50 mutated response variants with hand labels.
inline std::vector<FuzzCase> fuzz_corpus() {
    using hintrl::hints::Subgoal;
    const std::string r = "reasoning=\"go forward\"";
    return {
        // 1-8: well-formed variants
        {kFigureResponse, true, 2, Subgoal::GoNextTo},
        {"Prediction(" + r + ", primitive_action=2, subgoal=GoNextToSubgoal)", true, 2, Subgoal::GoNextTo},
        {"Prediction(primitive_action=2, subgoal=GoNextToSubgoal, " + r + ")", true, 2, Subgoal::GoNextTo},
        {"Prediction(subgoal=GoNextToSubgoal, " + r + ", primitive_action=2)", true, 2, Subgoal::GoNextTo},
        {"Prediction(primitive_action=0, subgoal=none)", true, 0, Subgoal::None},
        {"Prediction(primitive_action=6, subgoal=done)", true, 6, Subgoal::Done},
        {"Prediction(primitive_action=3, subgoal=PickupSubgoal)", true, 3, Subgoal::Pickup},
        {"Prediction(primitive_action=5, subgoal=OpenSubgoal)", true, 5, Subgoal::Open},
        // 9-14: quoting and whitespace tolerance
        {"Prediction(primitive_action=2, subgoal=\"GoNextToSubgoal\")", true, 2, Subgoal::GoNextTo},
        {"Prediction(primitive_action=2, subgoal='GoNextToSubgoal')", true, 2, Subgoal::GoNextTo},
        {"Prediction( primitive_action = 2 , subgoal = GoNextToSubgoal )", true, 2, Subgoal::GoNextTo},
        {"Prediction(\n\tprimitive_action=2,\n\tsubgoal=GoNextToSubgoal\n)", true, 2, Subgoal::GoNextTo},
        {"Prediction(primitive_action=\"2\", subgoal=GoNextToSubgoal)", true, 2, Subgoal::GoNextTo},
        {"Prediction(primitive_action=2, subgoal=gonexttosubgoal)", true, 2, Subgoal::GoNextTo},
        // 15-20: surrounding prose and multiple blocks
        {"Let me think. The key is north.\n" + kFigureResponse + "\nHope that helps!", true, 2,
         Subgoal::GoNextTo},
        {"Prediction(primitive_action=1, subgoal=none) was wrong, so: Prediction(primitive_action=2, "
         "subgoal=GoNextToSubgoal)",
         true, 2, Subgoal::GoNextTo},
        {"I predict Prediction(primitive_action=4, subgoal=DropSubgoal)", true, 4, Subgoal::Drop},
        {"```\nPrediction(primitive_action=2, subgoal=GoNextToSubgoal)\n```", true, 2, Subgoal::GoNextTo},
        {"The plan: Prediction(reasoning=\"turn (left), then go\", primitive_action=0, "
         "subgoal=GoNextToSubgoal)",
         true, 0, Subgoal::GoNextTo},
        {"Prediction(reasoning=\"commas, such as these, are fine\", primitive_action=2, "
         "subgoal=GoNextToSubgoal)",
         true, 2, Subgoal::GoNextTo},
        // 21-26: reasoning payload hazards
        {"Prediction(reasoning=\"escaped \\\" quote\", primitive_action=2, subgoal=GoNextToSubgoal)", true,
         2, Subgoal::GoNextTo},
        {"Prediction(reasoning=\"nested (parens (deep))\", primitive_action=2, subgoal=GoNextToSubgoal)",
         true, 2, Subgoal::GoNextTo},
        {"Prediction(reasoning=\"unbalanced ( paren\", primitive_action=2, subgoal=GoNextToSubgoal)", true,
         2, Subgoal::GoNextTo},
        {"Prediction(reasoning='single quoted', primitive_action=2, subgoal=GoNextToSubgoal)", true, 2,
         Subgoal::GoNextTo},
        {"Prediction(reasoning=\"\", primitive_action=2, subgoal=GoNextToSubgoal)", true, 2,
         Subgoal::GoNextTo},
        {"Prediction(reasoning=\"multi\nline\nthought\", primitive_action=2, subgoal=GoNextToSubgoal)",
         true, 2, Subgoal::GoNextTo},
        // 27-30: missing / extra fields
        {"Prediction(primitive_action=2)", true, 2, Subgoal::None},
        {"Prediction(primitive_action=2, subgoal=GoNextToSubgoal, confidence=0.9)", true, 2,
         Subgoal::GoNextTo},
        {"Prediction(action=2, subgoal=GoNextToSubgoal)", false, 0, Subgoal::None},
        {"Prediction(" + r + ", subgoal=GoNextToSubgoal)", false, 0, Subgoal::None},
        // 31-36: bad action values
        {"Prediction(primitive_action=9, subgoal=done)", false, 0, Subgoal::None},
        {"Prediction(primitive_action=7, subgoal=none)", false, 0, Subgoal::None},
        {"Prediction(primitive_action=-1, subgoal=none)", false, 0, Subgoal::None},
        {"Prediction(primitive_action=2.5, subgoal=none)", false, 0, Subgoal::None},
        {"Prediction(primitive_action=two, subgoal=none)", false, 0, Subgoal::None},
        {"Prediction(primitive_action=, subgoal=none)", false, 0, Subgoal::None},
        // 37-40: bad subgoals
        {"Prediction(primitive_action=2, subgoal=FlySubgoal)", false, 0, Subgoal::None},
        {"Prediction(primitive_action=2, subgoal=GoNextTo)", false, 0, Subgoal::None},
        {"Prediction(primitive_action=2, subgoal=42)", false, 0, Subgoal::None},
        {"Prediction(primitive_action=2, subgoal=)", false, 0, Subgoal::None},
        // 41-46: structurally broken
        {"", false, 0, Subgoal::None},
        {"no block here at all", false, 0, Subgoal::None},
        {"prediction(primitive_action=2, subgoal=done)", false, 0, Subgoal::None},
        {"Prediction()", false, 0, Subgoal::None},
        {"Prediction", false, 0, Subgoal::None},
        {"PredictionX(primitive_action=2, subgoal=done)", false, 0, Subgoal::None},
        // 47-50: truncation and binary noise
        {"Prediction(primitive_action=2, subgoal=GoNextToSubgoal", true, 2, Subgoal::GoNextTo},
        {"Prediction(" + std::string("reasoning=\"go forward\"") + ", primitive_action=2", true, 2,
         Subgoal::None},
        {std::string("\x01\x02\xff\xfe garbage \x00 bytes", 23), false, 0, Subgoal::None},
        {"Prediction(\xc3\xa9\xc2\xa7=2, primitive_action=2, subgoal=done)", true, 2, Subgoal::Done},
    };
}

}  // namespace test_util
