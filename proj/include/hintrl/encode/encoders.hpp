#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hintrl/env/types.hpp"

namespace hintrl::encode {

enum class EncodingKind : int {
    AsciiGrid = 0,
    NaturalLanguage = 1,
    TupleList = 2,
    RelativeDescription = 3,
};

const char* encoding_name(EncodingKind k);
std::optional<EncodingKind> encoding_from_name(const std::string& name);

struct EncodedState {
    EncodingKind kind = EncodingKind::AsciiGrid;
    std::string text;
    // symbol -> meaning, ascii only, in the order the legend is printed
    std::vector<std::pair<std::string, std::string>> legend;
};

// All four encoders are pure: identical inputs give byte-identical text.
EncodedState encode_ascii(const env::WorldState& state, const env::Mission& mission);
EncodedState encode_natural(const env::WorldState& state, const env::Mission& mission);
EncodedState encode_tuples(const env::WorldState& state, const env::Mission& mission);
EncodedState encode_relative(const env::WorldState& state, const env::Mission& mission);

EncodedState encode(EncodingKind kind, const env::WorldState& state, const env::Mission& mission);

}  // namespace hintrl::encode
