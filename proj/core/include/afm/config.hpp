#pragma once

#include <cstddef>
#include <optional>
#include <string>

#include "afm/model.hpp"

namespace afm {

inline constexpr std::string_view kDefaultStubTemplate = "[ref msg #{id}: {role}]";

struct FocusConfig {
    double half_life_turns = 12.0;
    double tau_high = 0.45;
    double tau_mid = 0.25;
    std::size_t compressed_target_tokens = 60;
    // "{id}" and "{role}" are substituted.
    std::string stub_template{kDefaultStubTemplate};

    // Throws InvalidConfig on tau_mid >= tau_high, h <= 0, thresholds outside
    // [0,1] or a zero compression target.
    void validate() const;
};

struct ConfigOverrides {
    std::optional<double> half_life_turns;
    std::optional<double> tau_high;
    std::optional<double> tau_mid;
    std::optional<std::size_t> compressed_target_tokens;
    std::optional<std::string> stub_template;
};

FocusConfig new_config(const ConfigOverrides& overrides = {});

std::string render_stub(const FocusConfig& config, const Message& message);

}  // namespace afm
