#include "afm/config.hpp"

#include "afm/error.hpp"
#include "text_util.hpp"

namespace afm {

void FocusConfig::validate() const {
    if (!(half_life_turns > 0.0)) {
        throw InvalidConfig("half_life_turns must be positive");
    }
    if (tau_high < 0.0 || tau_high > 1.0 || tau_mid < 0.0 || tau_mid > 1.0) {
        throw InvalidConfig("thresholds must lie in [0, 1]");
    }
    if (!(tau_mid < tau_high)) {
        throw InvalidConfig("tau_mid must be below tau_high");
    }
    if (compressed_target_tokens == 0) {
        throw InvalidConfig("compressed_target_tokens must be positive");
    }
}

FocusConfig new_config(const ConfigOverrides& overrides) {
    FocusConfig config;
    if (overrides.half_life_turns) config.half_life_turns = *overrides.half_life_turns;
    if (overrides.tau_high) config.tau_high = *overrides.tau_high;
    if (overrides.tau_mid) config.tau_mid = *overrides.tau_mid;
    if (overrides.compressed_target_tokens) {
        config.compressed_target_tokens = *overrides.compressed_target_tokens;
    }
    if (overrides.stub_template) config.stub_template = *overrides.stub_template;
    config.validate();
    return config;
}

std::string render_stub(const FocusConfig& config, const Message& message) {
    std::string stub = config.stub_template;
    detail::replace_all(stub, "{id}", std::to_string(message.id));
    detail::replace_all(stub, "{role}", to_string(message.role));
    return stub;
}

}  // namespace afm
