#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <string_view>

#include "afm/baselines.hpp"
#include "afm/config.hpp"
#include "afm/gateway.hpp"
#include "afm/tokenizer.hpp"

namespace afm {

// Everything a tool needs to wire up the engine, loaded from a JSON file:
//
//   {
//     "focus":     {"half_life_turns": 12, "tau_high": 0.45, "tau_mid": 0.25,
//                   "compressed_target_tokens": 60, "stub_template": "..."},
//     "tokenizer": {"vocab_path": "...", "per_message_overhead": 0},
//     "baselines": {"keep_recent": 4, "local_budget": 20},
//     "gateway":   {"base_url": "...", "api_key_env": "OPENAI_API_KEY",
//                   "chat_model": "...", "embed_model": "...", "timeout_seconds": 60}
//   }
//
// Unknown keys are rejected with InvalidConfig.
struct Settings {
    FocusConfig focus;
    std::optional<std::filesystem::path> vocab_path;
    std::size_t per_message_overhead = 0;
    RecencyOptions recency;
    GatewayConfig gateway;
};

using EnvLookup = std::function<std::optional<std::string>(std::string_view)>;

// Reads the real process environment.
std::optional<std::string> process_env(std::string_view name);

Settings parse_settings(std::string_view json_text);
Settings load_settings_file(const std::filesystem::path& path);

// AFM_HALF_LIFE_TURNS, AFM_TAU_HIGH, AFM_TAU_MID, AFM_COMPRESSED_TARGET_TOKENS,
// AFM_STUB_TEMPLATE, AFM_VOCAB_PATH, AFM_BASE_URL, AFM_CHAT_MODEL, AFM_EMBED_MODEL.
void apply_env_overrides(Settings& settings, const EnvLookup& env = process_env);

// BPE when a vocabulary path is configured and loads, whitespace otherwise.
// `warning` receives the load error text on fallback.
TokenCounter make_token_counter(const Settings& settings, std::string* warning = nullptr);

}  // namespace afm
