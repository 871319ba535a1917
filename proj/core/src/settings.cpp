#include "afm/settings.hpp"

#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "afm/error.hpp"
#include "json.hpp"

namespace afm {

using nlohmann::json;

namespace {

void reject_unknown(const json& object, std::string_view section,
                    const std::set<std::string>& known) {
    if (!object.is_object()) {
        throw InvalidConfig(std::string(section) + ": expected an object");
    }
    for (const auto& item : object.items()) {
        if (!known.contains(item.key())) {
            throw InvalidConfig("unknown config key: " + std::string(section) +
                                (section.empty() ? "" : ".") + item.key());
        }
    }
}

double parse_double(std::string_view name, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw InvalidConfig(std::string(name) + ": not a number: " + value);
    }
}

std::size_t parse_size(std::string_view name, const std::string& value) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(value, &used);
        if (used != value.size() || v < 0) throw std::invalid_argument(value);
        return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
        throw InvalidConfig(std::string(name) + ": not a non-negative integer: " + value);
    }
}

}  // namespace

std::optional<std::string> process_env(std::string_view name) {
    const char* value = std::getenv(std::string(name).c_str());
    if (value == nullptr) return std::nullopt;
    return std::string(value);
}

Settings parse_settings(std::string_view json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw InvalidConfig(std::string("malformed config JSON: ") + e.what());
    }
    reject_unknown(root, "", {"focus", "tokenizer", "baselines", "gateway"});

    Settings settings;
    try {
        ConfigOverrides overrides;
        if (root.contains("focus")) {
            const json& focus = root["focus"];
            reject_unknown(focus, "focus",
                           {"half_life_turns", "tau_high", "tau_mid", "compressed_target_tokens",
                            "stub_template"});
            if (focus.contains("half_life_turns")) overrides.half_life_turns = focus["half_life_turns"].get<double>();
            if (focus.contains("tau_high")) overrides.tau_high = focus["tau_high"].get<double>();
            if (focus.contains("tau_mid")) overrides.tau_mid = focus["tau_mid"].get<double>();
            if (focus.contains("compressed_target_tokens")) {
                overrides.compressed_target_tokens = focus["compressed_target_tokens"].get<std::size_t>();
            }
            if (focus.contains("stub_template")) overrides.stub_template = focus["stub_template"].get<std::string>();
        }
        settings.focus = new_config(overrides);

        if (root.contains("tokenizer")) {
            const json& tok = root["tokenizer"];
            reject_unknown(tok, "tokenizer", {"vocab_path", "per_message_overhead"});
            if (tok.contains("vocab_path") && !tok["vocab_path"].is_null()) {
                settings.vocab_path = tok["vocab_path"].get<std::string>();
            }
            settings.per_message_overhead = tok.value("per_message_overhead", std::size_t{0});
        }
        if (root.contains("baselines")) {
            const json& base = root["baselines"];
            reject_unknown(base, "baselines", {"keep_recent", "local_budget"});
            settings.recency.keep_recent = base.value("keep_recent", settings.recency.keep_recent);
            settings.recency.local_budget = base.value("local_budget", settings.recency.local_budget);
            if (settings.recency.local_budget == 0) {
                throw InvalidConfig("baselines.local_budget must be positive");
            }
        }
        if (root.contains("gateway")) {
            const json& gw = root["gateway"];
            reject_unknown(gw, "gateway",
                           {"base_url", "api_key_env", "chat_model", "embed_model", "timeout_seconds"});
            GatewayConfig& g = settings.gateway;
            g.base_url = gw.value("base_url", g.base_url);
            g.api_key_env = gw.value("api_key_env", g.api_key_env);
            g.chat_model = gw.value("chat_model", g.chat_model);
            g.embed_model = gw.value("embed_model", g.embed_model);
            g.timeout_seconds = gw.value("timeout_seconds", g.timeout_seconds);
            if (!(g.timeout_seconds > 0.0)) throw InvalidConfig("gateway.timeout_seconds must be positive");
        }
    } catch (const json::exception& e) {
        throw InvalidConfig(std::string("config value has the wrong type: ") + e.what());
    }
    return settings;
}

Settings load_settings_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidConfig("cannot open config file: " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_settings(buffer.str());
}

void apply_env_overrides(Settings& settings, const EnvLookup& env) {
    ConfigOverrides overrides;
    overrides.half_life_turns = settings.focus.half_life_turns;
    overrides.tau_high = settings.focus.tau_high;
    overrides.tau_mid = settings.focus.tau_mid;
    overrides.compressed_target_tokens = settings.focus.compressed_target_tokens;
    overrides.stub_template = settings.focus.stub_template;

    if (auto v = env("AFM_HALF_LIFE_TURNS")) overrides.half_life_turns = parse_double("AFM_HALF_LIFE_TURNS", *v);
    if (auto v = env("AFM_TAU_HIGH")) overrides.tau_high = parse_double("AFM_TAU_HIGH", *v);
    if (auto v = env("AFM_TAU_MID")) overrides.tau_mid = parse_double("AFM_TAU_MID", *v);
    if (auto v = env("AFM_COMPRESSED_TARGET_TOKENS")) {
        overrides.compressed_target_tokens = parse_size("AFM_COMPRESSED_TARGET_TOKENS", *v);
    }
    if (auto v = env("AFM_STUB_TEMPLATE")) overrides.stub_template = *v;
    settings.focus = new_config(overrides);

    if (auto v = env("AFM_VOCAB_PATH")) settings.vocab_path = *v;
    if (auto v = env("AFM_BASE_URL")) settings.gateway.base_url = *v;
    if (auto v = env("AFM_CHAT_MODEL")) settings.gateway.chat_model = *v;
    if (auto v = env("AFM_EMBED_MODEL")) settings.gateway.embed_model = *v;
}

TokenCounter make_token_counter(const Settings& settings, std::string* warning) {
    if (settings.vocab_path) {
        try {
            return TokenCounter::from_vocab_file(*settings.vocab_path, settings.per_message_overhead);
        } catch (const AssetLoadError& e) {
            if (warning != nullptr) *warning = e.what();
        }
    }
    return TokenCounter::whitespace(settings.per_message_overhead);
}

}  // namespace afm
