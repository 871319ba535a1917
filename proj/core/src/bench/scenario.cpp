#include "afm/bench/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <regex>
#include <sstream>

#include "afm/assets.hpp"
#include "afm/error.hpp"
#include "json.hpp"

namespace afm::bench {

using nlohmann::json;

namespace {

std::size_t line_of(std::string_view text, std::size_t byte) {
    const std::size_t end = std::min(byte, text.size());
    return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(end), '\n'));
}

const json& require(const json& object, const std::string& key, const std::string& path) {
    if (!object.is_object() || !object.contains(key)) throw SchemaError(path + key + ": missing");
    return object[key];
}

std::string require_string(const json& object, const std::string& key, const std::string& path) {
    const json& value = require(object, key, path);
    if (!value.is_string()) throw SchemaError(path + key + ": expected a string");
    return value.get<std::string>();
}

bool optional_bool(const json& object, const std::string& key, const std::string& path) {
    if (!object.contains(key)) return false;
    if (!object[key].is_boolean()) throw SchemaError(path + key + ": expected a boolean");
    return object[key].get<bool>();
}

std::vector<std::string> string_list(const json& object, const std::string& key,
                                     const std::string& path, bool required) {
    if (!object.contains(key)) {
        if (required) throw SchemaError(path + key + ": missing");
        return {};
    }
    const json& value = object[key];
    if (!value.is_array()) throw SchemaError(path + key + ": expected an array of strings");
    std::vector<std::string> out;
    for (std::size_t i = 0; i < value.size(); ++i) {
        if (!value[i].is_string()) {
            throw SchemaError(path + key + "[" + std::to_string(i) + "]: expected a string");
        }
        out.push_back(value[i].get<std::string>());
    }
    return out;
}

void check_patterns(const std::vector<std::string>& patterns, const std::string& path) {
    for (std::size_t i = 0; i < patterns.size(); ++i) {
        try {
            std::regex(patterns[i], std::regex::ECMAScript | std::regex::icase);
        } catch (const std::regex_error& e) {
            throw SchemaError(path + "[" + std::to_string(i) + "]: invalid regex: " + e.what());
        }
    }
}

}  // namespace

std::size_t Scenario::graded_index() const {
    for (std::size_t i = 0; i < turns.size(); ++i) {
        if (turns[i].is_graded) return i;
    }
    throw SchemaError("turns: no graded turn");
}

std::vector<std::size_t> Scenario::constraint_indices() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < turns.size(); ++i) {
        if (turns[i].is_constraint) out.push_back(i);
    }
    return out;
}

void validate_scenario(const Scenario& scenario) {
    if (scenario.name.empty()) throw SchemaError("name: must not be empty");
    std::size_t graded = 0;
    std::size_t graded_at = 0;
    for (std::size_t i = 0; i < scenario.turns.size(); ++i) {
        if (scenario.turns[i].is_graded) {
            ++graded;
            graded_at = i;
        }
    }
    if (graded != 1) {
        throw SchemaError("turns: expected exactly one graded turn, found " + std::to_string(graded));
    }
    const std::string where = "turns[" + std::to_string(graded_at) + "]";
    if (scenario.turns[graded_at].role != Role::User) throw SchemaError(where + ".role: graded turn must be a user turn");
    if (graded_at + 1 != scenario.turns.size()) throw SchemaError(where + ".is_graded: graded turn must be the final turn");
    const bool constraint_before = std::any_of(
        scenario.turns.begin(), scenario.turns.begin() + static_cast<std::ptrdiff_t>(graded_at),
        [](const ScenarioTurn& t) { return t.is_constraint; });
    if (!constraint_before) throw SchemaError("turns: no constraint turn precedes the graded turn");
    if (scenario.turns[graded_at].is_constraint) throw SchemaError(where + ".is_constraint: graded turn cannot be a constraint");
    if (scenario.grading.recall_patterns.empty()) throw SchemaError("grading.recall_patterns: must not be empty");
    check_patterns(scenario.grading.recall_patterns, "grading.recall_patterns");
    check_patterns(scenario.grading.violation_patterns, "grading.violation_patterns");
}

Scenario parse_scenario(std::string_view json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw SchemaError("line " + std::to_string(line_of(json_text, e.byte)) + ": malformed JSON: " + e.what());
    }
    if (!root.is_object()) throw SchemaError("(root): expected an object");

    Scenario scenario;
    scenario.name = require_string(root, "name", "");
    scenario.system_prompt = root.contains("system_prompt") ? require_string(root, "system_prompt", "") : "";

    const json& turns = require(root, "turns", "");
    if (!turns.is_array()) throw SchemaError("turns: expected an array");
    for (std::size_t i = 0; i < turns.size(); ++i) {
        const std::string path = "turns[" + std::to_string(i) + "].";
        const json& t = turns[i];
        if (!t.is_object()) throw SchemaError("turns[" + std::to_string(i) + "]: expected an object");
        ScenarioTurn turn;
        try {
            turn.role = parse_role(require_string(t, "role", path));
        } catch (const InvalidArgument& e) {
            throw SchemaError(path + "role: " + e.what());
        }
        if (turn.role == Role::System) throw SchemaError(path + "role: system turns are not allowed; use system_prompt");
        turn.text = require_string(t, "text", path);
        turn.is_constraint = optional_bool(t, "is_constraint", path);
        turn.is_graded = optional_bool(t, "is_graded", path);
        if (t.contains("offline_reply")) turn.offline_reply = require_string(t, "offline_reply", path);
        scenario.turns.push_back(std::move(turn));
    }

    const json& grading = require(root, "grading", "");
    scenario.grading.recall_patterns = string_list(grading, "recall_patterns", "grading.", true);
    scenario.grading.violation_patterns = string_list(grading, "violation_patterns", "grading.", false);
    if (grading.contains("mode")) {
        const std::string mode = require_string(grading, "mode", "grading.");
        if (mode == "rules" || mode == "RULES") {
            scenario.grading.mode = GradeMode::Rules;
        } else if (mode == "judge" || mode == "JUDGE") {
            scenario.grading.mode = GradeMode::Judge;
        } else {
            throw SchemaError("grading.mode: expected \"rules\" or \"judge\"");
        }
    }

    if (root.contains("offline")) {
        const json& offline = root["offline"];
        if (!offline.is_object()) throw SchemaError("offline: expected an object");
        scenario.offline.compliant = require_string(offline, "compliant", "offline.");
        scenario.offline.generic = require_string(offline, "generic", "offline.");
        if (offline.contains("filler")) scenario.offline.filler = require_string(offline, "filler", "offline.");
    }

    validate_scenario(scenario);
    return scenario;
}

Scenario load_scenario(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError(path.string() + ": cannot open file");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_scenario(buffer.str());
    } catch (const SchemaError& e) {
        throw SchemaError(path.string() + ": " + e.what());
    }
}

Scenario bundled_scenario(std::string_view name) {
    const auto text = bundled_asset("scenarios/" + std::string(name) + ".json");
    if (!text) throw SchemaError("no bundled scenario named '" + std::string(name) + "'");
    return parse_scenario(*text);
}

std::vector<std::string> bundled_scenario_names() {
    std::vector<std::string> names;
    constexpr std::string_view prefix = "scenarios/";
    constexpr std::string_view suffix = ".json";
    for (const auto asset : bundled_asset_names()) {
        if (asset.starts_with(prefix) && asset.ends_with(suffix)) {
            names.emplace_back(asset.substr(prefix.size(), asset.size() - prefix.size() - suffix.size()));
        }
    }
    return names;
}

Scenario resolve_scenario(std::string_view name_or_path) {
    if (bundled_asset("scenarios/" + std::string(name_or_path) + ".json")) {
        return bundled_scenario(name_or_path);
    }
    return load_scenario(std::filesystem::path(name_or_path));
}

}  // namespace afm::bench
