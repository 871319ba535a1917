#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "afm/model.hpp"

namespace afm::bench {

struct ScenarioTurn {
    Role role = Role::User;
    std::string text;
    bool is_constraint = false;
    bool is_graded = false;
    // Reply the offline simulator gives to this user turn.
    std::optional<std::string> offline_reply;
};

enum class GradeMode { Rules, Judge };

struct GradeSpec {
    std::vector<std::string> recall_patterns;     // all must match
    std::vector<std::string> violation_patterns;  // none may match
    GradeMode mode = GradeMode::Rules;
};

// Graded-turn replies used by the offline simulator: the compliant reply is
// given only when a constraint turn appears verbatim in the prompt.
struct OfflineReplies {
    std::string compliant;
    std::string generic;
    std::string filler = "Sure, happy to help with that.";
};

struct Scenario {
    std::string name;
    std::string system_prompt;
    std::vector<ScenarioTurn> turns;
    GradeSpec grading;
    OfflineReplies offline;

    std::size_t graded_index() const;
    const ScenarioTurn& graded_turn() const { return turns[graded_index()]; }
    std::vector<std::size_t> constraint_indices() const;
};

// Throws SchemaError naming the line (for JSON syntax errors) or the field
// path (for schema violations).
Scenario parse_scenario(std::string_view json_text);
Scenario load_scenario(const std::filesystem::path& path);

// "allergy" and "tax".
Scenario bundled_scenario(std::string_view name);
std::vector<std::string> bundled_scenario_names();

// A bundled name, or else a file path.
Scenario resolve_scenario(std::string_view name_or_path);

// Structural checks: exactly one graded turn, it is the final turn and a
// user turn, at least one constraint turn precedes it, recall patterns are
// nonempty and compile. Throws SchemaError.
void validate_scenario(const Scenario& scenario);

}  // namespace afm::bench
