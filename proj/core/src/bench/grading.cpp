#include "afm/bench/grading.hpp"

#include <array>
#include <regex>

#include "afm/assets.hpp"
#include "text_util.hpp"

namespace afm::bench {

namespace {

bool matches(std::string_view text, const std::string& pattern) {
    const std::regex re(pattern, std::regex::ECMAScript | std::regex::icase);
    return std::regex_search(text.begin(), text.end(), re);
}

}  // namespace

bool recalls_constraint(std::string_view response, const GradeSpec& spec) {
    if (spec.recall_patterns.empty()) return false;
    for (const auto& pattern : spec.recall_patterns) {
        if (!matches(response, pattern)) return false;
    }
    return true;
}

bool violates_constraint(std::string_view response, const GradeSpec& spec) {
    for (const auto& pattern : spec.violation_patterns) {
        if (matches(response, pattern)) return true;
    }
    return false;
}

bool grade_rules(std::string_view response, const GradeSpec& spec) {
    return recalls_constraint(response, spec) && !violates_constraint(response, spec);
}

std::string judge_prompt(std::string_view response, const JudgeContext& context) {
    const auto bundled = bundled_asset("prompts/judge_v1.txt");
    if (!bundled) throw AssetLoadError("bundled judge prompt is missing");
    std::string prompt(*bundled);
    detail::replace_all(prompt, "{constraint}", context.constraint);
    detail::replace_all(prompt, "{query}", context.query);
    detail::replace_all(prompt, "{response}", response);
    return prompt;
}

bool parse_verdict(std::string_view reply) {
    const std::size_t pass = detail::find_word_ci(reply, "PASS");
    const std::size_t fail = detail::find_word_ci(reply, "FAIL");
    if (pass == std::string_view::npos && fail == std::string_view::npos) {
        throw JudgeParseError("judge reply has no PASS/FAIL verdict: " + std::string(reply));
    }
    return pass < fail;
}

bool grade(std::string_view response, const GradeSpec& spec, Gateway* judge,
           const ChatOptions& judge_options, const JudgeContext& context) {
    if (spec.mode == GradeMode::Rules) return grade_rules(response, spec);
    if (judge == nullptr) throw InvalidArgument("JUDGE grading needs a gateway");
    const std::array<ChatMessage, 1> request{ChatMessage{Role::User, judge_prompt(response, context)}};
    return parse_verdict(judge->chat(request, judge_options).text);
}

}  // namespace afm::bench
