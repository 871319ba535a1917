#pragma once

#include <string>
#include <string_view>

#include "afm/bench/scenario.hpp"
#include "afm/error.hpp"
#include "afm/gateway.hpp"

namespace afm::bench {

bool recalls_constraint(std::string_view response, const GradeSpec& spec);
bool violates_constraint(std::string_view response, const GradeSpec& spec);

// Pass iff every recall pattern matches and no violation pattern does.
bool grade_rules(std::string_view response, const GradeSpec& spec);

struct JudgeContext {
    std::string constraint;
    std::string query;
};

std::string judge_prompt(std::string_view response, const JudgeContext& context);

// Earliest PASS or FAIL token in the judge reply; JudgeParseError otherwise.
bool parse_verdict(std::string_view reply);

class JudgeParseError : public ParseError {
public:
    using ParseError::ParseError;
};

// Dispatches on spec.mode. JUDGE mode needs a gateway.
bool grade(std::string_view response, const GradeSpec& spec, Gateway* judge = nullptr,
           const ChatOptions& judge_options = {}, const JudgeContext& context = {});

}  // namespace afm::bench
