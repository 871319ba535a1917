#pragma once

#include <optional>
#include <string_view>
#include <vector>

namespace afm {

// Files shipped under core/assets/ and compiled into the library, keyed by
// relative path, e.g. "scenarios/allergy.json" or "prompts/classify_v1.txt".
std::optional<std::string_view> bundled_asset(std::string_view relative_path);
std::vector<std::string_view> bundled_asset_names();

}  // namespace afm
