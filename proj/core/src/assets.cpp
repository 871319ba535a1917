#include "afm/assets.hpp"

#include <cstddef>
#include <utility>

namespace afm::detail {
extern const std::pair<std::string_view, std::string_view> kEmbeddedAssets[];
extern const std::size_t kEmbeddedAssetCount;
}  // namespace afm::detail

namespace afm {

std::optional<std::string_view> bundled_asset(std::string_view relative_path) {
    for (std::size_t i = 0; i < detail::kEmbeddedAssetCount; ++i) {
        if (detail::kEmbeddedAssets[i].first == relative_path) {
            return detail::kEmbeddedAssets[i].second;
        }
    }
    return std::nullopt;
}

std::vector<std::string_view> bundled_asset_names() {
    std::vector<std::string_view> names;
    names.reserve(detail::kEmbeddedAssetCount);
    for (std::size_t i = 0; i < detail::kEmbeddedAssetCount; ++i) {
        names.push_back(detail::kEmbeddedAssets[i].first);
    }
    return names;
}

}  // namespace afm
