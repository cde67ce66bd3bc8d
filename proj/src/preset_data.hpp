#pragma once

#include <string_view>
#include <utility>
#include <vector>

namespace sirdelay::detail {

/// (name, JSON text) for every file under presets/, embedded at build time.
const std::vector<std::pair<std::string_view, std::string_view>>& bundled_presets();

}  // namespace sirdelay::detail
