#pragma once

#include <functional>
#include <string_view>

namespace twinrrm::log {

using WarningHandler = std::function<void(std::string_view)>;

/// Installs a warning sink and returns the previous one. An empty handler
/// restores the default, which writes to stderr.
WarningHandler set_warning_handler(WarningHandler handler);

void warn(std::string_view message);

}  // namespace twinrrm::log
