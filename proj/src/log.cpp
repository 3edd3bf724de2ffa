#include "twinrrm/log.hpp"

#include <iostream>
#include <mutex>
#include <string>
#include <utility>

namespace twinrrm::log {
namespace {

std::mutex& handler_mutex() {
  static std::mutex m;
  return m;
}

WarningHandler& handler() {
  static WarningHandler h;
  return h;
}

}  // namespace

WarningHandler set_warning_handler(WarningHandler h) {
  std::lock_guard lock(handler_mutex());
  return std::exchange(handler(), std::move(h));
}

void warn(std::string_view message) {
  std::lock_guard lock(handler_mutex());
  if (handler()) {
    handler()(message);
  } else {
    std::cerr << "twinrrm: warning: " << message << '\n';
  }
}

}  // namespace twinrrm::log
