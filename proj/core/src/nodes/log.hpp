#pragma once

#include <cstdio>
#include <cstdlib>
#include <mutex>
#include <string_view>

namespace signcast::nodes::internal {

// One line to stderr per call. SIGNCAST_QUIET=1 silences it.
inline void Log(std::string_view component, std::string_view message) {
  static const bool quiet = [] {
    const char* v = std::getenv("SIGNCAST_QUIET");
    return v != nullptr && std::string_view(v) == "1";
  }();
  if (quiet) return;
  static std::mutex mu;
  std::lock_guard lock(mu);
  std::fprintf(stderr, "[%.*s] %.*s\n", static_cast<int>(component.size()), component.data(),
               static_cast<int>(message.size()), message.data());
}

}  // namespace signcast::nodes::internal
