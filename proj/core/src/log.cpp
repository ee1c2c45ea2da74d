#include "csamp/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace csamp {

LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("CONVEX_SAMPLER_LOG");
    if (env == nullptr) return LogLevel::warn;
    if (std::strcmp(env, "debug") == 0) return LogLevel::debug;
    if (std::strcmp(env, "info") == 0) return LogLevel::info;
    return LogLevel::warn;
  }();
  return level;
}

void log_message(LogLevel level, const std::string& msg) {
  if (level < log_level()) return;
  const char* tag = level == LogLevel::debug ? "debug" : level == LogLevel::info ? "info" : "warn";
  std::fprintf(stderr, "[convex-sampler %s] %s\n", tag, msg.c_str());
}

}  // namespace csamp
