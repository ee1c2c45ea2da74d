#pragma once

#include <string>

namespace csamp {

enum class LogLevel { debug = 0, info = 1, warn = 2 };

/// Level from CONVEX_SAMPLER_LOG (debug|info|warn), read once; default warn.
LogLevel log_level();

/// Writes "[convex-sampler <level>] msg" to stderr when enabled. Samples and
/// reports never go through here, so stdout stays clean for data.
void log_message(LogLevel level, const std::string& msg);

inline void log_debug(const std::string& msg) { log_message(LogLevel::debug, msg); }
inline void log_info(const std::string& msg) { log_message(LogLevel::info, msg); }
inline void log_warn(const std::string& msg) { log_message(LogLevel::warn, msg); }

}  // namespace csamp
