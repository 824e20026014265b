#pragma once

#include <cstdlib>
#include <iostream>
#include <string>

namespace redlight {

enum class LogLevel { Error = 0, Info = 1, Debug = 2 };

// Level comes from REDLIGHT_LOG={error|info|debug}; default is error.
inline LogLevel log_level() {
  static const LogLevel level = [] {
    const char* env = std::getenv("REDLIGHT_LOG");
    if (!env) return LogLevel::Error;
    const std::string s(env);
    if (s == "debug") return LogLevel::Debug;
    if (s == "info") return LogLevel::Info;
    return LogLevel::Error;
  }();
  return level;
}

inline void log(LogLevel at, const std::string& msg) {
  if (static_cast<int>(at) <= static_cast<int>(log_level()))
    std::cerr << "[redlight] " << msg << "\n";
}

}  // namespace redlight
