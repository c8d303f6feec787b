#pragma once

#include <iostream>
#include <sstream>
#include <string>

namespace sevlab {

// Verbosity comes from the SEVLAB_LOG environment variable:
// off | warn (default) | info | debug.
enum class LogLevel { off = 0, warn = 1, info = 2, debug = 3 };

LogLevel log_level();

template <typename... Args>
void log_at(LogLevel level, const char* tag, Args&&... args) {
    if (static_cast<int>(level) > static_cast<int>(log_level())) return;
    std::ostringstream os;
    os << "[" << tag << "] ";
    (os << ... << args);
    std::cerr << os.str() << "\n";
}

#define SEVLAB_WARN(...) ::sevlab::log_at(::sevlab::LogLevel::warn, "warn", __VA_ARGS__)
#define SEVLAB_INFO(...) ::sevlab::log_at(::sevlab::LogLevel::info, "info", __VA_ARGS__)
#define SEVLAB_DEBUG(...) ::sevlab::log_at(::sevlab::LogLevel::debug, "debug", __VA_ARGS__)

} // namespace sevlab
