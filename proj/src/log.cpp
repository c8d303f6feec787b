#include "sevlab/log.hpp"

#include <cstdlib>
#include <cstring>

namespace sevlab {

LogLevel log_level() {
    static const LogLevel level = [] {
        const char* env = std::getenv("SEVLAB_LOG");
        if (!env) return LogLevel::warn;
        if (!std::strcmp(env, "off")) return LogLevel::off;
        if (!std::strcmp(env, "info")) return LogLevel::info;
        if (!std::strcmp(env, "debug")) return LogLevel::debug;
        return LogLevel::warn;
    }();
    return level;
}

} // namespace sevlab
