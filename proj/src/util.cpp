#include "waypath/util.hpp"

#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <cstring>

namespace waypath {

std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

LogLevel log_level() {
    static const LogLevel level = [] {
        const char* env = std::getenv("WAYPATH_LOG");
        if (!env) return LogLevel::warn;
        if (std::strcmp(env, "debug") == 0) return LogLevel::debug;
        if (std::strcmp(env, "info") == 0) return LogLevel::info;
        if (std::strcmp(env, "warn") == 0) return LogLevel::warn;
        if (std::strcmp(env, "error") == 0) return LogLevel::error;
        if (std::strcmp(env, "off") == 0) return LogLevel::off;
        return LogLevel::warn;
    }();
    return level;
}

void log(LogLevel level, const std::string& message) {
    if (level < log_level()) return;
    static const char* names[] = {"debug", "info", "warn", "error"};
    std::fprintf(stderr, "waypath: [%s] %s\n",
                 names[static_cast<int>(level)], message.c_str());
}

}  // namespace waypath
