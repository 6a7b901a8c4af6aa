#include "chessy/log.hpp"

#include <atomic>
#include <cstdio>
#include <mutex>

#include "chessy/errors.hpp"

namespace chessy {

namespace {
std::atomic<LogLevel> g_level{LogLevel::info};
std::mutex g_mutex;

const char* level_tag(LogLevel level) {
    switch (level) {
    case LogLevel::error: return "error";
    case LogLevel::warn: return "warn";
    case LogLevel::info: return "info";
    case LogLevel::debug: return "debug";
    }
    return "?";
}
} // namespace

void set_log_level(LogLevel level) {
    g_level.store(level);
}

LogLevel log_level() {
    return g_level.load();
}

LogLevel parse_log_level(std::string_view name) {
    if (name == "error") return LogLevel::error;
    if (name == "warn") return LogLevel::warn;
    if (name == "info") return LogLevel::info;
    if (name == "debug") return LogLevel::debug;
    throw ConfigError("unknown log level '" + std::string(name) + "'");
}

void log_message(LogLevel level, std::string_view msg) {
    if (level > g_level.load())
        return;
    std::lock_guard<std::mutex> lock(g_mutex);
    std::fprintf(stderr, "[%s] %.*s\n", level_tag(level), static_cast<int>(msg.size()),
                 msg.data());
}

} // namespace chessy
