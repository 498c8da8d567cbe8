#include "crossq/util/log.hpp"

#include <atomic>
#include <iostream>
#include <mutex>

namespace crossq::log {

namespace {
std::atomic<Level> g_level{Level::warn};
std::mutex g_mutex;

const char *label(Level level) {
    switch (level) {
    case Level::debug: return "debug";
    case Level::info: return "info";
    case Level::warn: return "warning";
    case Level::error: return "error";
    case Level::off: break;
    }
    return "";
}
} // namespace

void set_level(Level level) { g_level.store(level); }

Level level() { return g_level.load(); }

void write(Level level, std::string_view message) {
    if (level < g_level.load() || level == Level::off) {
        return;
    }
    std::lock_guard lock(g_mutex);
    std::cerr << "[" << label(level) << "] " << message << '\n';
}

} // namespace crossq::log
