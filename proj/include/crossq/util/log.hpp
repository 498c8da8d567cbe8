#pragma once

#include <string_view>

namespace crossq::log {

enum class Level { debug, info, warn, error, off };

void set_level(Level level);
Level level();

void write(Level level, std::string_view message);

inline void warn(std::string_view message) { write(Level::warn, message); }
inline void info(std::string_view message) { write(Level::info, message); }
inline void debug(std::string_view message) { write(Level::debug, message); }

} // namespace crossq::log
