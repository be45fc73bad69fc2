#pragma once

#include <iostream>
#include <sstream>
#include <string>

namespace gfront::log {

enum class Level { error = 0, info = 1, debug = 2 };

/// Current threshold.  Initialized from GFRONT_LOG (error | info | debug);
/// defaults to error.
Level level();
void set_level(Level l);
/// Parses a level name; throws gfront::Error on unknown names.
Level parse_level(const std::string& name);

void write(Level l, const std::string& msg);

template <class... Args>
void emit(Level l, const Args&... args) {
  if (static_cast<int>(l) > static_cast<int>(level())) return;
  std::ostringstream os;
  (os << ... << args);
  write(l, os.str());
}

template <class... Args>
void error(const Args&... args) {
  emit(Level::error, args...);
}
template <class... Args>
void info(const Args&... args) {
  emit(Level::info, args...);
}
template <class... Args>
void debug(const Args&... args) {
  emit(Level::debug, args...);
}

}  // namespace gfront::log
