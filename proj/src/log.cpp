#include "gfront/log.hpp"

#include "gfront/types.hpp"

#include <atomic>
#include <cstdlib>
#include <mutex>

namespace gfront::log {

namespace {

Level initial_level() {
  const char* env = std::getenv("GFRONT_LOG");
  if (env == nullptr) return Level::error;
  try {
    return parse_level(env);
  } catch (const Error&) {
    return Level::error;
  }
}

std::atomic<int>& current() {
  static std::atomic<int> lvl{static_cast<int>(initial_level())};
  return lvl;
}

std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

Level level() { return static_cast<Level>(current().load(std::memory_order_relaxed)); }

void set_level(Level l) { current().store(static_cast<int>(l), std::memory_order_relaxed); }

Level parse_level(const std::string& name) {
  if (name == "error") return Level::error;
  if (name == "info") return Level::info;
  if (name == "debug") return Level::debug;
  throw Error("unknown log level '" + name + "'");
}

void write(Level l, const std::string& msg) {
  static constexpr const char* tags[] = {"error", "info", "debug"};
  std::lock_guard lock(sink_mutex());
  std::cerr << "[gfront:" << tags[static_cast<int>(l)] << "] " << msg << '\n';
}

}  // namespace gfront::log
