#pragma once

#include <functional>
#include <iostream>
#include <string>
#include <utility>

namespace hgembed {

enum class LogLevel { debug, info, warning };

using LogSink = std::function<void(LogLevel, const std::string&)>;

namespace detail {

inline LogSink& log_sink() {
  static LogSink sink = [](LogLevel level, const std::string& msg) {
    if (level == LogLevel::warning) std::cerr << "hgembed: warning: " << msg << '\n';
  };
  return sink;
}

}  // namespace detail

// Replaces the process-wide sink; pass an empty function to silence the library.
inline void set_log_sink(LogSink sink) { detail::log_sink() = std::move(sink); }

inline void log(LogLevel level, const std::string& msg) {
  if (const auto& sink = detail::log_sink()) sink(level, msg);
}

}  // namespace hgembed
