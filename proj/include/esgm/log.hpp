#ifndef ESGM_LOG_HPP
#define ESGM_LOG_HPP

#include <string>

namespace esgm::log {

enum class Level { debug = 0, info = 1, warn = 2, error = 3, off = 4 };

// Threshold comes from the ESGM_LOG environment variable
// (debug|info|warn|error|off), default warn. Messages go to stderr so
// report files stay byte-stable.
Level threshold();
void set_threshold(Level level);

void write(Level level, const std::string& message);

inline void debug(const std::string& m) { write(Level::debug, m); }
inline void info(const std::string& m) { write(Level::info, m); }
inline void warn(const std::string& m) { write(Level::warn, m); }
inline void error(const std::string& m) { write(Level::error, m); }

}  // namespace esgm::log

#endif  // ESGM_LOG_HPP
