#include "esgm/log.hpp"

#include <atomic>
#include <cctype>
#include <cstdlib>
#include <iostream>
#include <mutex>

namespace esgm::log {

namespace {

Level parse_level(const char* text) {
    if (!text) return Level::warn;
    std::string s(text);
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    if (s == "debug") return Level::debug;
    if (s == "info") return Level::info;
    if (s == "warn" || s == "warning") return Level::warn;
    if (s == "error") return Level::error;
    if (s == "off" || s == "none" || s == "quiet") return Level::off;
    return Level::warn;
}

std::atomic<Level>& threshold_slot() {
    static std::atomic<Level> slot{parse_level(std::getenv("ESGM_LOG"))};
    return slot;
}

const char* label(Level level) {
    switch (level) {
        case Level::debug: return "debug";
        case Level::info: return "info";
        case Level::warn: return "warn";
        case Level::error: return "error";
        default: return "?";
    }
}

}  // namespace

Level threshold() { return threshold_slot().load(); }

void set_threshold(Level level) { threshold_slot().store(level); }

void write(Level level, const std::string& message) {
    if (level < threshold() || level == Level::off) return;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    std::cerr << "[esgm] " << label(level) << ": " << message << '\n';
}

}  // namespace esgm::log
