#include "lowensim/log.hpp"

#include <cstdlib>
#include <iostream>
#include <mutex>

namespace lowensim {

namespace {
std::mutex log_mutex;

LogLevel read_level() {
    const char* env = std::getenv("LOWENSIM_LOG");
    if (!env) return LogLevel::error;
    const std::string v(env);
    if (v == "debug") return LogLevel::debug;
    if (v == "info") return LogLevel::info;
    return LogLevel::error;
}

void emit(const char* tag, const std::string& msg) {
    std::lock_guard<std::mutex> lock(log_mutex);
    std::cerr << "[lowensim " << tag << "] " << msg << "\n";
}
}  // namespace

LogLevel log_level() {
    static const LogLevel level = read_level();
    return level;
}

void log_error(const std::string& msg) { emit("error", msg); }

void log_info(const std::string& msg) {
    if (log_level() >= LogLevel::info) emit("info", msg);
}

void log_debug(const std::string& msg) {
    if (log_level() >= LogLevel::debug) emit("debug", msg);
}

}  // namespace lowensim
