// Copyright 2026 the dtnbgp authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#include "dtnbgp/log.hpp"

#include <atomic>
#include <chrono>
#include <cstring>

namespace dtnbgp {

const char* log_level_name(LogLevel level) {
    switch (level) {
        case LogLevel::error: return "error";
        case LogLevel::warn: return "warn";
        case LogLevel::info: return "info";
        case LogLevel::debug: return "debug";
    }
    return "?";
}

bool parse_log_level(std::string_view text, LogLevel& out) {
    if (text == "error") out = LogLevel::error;
    else if (text == "warn") out = LogLevel::warn;
    else if (text == "info") out = LogLevel::info;
    else if (text == "debug") out = LogLevel::debug;
    else return false;
    return true;
}

struct Logger::Sink {
    FILE* stream = stderr;
    bool owned = false;
    bool silent = false;
    std::atomic<LogLevel> level{LogLevel::info};
    std::mutex mu;

    ~Sink() {
        if (owned && stream) fclose(stream);
    }
};

Logger::Logger() : sink_(std::make_shared<Sink>()) {}

Logger Logger::to_file(const std::string& path) {
    Logger l;
    FILE* f = fopen(path.c_str(), "w");
    if (f) {
        setvbuf(f, nullptr, _IOLBF, 0);
        l.sink_->stream = f;
        l.sink_->owned = true;
    }
    return l;
}

Logger Logger::null() {
    Logger l;
    l.sink_->silent = true;
    return l;
}

Logger Logger::with_prefix(std::string prefix) const {
    Logger l = *this;
    l.prefix_ = std::move(prefix);
    return l;
}

void Logger::set_level(LogLevel level) { sink_->level = level; }

LogLevel Logger::level() const { return sink_->level; }

void Logger::log(LogLevel level, std::string_view msg) const {
    if (sink_->silent || !enabled(level)) return;
    using namespace std::chrono;
    auto now = duration_cast<milliseconds>(steady_clock::now().time_since_epoch());
    std::lock_guard lock(sink_->mu);
    fprintf(sink_->stream, "%10lld.%03lld %-5s %s%s%.*s\n",
            static_cast<long long>(now.count() / 1000),
            static_cast<long long>(now.count() % 1000), log_level_name(level),
            prefix_.c_str(), prefix_.empty() ? "" : " ",
            static_cast<int>(msg.size()), msg.data());
}

}  // namespace dtnbgp
