// Copyright 2026 the dtnbgp authors. Licensed under the Apache License,
// Version 2.0. See the LICENSE file at the root of this distribution or at
// http://www.apache.org/licenses/LICENSE-2.0

#pragma once

#include <cstdio>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>

namespace dtnbgp {

enum class LogLevel { error = 0, warn = 1, info = 2, debug = 3 };

const char* log_level_name(LogLevel level);
bool parse_log_level(std::string_view text, LogLevel& out);

// Shared sink: stderr by default, or a log file. Cheap to copy; all copies
// write through the same stream.
class Logger {
public:
    Logger();
    static Logger to_file(const std::string& path);  // falls back to stderr on open failure
    static Logger null();

    Logger with_prefix(std::string prefix) const;
    void set_level(LogLevel level);
    LogLevel level() const;

    bool enabled(LogLevel level) const { return level <= this->level(); }
    void log(LogLevel level, std::string_view msg) const;

    void error(std::string_view msg) const { log(LogLevel::error, msg); }
    void warn(std::string_view msg) const { log(LogLevel::warn, msg); }
    void info(std::string_view msg) const { log(LogLevel::info, msg); }
    void debug(std::string_view msg) const { log(LogLevel::debug, msg); }

private:
    struct Sink;
    std::shared_ptr<Sink> sink_;
    std::string prefix_;
};

}  // namespace dtnbgp
