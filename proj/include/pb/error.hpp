#pragma once

#include <stdexcept>
#include <string>

namespace pb {

// Single error type for the whole library. `kind` is a stable machine-readable
// tag (e.g. "MalformedNumber", "CapExceeded"); `line` is 1-based when the error
// comes from parsing a file, 0 otherwise.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& msg, int line = 0)
        : std::runtime_error(line > 0 ? kind + " (line " + std::to_string(line) + "): " + msg
                                      : kind + ": " + msg),
          kind_(std::move(kind)), line_(line) {}

    const std::string& kind() const noexcept { return kind_; }
    int line() const noexcept { return line_; }

private:
    std::string kind_;
    int line_;
};

} // namespace pb
