#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sentibayes {

// Bad arguments or malformed input data. The CLI maps this to exit code 2.
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Filesystem or stream failure. The CLI maps this to exit code 1.
class io_error : public std::runtime_error {
public:
    explicit io_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed text input; carries a 1-based line number.
class parse_error : public validation_error {
public:
    parse_error(std::size_t line, const std::string& msg)
        : validation_error("line " + std::to_string(line) + ": " + msg), line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

}  // namespace sentibayes
