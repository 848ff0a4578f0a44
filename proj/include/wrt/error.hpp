#pragma once

#include <stdexcept>
#include <string>

namespace wrt {

// Precondition violated by the caller (bad shapes, empty inputs, missing
// prerequisites for a selection strategy).
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// The numerics broke down: singular normal matrix, non-finite objective,
// undefined amplitude rescale.
class NumericalFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class Unsupported : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class IoError : public std::runtime_error {
public:
    IoError(const std::string& path, const std::string& what)
        : std::runtime_error(path + ": " + what), path_(path) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& path, std::size_t line, const std::string& what)
        : std::runtime_error(path + ":" + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

} // namespace wrt
