#pragma once

#include <stdexcept>
#include <string>

namespace favar {

// Failure categories. The CLI maps them onto exit codes.
enum class ErrorKind { Shape, Parameter, Data, Numerical, Config };

class FavarError : public std::runtime_error {
public:
    FavarError(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

struct ShapeError : FavarError {
    explicit ShapeError(const std::string& w) : FavarError(ErrorKind::Shape, w) {}
};

struct ParameterError : FavarError {
    explicit ParameterError(const std::string& w) : FavarError(ErrorKind::Parameter, w) {}
};

struct DataError : FavarError {
    explicit DataError(const std::string& w) : FavarError(ErrorKind::Data, w) {}
};

struct NumericalError : FavarError {
    explicit NumericalError(const std::string& w) : FavarError(ErrorKind::Numerical, w) {}
};

struct ConfigError : FavarError {
    explicit ConfigError(const std::string& w) : FavarError(ErrorKind::Config, w) {}
};

}  // namespace favar
