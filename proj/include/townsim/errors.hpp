#pragma once

#include <stdexcept>
#include <string>

namespace townsim {

// Precondition violated by a caller-supplied parameter.
struct InvalidParameter : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Not enough observations to carry out a fit.
struct InsufficientData : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// An agent broke one of its invariants between simulation phases.
struct InconsistentState : std::logic_error {
    using std::logic_error::logic_error;
};

// Regressor matrix is rank-deficient.
struct SingularDesign : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Residual degrees of freedom left for an F-test are < 1.
struct InvalidDof : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Config text could not be parsed or failed validation.
class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& what, int line = 0)
        : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
          line_(line) {}

    [[nodiscard]] int line() const noexcept { return line_; }

private:
    int line_;
};

// Input time series for the analysis command is malformed or degenerate.
class AnalysisInputError : public std::runtime_error {
public:
    AnalysisInputError(const std::string& what, int row = 0)
        : std::runtime_error(row > 0 ? "row " + std::to_string(row) + ": " + what : what),
          row_(row) {}

    [[nodiscard]] int row() const noexcept { return row_; }

private:
    int row_;
};

}  // namespace townsim
