// Exception taxonomy shared by every module. Each error carries a stable
// machine-readable code; the CLI prints it verbatim in its single-line error
// output and maps it to a distinct exit code.
#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace parepi {

class Error : public std::runtime_error {
public:
    Error(std::string code, const std::string& message)
        : std::runtime_error(message), code_(std::move(code)) {}

    const std::string& code() const noexcept { return code_; }

private:
    std::string code_;
};

struct ParseError : Error {
    explicit ParseError(const std::string& m) : Error("ParseError", m) {}
};

struct ValidationError : Error {
    explicit ValidationError(const std::string& m) : Error("ValidationError", m) {}
};

// Reports the best estimate reached when an iterative method fails to meet
// its tolerance within the iteration budget.
struct NoConvergence : Error {
    NoConvergence(const std::string& m, double estimate, double residual, long iterations)
        : Error("NoConvergence", m),
          estimate(estimate), residual(residual), iterations(iterations) {}

    double estimate;
    double residual;
    long iterations;
};

struct DegenerateEigenvalue : Error {
    explicit DegenerateEigenvalue(const std::string& m) : Error("DegenerateEigenvalue", m) {}
};

struct StepSizeError : Error {
    explicit StepSizeError(const std::string& m) : Error("StepSizeError", m) {}
};

struct NotMonatomic : Error {
    explicit NotMonatomic(const std::string& m) : Error("NotMonatomic", m) {}
};

struct InfeasibleCost : Error {
    explicit InfeasibleCost(const std::string& m) : Error("InfeasibleCost", m) {}
};

struct InfeasibleLoss : Error {
    explicit InfeasibleLoss(const std::string& m) : Error("InfeasibleLoss", m) {}
};

struct TooLarge : Error {
    explicit TooLarge(const std::string& m) : Error("TooLarge", m) {}
};

struct IoError : Error {
    explicit IoError(const std::string& m) : Error("IoError", m) {}
};

}  // namespace parepi
