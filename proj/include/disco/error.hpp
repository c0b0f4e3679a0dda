#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace disco {

/// Base of every error raised by the library. `kind()` is a stable
/// identifier used by the CLI and the Python bindings.
class Error : public std::runtime_error {
public:
    Error(std::string kind, const std::string& what)
        : std::runtime_error(what), kind_(std::move(kind)) {}

    const std::string& kind() const noexcept { return kind_; }

private:
    std::string kind_;
};

class TriangleViolation : public Error {
public:
    TriangleViolation(std::size_t i, std::size_t j, std::size_t k, double amount)
        : Error("TriangleViolation",
                "triangle inequality fails: d(" + std::to_string(i) + "," + std::to_string(k) +
                    ") exceeds d(" + std::to_string(i) + "," + std::to_string(j) + ")+d(" +
                    std::to_string(j) + "," + std::to_string(k) + ") by " + std::to_string(amount)),
          i(i), j(j), k(k), amount(amount) {}

    std::size_t i, j, k;
    double amount;
};

class NoMidpointWithinTolerance : public Error {
public:
    explicit NoMidpointWithinTolerance(double best_deviation)
        : Error("NoMidpointWithinTolerance",
                "no sample point within tolerance of a midpoint (best deviation " +
                    std::to_string(best_deviation) + ")"),
          best_deviation(best_deviation) {}

    double best_deviation;
};

class NotAnEpsilonChain : public Error {
public:
    NotAnEpsilonChain(std::size_t index, double gap)
        : Error("NotAnEpsilonChain", "gap at index " + std::to_string(index) + " is " +
                                         std::to_string(gap) + ", not below the scale"),
          index(index), gap(gap) {}

    std::size_t index;
    double gap;
};

class BudgetExhausted : public Error {
public:
    explicit BudgetExhausted(const std::string& what) : Error("BudgetExhausted", what) {}
};

}  // namespace disco
