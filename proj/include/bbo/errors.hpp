#pragma once

#include <stdexcept>
#include <string>

namespace bbo {

// Thrown when an evaluation is requested after the budget is spent.
// Optimizer loops treat this as the normal stop signal.
struct BudgetExhausted : std::runtime_error {
    explicit BudgetExhausted(const std::string& what) : std::runtime_error(what) {}
};

// A point lies outside the search space it was used with.
struct OutOfBounds : std::invalid_argument {
    explicit OutOfBounds(const std::string& what) : std::invalid_argument(what) {}
};

// Kernel matrix could not be factorized even at the jitter cap.
struct NotPositiveDefinite : std::runtime_error {
    explicit NotPositiveDefinite(const std::string& what) : std::runtime_error(what) {}
};

} // namespace bbo
