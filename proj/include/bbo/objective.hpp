#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "bbo/space.hpp"

namespace bbo {

// Which phase of a run produced an evaluation.
enum class Phase { Refine, Init, Bo, Tree };

const char* phase_name(Phase p);

struct EvaluationRecord {
    int index = 0; // 1-based evaluation number
    Point x;
    double y = 0.0;
    double best_so_far = 0.0; // running minimum up to and including this record
    Phase phase = Phase::Bo;
    bool fallback = false; // proposal was replaced by a uniform random draw
};

// A minimization problem over a hypercube.
struct Problem {
    std::string name;
    std::size_t dim;
    SearchSpace space;
    std::function<double(const Point&)> objective;
    std::optional<double> known_best; // for reporting only
    // Axes whose values are rounded to the nearest integer before the
    // objective sees them. Empty for the continuous benchmark suite.
    std::vector<std::size_t> integral_axes;
};

// Wraps an objective, counts evaluations, enforces the budget and logs
// every (x, y) in evaluation order. Single-owner mutable state: one
// evaluator per trial.
class BudgetedEvaluator {
public:
    BudgetedEvaluator(const Problem& problem, int budget);

    // Evaluates f(x), appends a record and increments the count.
    // Throws BudgetExhausted once the budget is spent and OutOfBounds for
    // points outside the problem space.
    double evaluate(const Point& x, bool fallback = false);

    int count() const { return static_cast<int>(log_.size()); }
    int budget() const { return budget_; }
    int remaining() const { return budget_ - count(); }

    const std::vector<EvaluationRecord>& log() const { return log_; }

    // Record with minimal y; earliest index on ties. Requires count >= 1.
    const EvaluationRecord& best() const;

    void set_phase(Phase p) { phase_ = p; }

    const Problem& problem() const { return *problem_; }

private:
    const Problem* problem_;
    int budget_;
    Phase phase_ = Phase::Bo;
    std::vector<EvaluationRecord> log_;
    std::size_t best_index_ = 0; // 0-based position of the incumbent best
};

// Benchmark suite. Canonical registry names: sphere, k-tablet, rosenbrock,
// branin, shekel5, hartmann6.
double benchmark_value(const std::string& name, const Point& x);
const Problem& problem_by_name(const std::string& name);
std::vector<std::string> problem_names();

} // namespace bbo
