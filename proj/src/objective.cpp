#include "bbo/objective.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "bbo/errors.hpp"

namespace bbo {

const char* phase_name(Phase p) {
    switch (p) {
    case Phase::Refine: return "refine";
    case Phase::Init: return "init";
    case Phase::Bo: return "bo";
    case Phase::Tree: return "tree";
    }
    return "?";
}

BudgetedEvaluator::BudgetedEvaluator(const Problem& problem, int budget)
    : problem_(&problem), budget_(budget) {
    if (budget_ < 1) {
        throw std::invalid_argument("BudgetedEvaluator: budget must be positive");
    }
    log_.reserve(static_cast<std::size_t>(budget_));
}

double BudgetedEvaluator::evaluate(const Point& x, bool fallback) {
    if (count() >= budget_) {
        throw BudgetExhausted("evaluation budget of " + std::to_string(budget_) + " spent");
    }
    if (!problem_->space.contains(x)) {
        throw OutOfBounds("evaluate: point outside the search space of " + problem_->name);
    }
    Point arg = x;
    for (std::size_t axis : problem_->integral_axes) {
        arg[axis] = std::round(arg[axis]);
    }
    const double y = problem_->objective(arg);
    EvaluationRecord rec;
    rec.index = count() + 1;
    rec.x = x;
    rec.y = y;
    rec.phase = phase_;
    rec.fallback = fallback;
    rec.best_so_far = log_.empty() ? y : std::min(y, log_.back().best_so_far);
    if (log_.empty() || y < log_[best_index_].y) {
        best_index_ = log_.size();
    }
    log_.push_back(std::move(rec));
    return y;
}

const EvaluationRecord& BudgetedEvaluator::best() const {
    if (log_.empty()) {
        throw std::logic_error("best: no evaluations recorded");
    }
    return log_[best_index_];
}

namespace {

double sphere_fn(const Point& x) {
    double s = 0.0;
    for (double v : x) {
        s += v * v;
    }
    return s;
}

// k = floor(d/4) leading axes keep unit weight, the rest are scaled by 100.
double k_tablet_fn(const Point& x) {
    const std::size_t k = x.size() / 4;
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double v = i < k ? x[i] : 100.0 * x[i];
        s += v * v;
    }
    return s;
}

double rosenbrock_chain_fn(const Point& x) {
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double a = x[i + 1] - x[i] * x[i];
        const double b = x[i] - 1.0;
        s += 100.0 * a * a + b * b;
    }
    return s;
}

double branin_fn(const Point& x) {
    constexpr double pi = std::numbers::pi;
    const double a = 1.0;
    const double b = 5.1 / (4.0 * pi * pi);
    const double c = 5.0 / pi;
    const double r = 6.0;
    const double s = 10.0;
    const double t = 1.0 / (8.0 * pi);
    const double inner = x[1] - b * x[0] * x[0] + c * x[0] - r;
    return a * inner * inner + s * (1.0 - t) * std::cos(x[0]) + s;
}

// Shekel (m = 5) and Hartmann 6-d coefficient tables from the standard
// global-optimization test-function compendium (Surjanovic & Bingham,
// "Virtual Library of Simulation Experiments").
constexpr std::array<std::array<double, 4>, 5> kShekelC = {{
    {4.0, 4.0, 4.0, 4.0},
    {1.0, 1.0, 1.0, 1.0},
    {8.0, 8.0, 8.0, 8.0},
    {6.0, 6.0, 6.0, 6.0},
    {3.0, 7.0, 3.0, 7.0},
}};
constexpr std::array<double, 5> kShekelBeta = {0.1, 0.2, 0.2, 0.4, 0.4};

double shekel5_fn(const Point& x) {
    double s = 0.0;
    for (std::size_t i = 0; i < kShekelC.size(); ++i) {
        double q = kShekelBeta[i];
        for (std::size_t j = 0; j < 4; ++j) {
            const double dxj = x[j] - kShekelC[i][j];
            q += dxj * dxj;
        }
        s -= 1.0 / q;
    }
    return s;
}

constexpr std::array<double, 4> kHartmannAlpha = {1.0, 1.2, 3.0, 3.2};
constexpr std::array<std::array<double, 6>, 4> kHartmannA = {{
    {10.0, 3.0, 17.0, 3.5, 1.7, 8.0},
    {0.05, 10.0, 17.0, 0.1, 8.0, 14.0},
    {3.0, 3.5, 1.7, 10.0, 17.0, 8.0},
    {17.0, 8.0, 0.05, 10.0, 0.1, 14.0},
}};
constexpr std::array<std::array<double, 6>, 4> kHartmannP = {{
    {0.1312, 0.1696, 0.5569, 0.0124, 0.8283, 0.5886},
    {0.2329, 0.4135, 0.8307, 0.3736, 0.1004, 0.9991},
    {0.2348, 0.1451, 0.3522, 0.2883, 0.3047, 0.6650},
    {0.4047, 0.8828, 0.8732, 0.5743, 0.1091, 0.0381},
}};

double hartmann6_fn(const Point& x) {
    double s = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        double e = 0.0;
        for (std::size_t j = 0; j < 6; ++j) {
            const double dxj = x[j] - kHartmannP[i][j];
            e += kHartmannA[i][j] * dxj * dxj;
        }
        s -= kHartmannAlpha[i] * std::exp(-e);
    }
    return s;
}

const std::vector<Problem>& registry() {
    static const std::vector<Problem> problems = {
        {"sphere", 5, SearchSpace::cube(-5.0, 10.0, 5), sphere_fn, 0.0, {}},
        {"k-tablet", 5, SearchSpace::cube(-5.0, 10.0, 5), k_tablet_fn, 0.0, {}},
        {"rosenbrock", 5, SearchSpace::cube(-5.0, 10.0, 5), rosenbrock_chain_fn, 0.0, {}},
        {"branin", 2, SearchSpace({-5.0, 0.0}, {10.0, 15.0}), branin_fn, 0.397887, {}},
        {"shekel5", 4, SearchSpace::cube(0.0, 10.0, 4), shekel5_fn, -10.1532, {}},
        {"hartmann6", 6, SearchSpace::cube(0.0, 1.0, 6), hartmann6_fn, -3.32237, {}},
    };
    return problems;
}

std::string canonical_name(const std::string& name) {
    if (name == "rosenbrock-chain") return "rosenbrock";
    if (name == "shekel") return "shekel5";
    if (name == "hartmann") return "hartmann6";
    return name;
}

} // namespace

const Problem& problem_by_name(const std::string& name) {
    const std::string key = canonical_name(name);
    for (const Problem& p : registry()) {
        if (p.name == key) {
            return p;
        }
    }
    throw std::invalid_argument("unknown problem: " + name);
}

std::vector<std::string> problem_names() {
    std::vector<std::string> names;
    for (const Problem& p : registry()) {
        names.push_back(p.name);
    }
    return names;
}

double benchmark_value(const std::string& name, const Point& x) {
    const Problem& p = problem_by_name(name);
    if (x.size() != p.dim) {
        throw std::invalid_argument("benchmark_value: dimension mismatch for " + p.name);
    }
    return p.objective(x);
}

} // namespace bbo
