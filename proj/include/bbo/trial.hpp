#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bbo/objective.hpp"
#include "bbo/space.hpp"

namespace bbo {

// Refinement details of one ref-gp-ei trial, kept for run metadata.
struct RefineReport {
    double gamma = 0.0;
    double b_ref = 0.0;
    int k = 1;
    long cost = 0;
    std::vector<std::size_t> dimension_order;
    std::optional<SearchSpace> subspace;
};

// Per-trial evaluation trace; the unit of the harness's statistics.
struct TrialResult {
    std::string method;
    std::string problem;
    int trial = 0;
    std::uint64_t seed = 0;
    int budget = 0;
    std::vector<EvaluationRecord> records;
    std::optional<RefineReport> refine;
    bool failed = false;
    std::string error;
};

} // namespace bbo
