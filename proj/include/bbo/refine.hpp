#pragma once

#include <cstddef>
#include <vector>

#include "bbo/objective.hpp"
#include "bbo/rng.hpp"
#include "bbo/space.hpp"

namespace bbo {

// Default constants of the refinement budget ratio
// gamma = c1 * exp(-c2 * B / d).
inline constexpr double kDefaultGammaScale = 0.59;
inline constexpr double kDefaultGammaDecay = 0.033;

// Fraction of the budget reserved for search-space refinement. Strictly
// decreasing in B/d and vanishing as B grows.
double refine_ratio(int budget, std::size_t dim, double c1 = kDefaultGammaScale,
                    double c2 = kDefaultGammaDecay);

// Evaluations consumed by a K-way per-axis refinement with centre reuse:
// K + (d-1)(K-1). K must be odd (the reuse only works for odd K).
long refine_cost(int k, std::size_t dim);

// Cost without centre reuse, d*K. Reference formula for even K; never
// selected by division_number.
long refine_cost_even(int k, std::size_t dim);

// Largest odd K >= 3 whose cost fits within b_ref; 1 when none fits
// (refinement is then skipped entirely).
int division_number(double b_ref, std::size_t dim);

struct RefinePlan {
    double gamma = 0.0;
    double b_ref = 0.0;
    int k = 1;
    long cost = 0; // evaluations the refinement will actually use
};

RefinePlan make_refine_plan(int budget, std::size_t dim, double c1 = kDefaultGammaScale,
                            double c2 = kDefaultGammaDecay);

struct RefineOutcome {
    SearchSpace subspace;
    std::vector<EvaluationRecord> evaluations; // refinement's own evaluations
    std::vector<std::size_t> dimension_order;  // axis permutation used
    int k = 1;
};

// Shrinks the space one axis at a time: axes are visited in a uniformly
// random order; each axis is split into K equal pieces and the sub-region
// whose centre evaluates lowest is kept. The surviving centre value is
// reused as the middle candidate of every subsequent axis, so exactly
// K + (d-1)(K-1) evaluations are spent. With K <= 1 the space is returned
// unchanged and nothing is evaluated.
RefineOutcome refine_search_space(BudgetedEvaluator& ev, const SearchSpace& space,
                                  double b_ref, Rng& rng);

} // namespace bbo
