#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "bbo/gp.hpp"
#include "bbo/objective.hpp"
#include "bbo/trial.hpp"

namespace bbo {

struct BoConfig {
    int n_init = 5; // initial-design size, clipped so one EI step can still run
    KernelKind kernel = KernelKind::SquaredExponential;
    std::uint64_t seed = 0;
    bool refine_enabled = false;
    // Replaces the default (0.59, 0.033) pair of the refinement ratio.
    std::optional<std::pair<double, double>> gamma_override;
    HyperBounds bounds;
    int hyper_starts = 32;
    int hyper_iterations = 50;
};

// GP-EI loop: initial Latin-hypercube design, then fit / maximize EI /
// evaluate / append until the budget is spent.
TrialResult run_gp_ei(const Problem& problem, int budget, const BoConfig& config);

// Refinement followed by the GP-EI loop on the refined space. Refinement
// evaluations count against the budget; those inside the refined space
// seed the GP dataset.
TrialResult run_ref_gp_ei(const Problem& problem, int budget, const BoConfig& config);

} // namespace bbo
