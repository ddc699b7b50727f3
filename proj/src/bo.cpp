#include "bbo/bo.hpp"

#include <cmath>

#include "bbo/acquisition.hpp"
#include "bbo/errors.hpp"
#include "bbo/refine.hpp"

namespace bbo {

namespace {

std::vector<Point> latin_hypercube(const SearchSpace& space, int n, Rng& rng) {
    const std::size_t d = space.dim();
    std::vector<std::vector<std::size_t>> strata(d);
    for (std::size_t j = 0; j < d; ++j) {
        strata[j] = rng.permutation(static_cast<std::size_t>(n));
    }
    std::vector<Point> pts;
    pts.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        Point u(d);
        for (std::size_t j = 0; j < d; ++j) {
            u[j] = (static_cast<double>(strata[j][static_cast<std::size_t>(i)]) + rng.uniform()) /
                   static_cast<double>(n);
        }
        pts.push_back(space.from_unit(u));
    }
    return pts;
}

Point uniform_point(const SearchSpace& space, Rng& rng) {
    Point x(space.dim());
    for (std::size_t j = 0; j < space.dim(); ++j) {
        x[j] = rng.uniform(space.lower()[j], space.upper()[j]);
    }
    return x;
}

bool duplicates_existing(const SearchSpace& space, const Dataset& data, const Point& x) {
    const Point u = space.to_unit(x);
    for (const Point& p : data.points) {
        const Point up = space.to_unit(p);
        bool close = true;
        for (std::size_t j = 0; j < u.size(); ++j) {
            if (std::abs(u[j] - up[j]) > 1e-10) {
                close = false;
                break;
            }
        }
        if (close) {
            return true;
        }
    }
    return false;
}

// Initial design plus the fit/propose/evaluate loop on `space`. `seeded`
// holds evaluations already paid for that lie inside the space.
void bo_phase(BudgetedEvaluator& ev, const SearchSpace& space, const BoConfig& config,
              Rng& rng, Dataset seeded) {
    Dataset data = std::move(seeded);

    if (ev.remaining() <= 0) {
        return;
    }
    const int n_init = std::max(1, std::min(config.n_init, ev.remaining() - 1));
    ev.set_phase(Phase::Init);
    try {
        for (const Point& x : latin_hypercube(space, n_init, rng)) {
            data.add(x, ev.evaluate(x));
        }
    } catch (const BudgetExhausted&) {
        return;
    }

    Surrogate::Options surrogate_options;
    surrogate_options.kind = config.kernel;
    surrogate_options.bounds = config.bounds;
    surrogate_options.init = KernelParams{config.kernel, 1.0, 0.25};
    surrogate_options.standardize_y = true;
    surrogate_options.starts = config.hyper_starts;
    surrogate_options.iterations = config.hyper_iterations;

    ev.set_phase(Phase::Bo);
    while (ev.remaining() > 0) {
        Point proposal;
        bool fallback = false;
        try {
            const Surrogate model = Surrogate::fit(space, data, surrogate_options, rng);
            const AcquisitionQuery query{data.min_value(), &model, &space};
            proposal = maximize_acquisition(query, rng);
        } catch (const NotPositiveDefinite&) {
            proposal = uniform_point(space, rng);
            fallback = true;
        }
        if (!fallback && duplicates_existing(space, data, proposal)) {
            proposal = uniform_point(space, rng);
            fallback = true;
        }
        try {
            data.add(proposal, ev.evaluate(proposal, fallback));
        } catch (const BudgetExhausted&) {
            return;
        }
    }
}

TrialResult finish(const char* method, const Problem& problem, const BudgetedEvaluator& ev,
                   const BoConfig& config) {
    TrialResult result;
    result.method = method;
    result.problem = problem.name;
    result.seed = config.seed;
    result.budget = ev.budget();
    result.records = ev.log();
    return result;
}

} // namespace

TrialResult run_gp_ei(const Problem& problem, int budget, const BoConfig& config) {
    BudgetedEvaluator ev(problem, budget);
    Rng rng(config.seed);
    bo_phase(ev, problem.space, config, rng, Dataset{});
    return finish("gp-ei", problem, ev, config);
}

TrialResult run_ref_gp_ei(const Problem& problem, int budget, const BoConfig& config) {
    BudgetedEvaluator ev(problem, budget);
    Rng rng(config.seed);

    const auto [c1, c2] =
        config.gamma_override.value_or(std::pair{kDefaultGammaScale, kDefaultGammaDecay});
    const RefinePlan plan = make_refine_plan(budget, problem.dim, c1, c2);
    const RefineOutcome outcome = refine_search_space(ev, problem.space, plan.b_ref, rng);

    // Keep the refinement evaluations that landed inside the refined
    // space; at minimum the surviving centre is one of them.
    Dataset seeded;
    for (const EvaluationRecord& rec : outcome.evaluations) {
        if (outcome.subspace.contains(rec.x)) {
            seeded.add(rec.x, rec.y);
        }
    }
    bo_phase(ev, outcome.subspace, config, rng, std::move(seeded));

    TrialResult result = finish("ref-gp-ei", problem, ev, config);
    RefineReport report;
    report.gamma = plan.gamma;
    report.b_ref = plan.b_ref;
    report.k = plan.k;
    report.cost = plan.cost;
    report.dimension_order = outcome.dimension_order;
    report.subspace = outcome.subspace;
    result.refine = std::move(report);
    return result;
}

} // namespace bbo
