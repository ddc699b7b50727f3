#include "bbo/refine.hpp"

#include <cmath>
#include <stdexcept>

namespace bbo {

double refine_ratio(int budget, std::size_t dim, double c1, double c2) {
    if (budget < 1 || dim < 1) {
        throw std::invalid_argument("refine_ratio: budget and dim must be >= 1");
    }
    return c1 * std::exp(-c2 * static_cast<double>(budget) / static_cast<double>(dim));
}

long refine_cost(int k, std::size_t dim) {
    if (k < 1 || k % 2 == 0) {
        throw std::invalid_argument("refine_cost: K must be a positive odd integer");
    }
    return k + static_cast<long>(dim - 1) * (k - 1);
}

long refine_cost_even(int k, std::size_t dim) {
    if (k < 2 || k % 2 != 0) {
        throw std::invalid_argument("refine_cost_even: K must be a positive even integer");
    }
    return static_cast<long>(dim) * k;
}

int division_number(double b_ref, std::size_t dim) {
    if (dim < 1) {
        throw std::invalid_argument("division_number: dim must be >= 1");
    }
    int best = 1;
    for (int k = 3; refine_cost(k, dim) <= b_ref; k += 2) {
        best = k;
    }
    return best;
}

RefinePlan make_refine_plan(int budget, std::size_t dim, double c1, double c2) {
    RefinePlan plan;
    plan.gamma = refine_ratio(budget, dim, c1, c2);
    plan.b_ref = plan.gamma * budget;
    plan.k = division_number(plan.b_ref, dim);
    plan.cost = plan.k >= 3 ? refine_cost(plan.k, dim) : 0;
    return plan;
}

RefineOutcome refine_search_space(BudgetedEvaluator& ev, const SearchSpace& space,
                                  double b_ref, Rng& rng) {
    const std::size_t d = space.dim();
    const int k = division_number(b_ref, d);
    RefineOutcome out{space, {}, {}, k};
    if (k <= 1) {
        return out;
    }

    ev.set_phase(Phase::Refine);
    const std::size_t log_start = ev.log().size();
    out.dimension_order = rng.permutation(d);

    SearchSpace current = space;
    Point centre = current.center();
    double centre_value = 0.0;
    bool have_centre_value = false;
    const int mid = (k - 1) / 2;

    for (std::size_t axis : out.dimension_order) {
        const std::vector<SearchSpace> children = current.split_dimension(axis, k);
        std::vector<Point> candidates(static_cast<std::size_t>(k));
        std::vector<double> values(static_cast<std::size_t>(k));
        int winner = -1;
        for (int i = 0; i < k; ++i) {
            // The middle candidate is the current centre point itself;
            // after the first axis its value is already known.
            if (i == mid) {
                candidates[i] = centre;
                values[i] = have_centre_value ? centre_value : ev.evaluate(centre);
            } else {
                // Off-axis coordinates stay bit-identical to the centre.
                candidates[i] = centre;
                const SearchSpace& child = children[static_cast<std::size_t>(i)];
                candidates[i][axis] = (child.lower()[axis] + child.upper()[axis]) / 2.0;
                values[i] = ev.evaluate(candidates[i]);
            }
            if (winner < 0 || values[i] < values[winner]) {
                winner = i;
            }
        }
        current = children[static_cast<std::size_t>(winner)];
        centre = candidates[static_cast<std::size_t>(winner)];
        centre_value = values[static_cast<std::size_t>(winner)];
        have_centre_value = true;
    }

    out.subspace = current;
    out.evaluations.assign(ev.log().begin() + static_cast<std::ptrdiff_t>(log_start),
                           ev.log().end());
    return out;
}

} // namespace bbo
