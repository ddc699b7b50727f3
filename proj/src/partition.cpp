#include "bbo/partition.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <stdexcept>

#include "bbo/errors.hpp"
#include "bbo/rng.hpp"

namespace bbo {

PartitionTree::PartitionTree(const SearchSpace& root_space, Point root_center, double g,
                             Cell::GKind kind) {
    make_cell(root_space, std::move(root_center), 0, g, kind);
}

std::size_t PartitionTree::make_cell(SearchSpace space, Point center, int depth, double g,
                                     Cell::GKind kind) {
    Cell cell{std::move(space), std::move(center), depth, g, kind, cells_.size()};
    if (leaf_ids_by_depth_.size() <= static_cast<std::size_t>(depth)) {
        leaf_ids_by_depth_.resize(static_cast<std::size_t>(depth) + 1);
    }
    leaf_ids_by_depth_[static_cast<std::size_t>(depth)].push_back(cell.id);
    cells_.push_back(std::move(cell));
    return cells_.back().id;
}

int PartitionTree::max_leaf_depth() const {
    for (std::size_t d = leaf_ids_by_depth_.size(); d > 0; --d) {
        if (!leaf_ids_by_depth_[d - 1].empty()) {
            return static_cast<int>(d - 1);
        }
    }
    return -1;
}

const Cell* PartitionTree::best_leaf_at(int depth) const {
    if (depth < 0 || static_cast<std::size_t>(depth) >= leaf_ids_by_depth_.size()) {
        return nullptr;
    }
    const Cell* best = nullptr;
    for (std::size_t id : leaf_ids_by_depth_[static_cast<std::size_t>(depth)]) {
        const Cell& c = cells_[id];
        if (best == nullptr || c.g < best->g || (c.g == best->g && c.id < best->id)) {
            best = &c;
        }
    }
    return best;
}

std::vector<const Cell*> PartitionTree::leaves() const {
    std::vector<const Cell*> out;
    for (const auto& level : leaf_ids_by_depth_) {
        for (std::size_t id : level) {
            out.push_back(&cells_[id]);
        }
    }
    return out;
}

void PartitionTree::commit_expansion(std::size_t parent_id, std::vector<Cell>&& children) {
    const int depth = cells_[parent_id].depth;
    auto& level = leaf_ids_by_depth_[static_cast<std::size_t>(depth)];
    level.erase(std::find(level.begin(), level.end(), parent_id));
    for (Cell& child : children) {
        make_cell(std::move(child.space), std::move(child.center), child.depth, child.g,
                  child.kind);
    }
    ++expansions_;
}

double bamsoo_beta(long n_evaluations, double eta) {
    const double n = static_cast<double>(n_evaluations);
    return std::sqrt(2.0 * std::log(std::numbers::pi * std::numbers::pi * n * n / (6.0 * eta)));
}

namespace {

struct GateResult {
    double g = 0.0;
    Cell::GKind kind = Cell::GKind::Evaluated;
};

// The gate decides, per candidate centre, whether to spend an evaluation.
// force_evaluate is set for the root, which is always evaluated.
using Gate = std::function<GateResult(const Point&, bool force_evaluate)>;

// Expands leaves sweep by sweep until the budget runs out.
class SweepDriver {
public:
    SweepDriver(BudgetedEvaluator& ev, const PartitionOptions& options, Gate gate,
                const TreeObserver& observer)
        : ev_(ev), options_(options), gate_(std::move(gate)), observer_(observer) {
        if (options_.k < 1 || options_.k % 2 == 0) {
            throw std::invalid_argument("partition: K must be a positive odd integer");
        }
        const SearchSpace& root = ev_.problem().space;
        for (std::size_t j = 0; j < root.dim(); ++j) {
            root_width_.push_back(root.width(j));
        }
    }

    void run() {
        ev_.set_phase(Phase::Tree);
        const SearchSpace& root_space = ev_.problem().space;
        Point root_center = root_space.center();
        GateResult root;
        try {
            root = gate_(root_center, /*force_evaluate=*/true);
        } catch (const BudgetExhausted&) {
            return;
        }
        tree_.emplace(root_space, std::move(root_center), root.g, root.kind);

        const long cap = options_.max_expansions > 0 ? options_.max_expansions
                                                     : 1000 + 50L * ev_.budget();
        try {
            int sweep_index = 0;
            while (ev_.remaining() > 0 &&
                   static_cast<long>(tree_->expansions()) < cap) {
                if (!sweep(cap, sweep_index++)) {
                    break;
                }
            }
        } catch (const BudgetExhausted&) {
            // Evaluations already spent on a partial expansion stay in the log.
        }
    }

    const PartitionTree* tree() const { return tree_ ? &*tree_ : nullptr; }

private:
    int h_max(long n) const {
        return n <= 0 ? 0 : static_cast<int>(std::ceil(std::sqrt(static_cast<double>(n))));
    }

    bool sweep(long cap, int sweep_index) {
        double v_max = std::numeric_limits<double>::infinity();
        bool expanded_any = false;
        const int frozen_depth = tree_->max_leaf_depth();
        const long frozen_n = static_cast<long>(tree_->expansions());
        for (int h = 0;; ++h) {
            const int depth_bound =
                options_.freeze_depth_per_sweep ? frozen_depth : tree_->max_leaf_depth();
            const long n = options_.dynamic_h_max ? static_cast<long>(tree_->expansions())
                                                  : frozen_n;
            if (h > std::min(depth_bound, h_max(n))) {
                break;
            }
            const Cell* leaf = tree_->best_leaf_at(h);
            if (leaf == nullptr || !(leaf->g < v_max)) {
                continue;
            }
            const double score = leaf->g;
            expand(leaf->id, sweep_index);
            v_max = score;
            expanded_any = true;
            if (static_cast<long>(tree_->expansions()) >= cap || ev_.remaining() <= 0) {
                break;
            }
        }
        return expanded_any;
    }

    std::size_t split_axis(const Cell& cell) const {
        std::size_t axis = 0;
        double best = -1.0;
        for (std::size_t j = 0; j < cell.space.dim(); ++j) {
            const double w = cell.space.width(j) / root_width_[j];
            if (w > best) {
                best = w;
                axis = j;
            }
        }
        return axis;
    }

    void expand(std::size_t parent_id, int sweep_index) {
        // Copy: the cell vector may reallocate while children are added.
        const Cell parent = tree_->cells()[parent_id];
        const int k = options_.k;
        const int mid = (k - 1) / 2;
        const std::size_t axis = split_axis(parent);
        const std::vector<SearchSpace> parts = parent.space.split_dimension(axis, k);

        std::vector<Cell> children;
        children.reserve(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) {
            const SearchSpace& part = parts[static_cast<std::size_t>(i)];
            Cell child;
            child.space = part;
            child.depth = parent.depth + 1;
            if (i == mid) {
                // Centre and score carry over without a new evaluation.
                child.center = parent.center;
                child.g = parent.g;
                child.kind = parent.kind;
            } else {
                child.center = parent.center;
                child.center[axis] = (part.lower()[axis] + part.upper()[axis]) / 2.0;
                const GateResult r = gate_(child.center, false); // may throw BudgetExhausted
                child.g = r.g;
                child.kind = r.kind;
            }
            children.push_back(std::move(child));
        }
        tree_->commit_expansion(parent.id, std::move(children));
        if (observer_) {
            observer_(*tree_, sweep_index, tree_->cells()[parent_id]);
        }
    }

    BudgetedEvaluator& ev_;
    PartitionOptions options_;
    Gate gate_;
    const TreeObserver& observer_;
    std::vector<double> root_width_;
    std::optional<PartitionTree> tree_;
};

TrialResult finish(const char* method, const Problem& problem, const BudgetedEvaluator& ev) {
    TrialResult result;
    result.method = method;
    result.problem = problem.name;
    result.budget = ev.budget();
    result.records = ev.log();
    return result;
}

} // namespace

TrialResult run_soo(const Problem& problem, int budget, const PartitionOptions& options,
                    const TreeObserver& observer) {
    BudgetedEvaluator ev(problem, budget);
    SweepDriver driver(
        ev, options,
        [&ev](const Point& x, bool) { return GateResult{ev.evaluate(x), Cell::GKind::Evaluated}; },
        observer);
    driver.run();
    return finish("soo", problem, ev);
}

TrialResult run_bamsoo(const Problem& problem, int budget, const BamsooOptions& options,
                       const TreeObserver& observer) {
    BudgetedEvaluator ev(problem, budget);
    Rng rng(options.seed);

    Dataset data; // raw coordinates; the surrogate maps to the unit cube
    std::optional<Surrogate> model;
    bool model_stale = true;

    Surrogate::Options surrogate_options;
    surrogate_options.kind = KernelKind::Matern52;
    surrogate_options.bounds = options.bounds;
    surrogate_options.init = KernelParams{KernelKind::Matern52, 1.0, 0.25};
    surrogate_options.standardize_y = false;
    surrogate_options.starts = options.hyper_starts;
    surrogate_options.iterations = options.hyper_iterations;

    auto gate = [&](const Point& x, bool force_evaluate) -> GateResult {
        if (!force_evaluate) {
            if (model_stale) {
                model.reset();
                try {
                    model = Surrogate::fit(problem.space, data, surrogate_options, rng);
                } catch (const NotPositiveDefinite&) {
                    // Degrade to always-evaluate until the next refit.
                }
                model_stale = false;
            }
            if (model) {
                const GpModel::Prediction p = model->predict(x);
                const double beta = bamsoo_beta(ev.count(), options.eta);
                const double lower = p.mean - beta * std::sqrt(p.var);
                if (lower > ev.best().y) {
                    return GateResult{lower, Cell::GKind::SurrogateBound};
                }
            }
        }
        const double y = ev.evaluate(x, /*fallback=*/!force_evaluate && !model);
        data.add(x, y);
        model_stale = true;
        return GateResult{y, Cell::GKind::Evaluated};
    };

    SweepDriver driver(ev, options.tree, gate, observer);
    driver.run();
    TrialResult result = finish("bamsoo", problem, ev);
    result.seed = options.seed;
    return result;
}

} // namespace bbo
