#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "bbo/gp.hpp"
#include "bbo/objective.hpp"
#include "bbo/trial.hpp"

namespace bbo {

// Node of the SOO/BaMSOO partition tree. g is the cell's score: the
// objective at its centre, or (BaMSOO only) a GP lower bound when the
// evaluation was skipped.
struct Cell {
    enum class GKind { Evaluated, SurrogateBound };

    SearchSpace space;
    Point center;
    int depth = 0;
    double g = 0.0;
    GKind kind = GKind::Evaluated;
    std::size_t id = 0; // creation index; deterministic tie-breaking
};

// Leaf bookkeeping for the sweep drivers. Leaves at every depth are
// disjoint and together tile the root space.
class PartitionTree {
public:
    PartitionTree(const SearchSpace& root_space, Point root_center, double g, Cell::GKind kind);

    const std::vector<Cell>& cells() const { return cells_; }
    std::size_t expansions() const { return expansions_; }
    int max_leaf_depth() const;

    // Lowest-g leaf at a depth, ties to the lowest creation index;
    // nullptr when the depth holds no leaves.
    const Cell* best_leaf_at(int depth) const;

    std::vector<const Cell*> leaves() const;

    // Atomically replaces a leaf with its children.
    void commit_expansion(std::size_t parent_id, std::vector<Cell>&& children);

    std::size_t make_cell(SearchSpace space, Point center, int depth, double g, Cell::GKind kind);

private:
    std::vector<Cell> cells_;
    std::vector<std::vector<std::size_t>> leaf_ids_by_depth_;
    std::size_t expansions_ = 0;
};

// Called after each completed expansion with the sweep number (from 0)
// and the cell that was just expanded.
using TreeObserver = std::function<void(const PartitionTree&, int sweep, const Cell& expanded)>;

struct PartitionOptions {
    int k = 3; // odd division number per expansion
    // Sweep conventions. Defaults reproduce the published deterministic
    // Branin result: the depth bound is frozen when a sweep starts while
    // h_max(n) = ceil(sqrt(n)) tracks expansions as they happen.
    bool freeze_depth_per_sweep = true;
    bool dynamic_h_max = true;
    long max_expansions = 0; // stall guard; 0 derives a generous cap from the budget
};

struct BamsooOptions {
    PartitionOptions tree;
    double eta = 0.05;
    std::uint64_t seed = 0;
    HyperBounds bounds;
    int hyper_starts = 32;
    int hyper_iterations = 50;
};

// Confidence scale sqrt(2 log(pi^2 n^2 / (6 eta))) after n true evaluations.
double bamsoo_beta(long n_evaluations, double eta);

// Deterministic optimistic tree search: repeated sweeps expand, per depth,
// the lowest-g leaf whose score beats every cell already expanded in the
// sweep. The middle child inherits the parent's centre and score; the
// other K-1 children are evaluated.
TrialResult run_soo(const Problem& problem, int budget, const PartitionOptions& options = {},
                    const TreeObserver& observer = {});

// SOO with a GP gate: a candidate child is only evaluated when its GP
// lower bound mu - beta_N * sigma does not exceed the incumbent best;
// otherwise the bound itself becomes the cell's score and no budget is
// spent. The GP (Matern 5/2, unit-cube inputs, raw outputs) is refit by
// likelihood maximization after every true evaluation.
TrialResult run_bamsoo(const Problem& problem, int budget, const BamsooOptions& options = {},
                       const TreeObserver& observer = {});

} // namespace bbo
