#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bbo/gp.hpp"
#include "bbo/trial.hpp"

namespace bbo {

// Method-independent knobs shared by a whole experiment grid.
struct RunParams {
    int n_init = 5;
    double gamma_c1 = 0.59;
    double gamma_c2 = 0.033;
    int soo_k = 3;
    double eta = 0.05;
    KernelKind kernel = KernelKind::SquaredExponential;
};

// Evaluation budget: a fixed count, or 10 x problem dimension.
struct BudgetRule {
    bool times_dim = false;
    int value = 0; // fixed budget, or the per-dimension factor (10)

    int resolve(std::size_t dim) const {
        return times_dim ? value * static_cast<int>(dim) : value;
    }
    static BudgetRule fixed(int b) { return {false, b}; }
    static BudgetRule ten_d() { return {true, 10}; }
};

std::vector<std::string> method_names();

// Runs one method by registry name (gp-ei, ref-gp-ei, soo, bamsoo).
TrialResult run_method(const std::string& method, const Problem& problem, int budget,
                       const RunParams& params, std::uint64_t seed);

// Full grid: every (method, problem, trial) cell with per-trial seed
// base_seed + trial, each on a fresh evaluator. Cells run concurrently up
// to `jobs`; outputs are ordered method-major, then problem, then trial,
// independent of completion order. A failing cell is recorded and the
// grid continues.
std::vector<TrialResult> run_experiment(const std::vector<std::string>& methods,
                                        const std::vector<std::string>& problems, int trials,
                                        const BudgetRule& budget_rule, std::uint64_t base_seed,
                                        const RunParams& params, int jobs = 1);

// Mean and standard error of best-so-far per evaluation index across the
// trials of one (method, problem) group.
struct SummarySeries {
    std::string method;
    std::string problem;
    int n_trials = 0;
    bool se_flagged = false; // fewer than 2 trials: stderr reported as 0
    std::vector<double> mean_best;   // index i-1 -> evaluation i
    std::vector<double> stderr_best; // sample std (n-1) / sqrt(n)
};

SummarySeries summarize(const std::vector<const TrialResult*>& group);
std::vector<SummarySeries> summarize_all(const std::vector<TrialResult>& results);

// Everything write_results needs to reproduce a run.
struct RunMetadata {
    std::vector<std::string> methods;
    std::vector<std::string> problems;
    int trials = 0;
    std::string budget_rule; // "10d" or the fixed number
    std::uint64_t base_seed = 0;
    RunParams params;
    int jobs = 1;
};

// One results_<problem>.csv per problem (columns: method, problem, trial,
// seed, eval_index, phase, x_1..x_d, y, best_so_far) plus metadata.json.
// Floats carry 17 significant digits so parsing round-trips exactly.
void write_results(const std::vector<TrialResult>& results, const std::string& out_dir,
                   const RunMetadata& metadata);

// Reads every results_*.csv under a directory written by write_results.
std::vector<TrialResult> read_results(const std::string& in_dir);

void write_summary(const std::vector<SummarySeries>& series, const std::string& path);

// y-axis range covering mean -/+ stderr across a curve group.
std::pair<double, double> curve_axis_range(const std::vector<const SummarySeries*>& group);

// Per problem: a whitespace-delimited table (eval_index, then a
// mean/stderr pair per method) and an SVG chart with +-1 SE bands.
void emit_curves(const std::vector<SummarySeries>& series, const std::string& out_dir);

} // namespace bbo
