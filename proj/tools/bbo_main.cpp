// bbo: low-budget black-box optimization runs, refinement plans and
// result summaries from the command line.

#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bbo/harness.hpp"
#include "bbo/refine.hpp"

namespace {

std::vector<std::string> split_list(const std::string& csv) {
    std::vector<std::string> out;
    std::stringstream ss(csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

bbo::BudgetRule parse_budget(const std::string& text) {
    if (text == "10d") {
        return bbo::BudgetRule::ten_d();
    }
    try {
        const int b = std::stoi(text);
        if (b < 1) {
            throw std::invalid_argument("non-positive");
        }
        return bbo::BudgetRule::fixed(b);
    } catch (const std::exception&) {
        throw CLI::ValidationError("--budget", "expects a positive integer or '10d'");
    }
}

int cmd_run(const std::string& methods_csv, const std::string& problems_csv,
            const std::string& budget_text, int trials, std::uint64_t seed,
            const std::string& out_dir, int jobs, const bbo::RunParams& params) {
    const auto methods = split_list(methods_csv);
    const auto problems = split_list(problems_csv);
    const bbo::BudgetRule budget = parse_budget(budget_text);

    const auto results =
        bbo::run_experiment(methods, problems, trials, budget, seed, params, jobs);

    bbo::RunMetadata meta;
    meta.methods = methods;
    meta.problems = problems;
    meta.trials = trials;
    meta.budget_rule = budget_text;
    meta.base_seed = seed;
    meta.params = params;
    meta.jobs = jobs;
    bbo::write_results(results, out_dir, meta);

    int failed = 0;
    for (const auto& r : results) {
        if (r.failed) {
            ++failed;
            std::cerr << "cell failed: " << r.method << '/' << r.problem << " trial " << r.trial
                      << ": " << r.error << '\n';
        }
    }
    std::cout << "wrote " << results.size() - static_cast<std::size_t>(failed)
              << " trials to " << out_dir << '\n';
    return failed == 0 ? 0 : 1;
}

int cmd_refine(const std::string& problem_name, int budget, std::uint64_t seed, double c1,
               double c2) {
    const bbo::Problem& problem = bbo::problem_by_name(problem_name);
    const bbo::RefinePlan plan = bbo::make_refine_plan(budget, problem.dim, c1, c2);

    bbo::BudgetedEvaluator ev(problem, budget);
    bbo::Rng rng(seed);
    const bbo::RefineOutcome outcome =
        bbo::refine_search_space(ev, problem.space, plan.b_ref, rng);

    std::cout << "problem:     " << problem.name << " (d=" << problem.dim << ")\n";
    std::cout << "budget:      " << budget << '\n';
    std::cout << "gamma:       " << plan.gamma << '\n';
    std::cout << "b_ref:       " << plan.b_ref << '\n';
    std::cout << "K:           " << plan.k << '\n';
    std::cout << "cost:        " << plan.cost << " (used " << ev.count() << ")\n";
    std::cout << "axis order: ";
    if (outcome.dimension_order.empty()) {
        std::cout << " (refinement skipped)";
    }
    for (std::size_t axis : outcome.dimension_order) {
        std::cout << ' ' << axis;
    }
    std::cout << '\n';
    std::cout << "refined bounds:\n";
    for (std::size_t j = 0; j < problem.dim; ++j) {
        std::cout << "  axis " << j << ": [" << outcome.subspace.lower()[j] << ", "
                  << outcome.subspace.upper()[j] << "]\n";
    }
    if (ev.count() > 0) {
        std::cout << "best refine value: " << ev.best().y << '\n';
    }
    return 0;
}

int cmd_summarize(const std::string& in_dir, const std::string& out_dir) {
    const auto results = bbo::read_results(in_dir);
    const auto series = bbo::summarize_all(results);
    std::filesystem::create_directories(out_dir);
    bbo::write_summary(series, (std::filesystem::path(out_dir) / "summary.csv").string());
    bbo::emit_curves(series, out_dir);
    std::cout << "wrote summary.csv and curves for " << series.size() << " method/problem pairs to "
              << out_dir << '\n';
    return 0;
}

int cmd_list() {
    std::cout << "problems:\n";
    for (const auto& name : bbo::problem_names()) {
        const bbo::Problem& p = bbo::problem_by_name(name);
        std::cout << "  " << name << " (d=" << p.dim << ")\n";
    }
    std::cout << "methods:\n";
    for (const auto& name : bbo::method_names()) {
        std::cout << "  " << name << '\n';
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"low-budget black-box optimization benchmark runner"};
    app.require_subcommand(1);

    std::string methods = "gp-ei,ref-gp-ei";
    std::string problems = "sphere";
    std::string budget_text = "10d";
    int trials = 1;
    std::uint64_t seed = 0;
    std::string out_dir = "out";
    std::string in_dir;
    int jobs = 1;
    bbo::RunParams params;

    auto* run = app.add_subcommand("run", "run an experiment grid and write result CSVs");
    run->add_option("--method", methods, "comma-separated method names")->required();
    run->add_option("--problem", problems, "comma-separated problem names")->required();
    run->add_option("--budget", budget_text, "evaluation budget: integer or '10d'")
        ->capture_default_str();
    run->add_option("--trials", trials, "trials per cell")->capture_default_str();
    run->add_option("--seed", seed, "base seed; trial t uses seed+t")->capture_default_str();
    run->add_option("--out", out_dir, "output directory")->required();
    run->add_option("--jobs", jobs, "max concurrent trials")->capture_default_str();
    run->add_option("--gamma-c1", params.gamma_c1, "refinement ratio scale")
        ->capture_default_str();
    run->add_option("--gamma-c2", params.gamma_c2, "refinement ratio decay")
        ->capture_default_str();
    run->add_option("--n-init", params.n_init, "initial design size")->capture_default_str();
    run->add_option("--soo-k", params.soo_k, "division number for soo/bamsoo")
        ->capture_default_str();
    run->add_option("--eta", params.eta, "bamsoo confidence parameter")->capture_default_str();

    std::string refine_problem;
    int refine_budget = 50;
    double c1 = bbo::kDefaultGammaScale;
    double c2 = bbo::kDefaultGammaDecay;
    auto* refine = app.add_subcommand("refine", "print the refinement plan and refined bounds");
    refine->add_option("--problem", refine_problem, "problem name")->required();
    refine->add_option("--budget", refine_budget, "whole-run budget B")->required();
    refine->add_option("--seed", seed, "rng seed for the axis order")->capture_default_str();
    refine->add_option("--gamma-c1", c1, "refinement ratio scale")->capture_default_str();
    refine->add_option("--gamma-c2", c2, "refinement ratio decay")->capture_default_str();

    auto* summarize = app.add_subcommand("summarize", "turn result CSVs into summary and curves");
    summarize->add_option("--in", in_dir, "directory with results_*.csv")->required();
    summarize->add_option("--out", out_dir, "output directory")->required();

    auto* list = app.add_subcommand("list", "list problems and methods");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            return cmd_run(methods, problems, budget_text, trials, seed, out_dir, jobs, params);
        }
        if (refine->parsed()) {
            return cmd_refine(refine_problem, refine_budget, seed, c1, c2);
        }
        if (summarize->parsed()) {
            return cmd_summarize(in_dir, out_dir);
        }
        if (list->parsed()) {
            return cmd_list();
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
