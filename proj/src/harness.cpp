#include "bbo/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "bbo/bo.hpp"
#include "bbo/partition.hpp"

namespace bbo {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

Phase parse_phase(const std::string& s) {
    if (s == "refine") return Phase::Refine;
    if (s == "init") return Phase::Init;
    if (s == "bo") return Phase::Bo;
    if (s == "tree") return Phase::Tree;
    throw std::invalid_argument("unknown phase: " + s);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) {
        out.push_back(field);
    }
    return out;
}

} // namespace

std::vector<std::string> method_names() {
    return {"gp-ei", "ref-gp-ei", "soo", "bamsoo"};
}

TrialResult run_method(const std::string& method, const Problem& problem, int budget,
                       const RunParams& params, std::uint64_t seed) {
    if (method == "gp-ei" || method == "ref-gp-ei") {
        BoConfig config;
        config.n_init = params.n_init;
        config.kernel = params.kernel;
        config.seed = seed;
        config.refine_enabled = method == "ref-gp-ei";
        config.gamma_override = std::pair{params.gamma_c1, params.gamma_c2};
        return config.refine_enabled ? run_ref_gp_ei(problem, budget, config)
                                     : run_gp_ei(problem, budget, config);
    }
    if (method == "soo") {
        PartitionOptions options;
        options.k = params.soo_k;
        TrialResult r = run_soo(problem, budget, options);
        r.seed = seed;
        return r;
    }
    if (method == "bamsoo") {
        BamsooOptions options;
        options.tree.k = params.soo_k;
        options.eta = params.eta;
        options.seed = seed;
        return run_bamsoo(problem, budget, options);
    }
    throw std::invalid_argument("unknown method: " + method);
}

std::vector<TrialResult> run_experiment(const std::vector<std::string>& methods,
                                        const std::vector<std::string>& problems, int trials,
                                        const BudgetRule& budget_rule, std::uint64_t base_seed,
                                        const RunParams& params, int jobs) {
    if (trials < 1) {
        throw std::invalid_argument("run_experiment: trials must be >= 1");
    }
    struct CellSpec {
        std::string method;
        const Problem* problem;
        int trial;
    };
    std::vector<CellSpec> cells;
    for (const std::string& m : methods) {
        for (const std::string& p : problems) {
            const Problem& problem = problem_by_name(p);
            for (int t = 0; t < trials; ++t) {
                cells.push_back({m, &problem, t});
            }
        }
    }

    std::vector<TrialResult> results(cells.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size()) {
                return;
            }
            const CellSpec& cell = cells[i];
            const std::uint64_t seed = base_seed + static_cast<std::uint64_t>(cell.trial);
            const int budget = budget_rule.resolve(cell.problem->dim);
            TrialResult r;
            try {
                r = run_method(cell.method, *cell.problem, budget, params, seed);
            } catch (const std::exception& e) {
                r.failed = true;
                r.error = e.what();
                r.method = cell.method;
                r.problem = cell.problem->name;
                r.budget = budget;
                r.seed = seed;
            }
            r.trial = cell.trial;
            results[i] = std::move(r);
        }
    };

    const int n_threads = std::max(1, std::min<int>(jobs, static_cast<int>(cells.size())));
    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(n_threads));
        for (int i = 0; i < n_threads; ++i) {
            pool.emplace_back(worker);
        }
        for (std::thread& t : pool) {
            t.join();
        }
    }
    return results;
}

SummarySeries summarize(const std::vector<const TrialResult*>& group) {
    if (group.empty()) {
        throw std::invalid_argument("summarize: empty group");
    }
    SummarySeries s;
    s.method = group.front()->method;
    s.problem = group.front()->problem;
    s.n_trials = static_cast<int>(group.size());
    s.se_flagged = group.size() < 2;

    const std::size_t budget = group.front()->records.size();
    for (const TrialResult* t : group) {
        if (t->records.size() != budget) {
            throw std::invalid_argument("summarize: trials do not share one budget");
        }
    }

    const double n = static_cast<double>(group.size());
    s.mean_best.resize(budget);
    s.stderr_best.resize(budget);
    for (std::size_t i = 0; i < budget; ++i) {
        double mean = 0.0;
        for (const TrialResult* t : group) {
            mean += t->records[i].best_so_far;
        }
        mean /= n;
        double var = 0.0;
        if (group.size() >= 2) {
            for (const TrialResult* t : group) {
                const double d = t->records[i].best_so_far - mean;
                var += d * d;
            }
            var /= (n - 1.0);
        }
        s.mean_best[i] = mean;
        s.stderr_best[i] = group.size() >= 2 ? std::sqrt(var / n) : 0.0;
    }
    return s;
}

std::vector<SummarySeries> summarize_all(const std::vector<TrialResult>& results) {
    // Group in first-appearance order so output order is deterministic.
    std::vector<std::pair<std::string, std::string>> keys;
    std::map<std::pair<std::string, std::string>, std::vector<const TrialResult*>> groups;
    for (const TrialResult& r : results) {
        if (r.failed) {
            continue;
        }
        const auto key = std::pair{r.method, r.problem};
        if (groups.find(key) == groups.end()) {
            keys.push_back(key);
        }
        groups[key].push_back(&r);
    }
    std::vector<SummarySeries> out;
    out.reserve(keys.size());
    for (const auto& key : keys) {
        out.push_back(summarize(groups[key]));
    }
    return out;
}

void write_results(const std::vector<TrialResult>& results, const std::string& out_dir,
                   const RunMetadata& metadata) {
    fs::create_directories(out_dir);

    // Per-problem files: the x_1..x_d column block is fixed per problem.
    std::vector<std::string> problem_order;
    for (const TrialResult& r : results) {
        if (std::find(problem_order.begin(), problem_order.end(), r.problem) ==
            problem_order.end()) {
            problem_order.push_back(r.problem);
        }
    }

    for (const std::string& problem : problem_order) {
        std::size_t d = 0;
        for (const TrialResult& r : results) {
            if (r.problem == problem && !r.records.empty()) {
                d = r.records.front().x.size();
                break;
            }
        }
        if (d == 0) {
            continue; // no successful records for this problem
        }
        const fs::path path = fs::path(out_dir) / ("results_" + problem + ".csv");
        std::ofstream out(path);
        if (!out) {
            throw std::runtime_error("write_results: cannot open " + path.string());
        }
        out << "method,problem,trial,seed,eval_index,phase";
        for (std::size_t j = 1; j <= d; ++j) {
            out << ",x_" << j;
        }
        out << ",y,best_so_far\n";
        for (const TrialResult& r : results) {
            if (r.problem != problem || r.failed) {
                continue;
            }
            for (const EvaluationRecord& rec : r.records) {
                out << r.method << ',' << r.problem << ',' << r.trial << ',' << r.seed << ','
                    << rec.index << ',' << phase_name(rec.phase);
                for (double x : rec.x) {
                    out << ',' << fmt17(x);
                }
                out << ',' << fmt17(rec.y) << ',' << fmt17(rec.best_so_far) << '\n';
            }
        }
        if (!out.good()) {
            throw std::runtime_error("write_results: write failed for " + path.string());
        }
    }

    json meta;
    meta["methods"] = metadata.methods;
    meta["problems"] = metadata.problems;
    meta["trials"] = metadata.trials;
    meta["budget_rule"] = metadata.budget_rule;
    meta["base_seed"] = metadata.base_seed;
    meta["jobs"] = metadata.jobs;
    meta["params"] = {{"n_init", metadata.params.n_init},
                      {"gamma_c1", metadata.params.gamma_c1},
                      {"gamma_c2", metadata.params.gamma_c2},
                      {"soo_k", metadata.params.soo_k},
                      {"eta", metadata.params.eta},
                      {"kernel", metadata.params.kernel == KernelKind::SquaredExponential
                                     ? "squared-exponential"
                                     : "matern52"}};
    json cells = json::array();
    json failures = json::array();
    for (const TrialResult& r : results) {
        json cell = {{"method", r.method},
                     {"problem", r.problem},
                     {"trial", r.trial},
                     {"seed", r.seed},
                     {"budget", r.budget}};
        if (r.refine) {
            cell["gamma"] = r.refine->gamma;
            cell["b_ref"] = r.refine->b_ref;
            cell["k"] = r.refine->k;
            cell["refine_cost"] = r.refine->cost;
            cell["dimension_order"] = r.refine->dimension_order;
            if (r.refine->subspace) {
                cell["refined_lower"] = r.refine->subspace->lower();
                cell["refined_upper"] = r.refine->subspace->upper();
            }
        }
        cells.push_back(std::move(cell));
        if (r.failed) {
            failures.push_back({{"method", r.method},
                                {"problem", r.problem},
                                {"trial", r.trial},
                                {"error", r.error}});
        }
    }
    meta["cells"] = std::move(cells);
    meta["failures"] = std::move(failures);

    const fs::path meta_path = fs::path(out_dir) / "metadata.json";
    std::ofstream out(meta_path);
    if (!out) {
        throw std::runtime_error("write_results: cannot open " + meta_path.string());
    }
    out << meta.dump(2) << '\n';
}

std::vector<TrialResult> read_results(const std::string& in_dir) {
    std::vector<fs::path> files;
    if (!fs::is_directory(in_dir)) {
        throw std::runtime_error("read_results: not a directory: " + in_dir);
    }
    for (const auto& entry : fs::directory_iterator(in_dir)) {
        const std::string name = entry.path().filename().string();
        if (name.rfind("results_", 0) == 0 && entry.path().extension() == ".csv") {
            files.push_back(entry.path());
        }
    }
    std::sort(files.begin(), files.end());
    if (files.empty()) {
        throw std::runtime_error("read_results: no results_*.csv under " + in_dir);
    }

    std::vector<TrialResult> results;
    std::map<std::tuple<std::string, std::string, int>, std::size_t> index;
    for (const fs::path& file : files) {
        std::ifstream in(file);
        if (!in) {
            throw std::runtime_error("read_results: cannot open " + file.string());
        }
        std::string line;
        if (!std::getline(in, line)) {
            throw std::runtime_error("read_results: empty file " + file.string());
        }
        const auto header = split_csv_line(line);
        if (header.size() < 9 || header[0] != "method") {
            throw std::runtime_error("read_results: unexpected header in " + file.string());
        }
        const std::size_t d = header.size() - 8;
        while (std::getline(in, line)) {
            if (line.empty()) {
                continue;
            }
            const auto f = split_csv_line(line);
            if (f.size() != header.size()) {
                throw std::runtime_error("read_results: ragged row in " + file.string());
            }
            const auto key = std::tuple{f[0], f[1], std::stoi(f[2])};
            auto it = index.find(key);
            if (it == index.end()) {
                TrialResult r;
                r.method = f[0];
                r.problem = f[1];
                r.trial = std::stoi(f[2]);
                r.seed = std::stoull(f[3]);
                it = index.emplace(key, results.size()).first;
                results.push_back(std::move(r));
            }
            TrialResult& r = results[it->second];
            EvaluationRecord rec;
            rec.index = std::stoi(f[4]);
            rec.phase = parse_phase(f[5]);
            rec.x.resize(d);
            for (std::size_t j = 0; j < d; ++j) {
                rec.x[j] = std::stod(f[6 + j]);
            }
            rec.y = std::stod(f[6 + d]);
            rec.best_so_far = std::stod(f[7 + d]);
            r.records.push_back(std::move(rec));
            r.budget = std::max(r.budget, rec.index);
        }
    }
    return results;
}

void write_summary(const std::vector<SummarySeries>& series, const std::string& path) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("write_summary: cannot open " + path);
    }
    out << "method,problem,eval_index,mean_best,stderr_best,n_trials\n";
    for (const SummarySeries& s : series) {
        for (std::size_t i = 0; i < s.mean_best.size(); ++i) {
            out << s.method << ',' << s.problem << ',' << (i + 1) << ',' << fmt17(s.mean_best[i])
                << ',' << fmt17(s.stderr_best[i]) << ',' << s.n_trials << '\n';
        }
    }
    if (!out.good()) {
        throw std::runtime_error("write_summary: write failed for " + path);
    }
}

std::pair<double, double> curve_axis_range(const std::vector<const SummarySeries*>& group) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const SummarySeries* s : group) {
        for (std::size_t i = 0; i < s->mean_best.size(); ++i) {
            lo = std::min(lo, s->mean_best[i] - s->stderr_best[i]);
            hi = std::max(hi, s->mean_best[i] + s->stderr_best[i]);
        }
    }
    if (!(lo < hi)) {
        const double pad = std::max(1.0, std::abs(lo)) * 0.05;
        lo -= pad;
        hi += pad;
    }
    return {lo, hi};
}

namespace {

const char* kCurveColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                              "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

void write_svg_chart(const std::string& problem, const std::vector<const SummarySeries*>& group,
                     const fs::path& path) {
    const double width = 640.0, height = 440.0;
    const double ml = 70.0, mr = 20.0, mt = 40.0, mb = 50.0;
    const double pw = width - ml - mr, ph = height - mt - mb;

    const std::size_t budget = group.front()->mean_best.size();
    const auto [ylo, yhi] = curve_axis_range(group);
    const double xlo = 1.0, xhi = static_cast<double>(budget);

    auto sx = [&](double x) { return ml + (x - xlo) / (xhi - xlo > 0 ? xhi - xlo : 1.0) * pw; };
    auto sy = [&](double y) { return mt + (yhi - y) / (yhi - ylo) * ph; };

    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("emit_curves: cannot open " + path.string());
    }
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"15\">"
        << problem << "</text>\n";

    // axes and ticks
    out << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw << "\" y2=\""
        << mt + ph << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << mt + ph
        << "\" stroke=\"black\"/>\n";
    const int n_ticks = 5;
    for (int i = 0; i <= n_ticks; ++i) {
        const double fx = xlo + (xhi - xlo) * i / n_ticks;
        const double fy = ylo + (yhi - ylo) * i / n_ticks;
        char label[32];
        out << "<line x1=\"" << sx(fx) << "\" y1=\"" << mt + ph << "\" x2=\"" << sx(fx)
            << "\" y2=\"" << mt + ph + 5 << "\" stroke=\"black\"/>\n";
        std::snprintf(label, sizeof(label), "%.4g", fx);
        out << "<text x=\"" << sx(fx) << "\" y=\"" << mt + ph + 20
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" << label
            << "</text>\n";
        out << "<line x1=\"" << ml - 5 << "\" y1=\"" << sy(fy) << "\" x2=\"" << ml << "\" y2=\""
            << sy(fy) << "\" stroke=\"black\"/>\n";
        std::snprintf(label, sizeof(label), "%.4g", fy);
        out << "<text x=\"" << ml - 8 << "\" y=\"" << sy(fy) + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" << label
            << "</text>\n";
    }
    out << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 12
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">evaluations"
        << "</text>\n";
    out << "<text x=\"16\" y=\"" << mt + ph / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\" "
           "transform=\"rotate(-90 16 "
        << mt + ph / 2 << ")\">best value (mean, +-1 SE)</text>\n";

    for (std::size_t m = 0; m < group.size(); ++m) {
        const SummarySeries& s = *group[m];
        const char* color = kCurveColors[m % (sizeof(kCurveColors) / sizeof(kCurveColors[0]))];
        // stderr band
        out << "<polygon fill=\"" << color << "\" fill-opacity=\"0.18\" stroke=\"none\" points=\"";
        for (std::size_t i = 0; i < budget; ++i) {
            out << sx(static_cast<double>(i + 1)) << ',' << sy(s.mean_best[i] + s.stderr_best[i])
                << ' ';
        }
        for (std::size_t i = budget; i > 0; --i) {
            out << sx(static_cast<double>(i)) << ',' << sy(s.mean_best[i - 1] - s.stderr_best[i - 1])
                << ' ';
        }
        out << "\"/>\n";
        // mean line
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.6\" points=\"";
        for (std::size_t i = 0; i < budget; ++i) {
            out << sx(static_cast<double>(i + 1)) << ',' << sy(s.mean_best[i]) << ' ';
        }
        out << "\"/>\n";
        // legend
        const double ly = mt + 14.0 + 16.0 * static_cast<double>(m);
        out << "<line x1=\"" << ml + pw - 150 << "\" y1=\"" << ly << "\" x2=\"" << ml + pw - 120
            << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        out << "<text x=\"" << ml + pw - 114 << "\" y=\"" << ly + 4
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << s.method << "</text>\n";
    }
    out << "</svg>\n";
}

} // namespace

void emit_curves(const std::vector<SummarySeries>& series, const std::string& out_dir) {
    if (series.empty()) {
        throw std::invalid_argument("emit_curves: no series");
    }
    fs::create_directories(out_dir);

    std::vector<std::string> problem_order;
    for (const SummarySeries& s : series) {
        if (std::find(problem_order.begin(), problem_order.end(), s.problem) ==
            problem_order.end()) {
            problem_order.push_back(s.problem);
        }
    }

    for (const std::string& problem : problem_order) {
        std::vector<const SummarySeries*> group;
        for (const SummarySeries& s : series) {
            if (s.problem == problem) {
                group.push_back(&s);
            }
        }
        const std::size_t budget = group.front()->mean_best.size();
        for (const SummarySeries* s : group) {
            if (s->mean_best.size() != budget) {
                throw std::invalid_argument("emit_curves: methods disagree on budget for " +
                                            problem);
            }
        }

        const fs::path dat = fs::path(out_dir) / ("curves_" + problem + ".dat");
        std::ofstream out(dat);
        if (!out) {
            throw std::runtime_error("emit_curves: cannot open " + dat.string());
        }
        out << "# eval_index";
        for (const SummarySeries* s : group) {
            out << ' ' << s->method << "_mean " << s->method << "_stderr";
        }
        out << '\n';
        for (std::size_t i = 0; i < budget; ++i) {
            out << (i + 1);
            for (const SummarySeries* s : group) {
                out << ' ' << fmt17(s->mean_best[i]) << ' ' << fmt17(s->stderr_best[i]);
            }
            out << '\n';
        }
        if (!out.good()) {
            throw std::runtime_error("emit_curves: write failed for " + dat.string());
        }

        write_svg_chart(problem, group, fs::path(out_dir) / ("curves_" + problem + ".svg"));
    }
}

} // namespace bbo
