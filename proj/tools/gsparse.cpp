#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "gsparse/bench.hpp"
#include "gsparse/data.hpp"
#include "gsparse/irl1.hpp"

namespace {

using namespace gsparse;
using nlohmann::json;

struct DataOptions {
    std::string synthetic;       // inline key=value spec
    std::string synthetic_file;
    std::optional<std::uint64_t> seed;
    std::string libsvm_path;
    std::string csv_path;
    std::string csv_target;
    bool expand = false;
    int group_size = 5;
    std::string task = "regression";
};

struct SolverOptions {
    double p = 0.5;
    int q = 2;
    double lambda_frac = 0.01;
    std::optional<double> lambda_abs;
    std::string strategy = "proposed";
    double mu = 0.9;
    double inner_tol = 1e-8;
    double outer_tol = 1e-6;
    int max_outer = 500;
    int init_budget = 50;
};

void add_data_options(CLI::App* cmd, DataOptions& opt) {
    cmd->add_option("--synthetic", opt.synthetic, "inline synthetic spec, e.g. m=500,n=2000,seed=7");
    cmd->add_option("--synthetic-file", opt.synthetic_file, "synthetic spec file (key=value per line)");
    cmd->add_option("--seed", opt.seed, "override the synthetic seed");
    cmd->add_option("--data", opt.libsvm_path, "LIBSVM-format input file");
    cmd->add_option("--csv", opt.csv_path, "CSV input file with header row");
    cmd->add_option("--target", opt.csv_target, "target column name for CSV input");
    cmd->add_flag("--expand", opt.expand, "apply pairwise polynomial group expansion");
    cmd->add_option("--group-size", opt.group_size, "group size for raw (non-expanded) inputs");
    cmd->add_option("--task", opt.task, "regression or classification")
        ->check(CLI::IsMember({"regression", "classification"}));
}

void add_solver_options(CLI::App* cmd, SolverOptions& opt) {
    cmd->add_option("--p", opt.p, "regularizer exponent p in (0,1)");
    cmd->add_option("--q", opt.q, "group norm q")->check(CLI::IsMember({1, 2}));
    cmd->add_option("--lambda-frac", opt.lambda_frac, "lambda as a fraction of lambda_max");
    cmd->add_option("--lambda", opt.lambda_abs, "absolute lambda (overrides --lambda-frac)");
    cmd->add_option("--strategy", opt.strategy, "screening strategy")
        ->check(CLI::IsMember({"proposed", "strong", "none"}));
    cmd->add_option("--mu", opt.mu, "epsilon decay factor");
    cmd->add_option("--inner-tol", opt.inner_tol, "subsolver tolerance");
    cmd->add_option("--outer-tol", opt.outer_tol, "outer termination tolerance");
    cmd->add_option("--max-outer", opt.max_outer, "outer iteration cap");
    cmd->add_option("--init-budget", opt.init_budget, "inner iterations for the init solve");
}

struct LoadedProblem {
    linalg::Matrix a;
    std::vector<double> y;
    GroupPartition partition;
    std::vector<double> x_true;  // synthetic only
};

LoadedProblem load_data(const DataOptions& opt) {
    LoadedProblem out;
    const int sources = (!opt.synthetic.empty() || !opt.synthetic_file.empty() ? 1 : 0) +
                        (!opt.libsvm_path.empty() ? 1 : 0) + (!opt.csv_path.empty() ? 1 : 0);
    if (sources != 1)
        throw CLI::ValidationError("data", "exactly one of --synthetic/--synthetic-file, --data, --csv is required");

    if (!opt.synthetic.empty() || !opt.synthetic_file.empty()) {
        data::SyntheticSpec spec = !opt.synthetic_file.empty()
                                       ? data::read_synthetic_spec_file(opt.synthetic_file)
                                       : data::parse_synthetic_spec(opt.synthetic);
        if (opt.seed) spec.seed = *opt.seed;
        auto inst = data::generate_synthetic(spec);
        out.a = std::move(inst.a);
        out.y = std::move(inst.y);
        out.partition = std::move(inst.partition);
        out.x_true = std::move(inst.x_true);
        return out;
    }

    data::Dataset ds = !opt.libsvm_path.empty() ? data::read_libsvm(opt.libsvm_path)
                                                : data::read_csv(opt.csv_path, opt.csv_target);
    if (opt.task == "classification") {
        ds.task = data::Task::Classification;
        for (auto& label : ds.y) label = label > 0.0 ? 1.0 : -1.0;
    }
    if (opt.expand) {
        auto expanded = data::polynomial_group_expand(ds);
        out.a = std::move(expanded.a);
        out.partition = std::move(expanded.partition);
        out.y = std::move(ds.y);
        return out;
    }
    // Raw ingestion: pad with zero columns up to a group-size multiple.
    const int n_raw = static_cast<int>(ds.x.cols());
    const int n = ((n_raw + opt.group_size - 1) / opt.group_size) * opt.group_size;
    if (n != n_raw) {
        linalg::Matrix padded(ds.x.rows(), static_cast<std::size_t>(n));
        for (std::size_t j = 0; j < ds.x.cols(); ++j)
            std::copy(ds.x.col(j), ds.x.col(j) + ds.x.rows(), padded.col(j));
        ds.x = std::move(padded);
    }
    out.a = std::move(ds.x);
    out.y = std::move(ds.y);
    out.partition = GroupPartition::uniform(n, opt.group_size);
    return out;
}

ProblemInstance make_problem(LoadedProblem& loaded, const SolverOptions& opt) {
    double lambda = 1.0;
    {
        ProblemInstance probe(loaded.a, loaded.y, loaded.partition, 1.0, opt.p, opt.q);
        lambda = opt.lambda_abs ? *opt.lambda_abs : opt.lambda_frac * probe.lambda_max();
        if (lambda <= 0.0)
            throw CLI::ValidationError("lambda", "resolved lambda is nonpositive (is y = 0?)");
    }
    return ProblemInstance(std::move(loaded.a), std::move(loaded.y), std::move(loaded.partition),
                           lambda, opt.p, opt.q);
}

Irl1Config make_config(const SolverOptions& opt) {
    Irl1Config cfg;
    cfg.mu = opt.mu;
    cfg.inner_tol = opt.inner_tol;
    cfg.outer_tol = opt.outer_tol;
    cfg.max_outer = opt.max_outer;
    cfg.init_budget = opt.init_budget;
    cfg.strategy = parse_strategy(opt.strategy);
    return cfg;
}

void write_json(const std::string& path, const json& j) {
    if (path.empty() || path == "-") {
        std::cout << j.dump(2) << "\n";
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file " + path);
    out << j.dump(2) << "\n";
}

double prediction_error(const ProblemInstance& problem, const std::vector<double>& x,
                        data::Task task) {
    std::vector<double> pred(problem.y().size());
    linalg::mat_vec(problem.a(), x, pred);
    if (task == data::Task::Classification) {
        int correct = 0;
        for (std::size_t i = 0; i < pred.size(); ++i)
            if ((pred[i] >= 0.0 ? 1.0 : -1.0) == problem.y()[i]) ++correct;
        return static_cast<double>(correct) / static_cast<double>(pred.size());
    }
    double mse = 0.0;
    for (std::size_t i = 0; i < pred.size(); ++i)
        mse += (pred[i] - problem.y()[i]) * (pred[i] - problem.y()[i]);
    return mse / static_cast<double>(pred.size());
}

}  // namespace

int main(int argc, char** argv) {
#ifdef _OPENMP
    if (const char* env = std::getenv("GSPARSE_THREADS")) {
        const int t = std::atoi(env);
        if (t > 0) omp_set_num_threads(t);
    }
#endif

    CLI::App app{"Group-sparse regression solver with IRL1 screening"};
    app.require_subcommand(1);

    DataOptions data_opt;
    SolverOptions solver_opt;
    std::string out_path;
    std::string csv_out;
    int repeat = 1;

    auto* solve_cmd = app.add_subcommand("solve", "solve one instance at one lambda");
    add_data_options(solve_cmd, data_opt);
    add_solver_options(solve_cmd, solver_opt);
    solve_cmd->add_option("--out", out_path, "JSON report path (default stdout)");
    solve_cmd->add_option("--csv-out", csv_out, "per-iteration CSV plot data");

    auto* grid_cmd = app.add_subcommand("grid", "sweep the lambda grid");
    int grid_q = 20;
    add_data_options(grid_cmd, data_opt);
    add_solver_options(grid_cmd, solver_opt);
    grid_cmd->add_option("--grid-size", grid_q, "number of grid points Q");
    grid_cmd->add_option("--out", out_path, "JSON report path (default stdout)");

    auto* compare_cmd = app.add_subcommand("compare", "compare screening strategies");
    add_data_options(compare_cmd, data_opt);
    add_solver_options(compare_cmd, solver_opt);
    compare_cmd->add_option("--out", out_path, "JSON report path (default stdout)");
    compare_cmd->add_option("--repeat", repeat, "timing repeats; the median run is reported");

    auto* gain_cmd = app.add_subcommand("gain", "computational gain study on synthetic data");
    std::string vary = "lambda";
    std::string values_str;
    add_data_options(gain_cmd, data_opt);
    add_solver_options(gain_cmd, solver_opt);
    gain_cmd->add_option("--vary", vary, "quantity to vary")
        ->check(CLI::IsMember({"lambda", "noise", "n"}));
    gain_cmd->add_option("--values", values_str, "comma-separated values")->required();
    gain_cmd->add_option("--out", out_path, "JSON report path (default stdout)");

    auto* metrics_cmd = app.add_subcommand("metrics", "RSN/RWN screening metrics");
    add_data_options(metrics_cmd, data_opt);
    add_solver_options(metrics_cmd, solver_opt);
    metrics_cmd->add_option("--out", out_path, "JSON report path (default stdout)");
    metrics_cmd->add_option("--csv-out", csv_out, "per-iteration RSN/RWN CSV");

    auto* gen_cmd = app.add_subcommand("gen", "write a synthetic instance to disk");
    add_data_options(gen_cmd, data_opt);
    std::string xtrue_path;
    gen_cmd->add_option("--out", out_path, "output LIBSVM file")->required();
    gen_cmd->add_option("--xtrue-out", xtrue_path, "ground-truth vector output (one value per line)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        const data::Task task =
            data_opt.task == "classification" ? data::Task::Classification : data::Task::Regression;

        if (gen_cmd->parsed()) {
            if (data_opt.synthetic.empty() && data_opt.synthetic_file.empty())
                throw std::runtime_error("gen requires --synthetic or --synthetic-file");
            LoadedProblem loaded = load_data(data_opt);
            data::write_libsvm(out_path, loaded.a, loaded.y);
            if (!xtrue_path.empty()) {
                std::ofstream xt(xtrue_path);
                xt.precision(17);
                for (double v : loaded.x_true) xt << v << "\n";
            }
            return 0;
        }

        if (solve_cmd->parsed()) {
            LoadedProblem loaded = load_data(data_opt);
            ProblemInstance problem = make_problem(loaded, solver_opt);
            Irl1Result result = run(problem, make_config(solver_opt));
            json j = bench::report_to_json(result.report);
            j["prediction"] = prediction_error(problem, result.x, task);
            write_json(out_path, j);
            if (!csv_out.empty()) bench::write_report_csv(csv_out, result.report);
            return result.report.converged ? 0 : 3;
        }

        if (grid_cmd->parsed()) {
            LoadedProblem loaded = load_data(data_opt);
            SolverOptions probe_opt = solver_opt;
            ProblemInstance base = make_problem(loaded, probe_opt);
            bench::GridSpec gspec{grid_q, base.lambda_max()};
            json out = json::array();
            for (double lambda : bench::lambda_grid(gspec)) {
                ProblemInstance problem(base.a(), base.y(), base.partition(), lambda,
                                        solver_opt.p, solver_opt.q);
                Irl1Result result = run(problem, make_config(solver_opt));
                json j = bench::report_to_json(result.report);
                j["prediction"] = prediction_error(problem, result.x, task);
                out.push_back(std::move(j));
            }
            write_json(out_path, out);
            return 0;
        }

        if (compare_cmd->parsed()) {
            LoadedProblem loaded = load_data(data_opt);
            ProblemInstance problem = make_problem(loaded, solver_opt);
            const std::vector<Strategy> strategies{Strategy::None, Strategy::Strong,
                                                   Strategy::Proposed};
            bench::Comparison best;
            std::vector<bench::Comparison> reps;
            for (int r = 0; r < std::max(repeat, 1); ++r)
                reps.push_back(bench::compare_strategies(problem, make_config(solver_opt), strategies));
            std::sort(reps.begin(), reps.end(),
                      [](const bench::Comparison& a, const bench::Comparison& b) {
                          return a.runs.front().result.report.solve_time_s <
                                 b.runs.front().result.report.solve_time_s;
                      });
            best = std::move(reps[reps.size() / 2]);
            json j = bench::comparison_to_json(best);
            write_json(out_path, j);
            if (!best.agree) {
                std::cerr << "FAILURE: strategies disagree beyond 1e-5 (max rel distance "
                          << best.max_rel_distance << ")\n";
                return 1;
            }
            return 0;
        }

        if (gain_cmd->parsed()) {
            if (data_opt.synthetic.empty() && data_opt.synthetic_file.empty())
                throw std::runtime_error("gain requires a synthetic base spec");
            data::SyntheticSpec spec = !data_opt.synthetic_file.empty()
                                           ? data::read_synthetic_spec_file(data_opt.synthetic_file)
                                           : data::parse_synthetic_spec(data_opt.synthetic);
            if (data_opt.seed) spec.seed = *data_opt.seed;
            std::vector<double> values;
            std::stringstream ss(values_str);
            std::string tok;
            while (std::getline(ss, tok, ',')) values.push_back(std::stod(tok));
            bench::GainVariable gv = vary == "lambda" ? bench::GainVariable::Lambda
                                     : vary == "noise" ? bench::GainVariable::Noise
                                                       : bench::GainVariable::NumFeatures;
            auto points = bench::gain_study(spec, solver_opt.p, solver_opt.q,
                                            solver_opt.lambda_frac, gv, values,
                                            make_config(solver_opt));
            json out = json::array();
            for (const auto& pt : points)
                out.push_back({{"value", pt.value},
                               {"time_ori", pt.time_ori},
                               {"time_scr", pt.time_scr},
                               {"gain", pt.gain}});
            write_json(out_path, out);
            return 0;
        }

        if (metrics_cmd->parsed()) {
            LoadedProblem loaded = load_data(data_opt);
            ProblemInstance problem = make_problem(loaded, solver_opt);
            Irl1Config cfg = make_config(solver_opt);
            cfg.record_scrlist = true;
            cfg.strategy = Strategy::Proposed;
            Irl1Result scr = run(problem, cfg);
            cfg.strategy = Strategy::None;
            Irl1Result ori = run(problem, cfg);
            auto metrics = bench::screening_metrics(scr.report, ori.report);
            json j;
            j["defined"] = metrics.defined;
            j["null_groups"] = metrics.null_groups;
            j["rsn"] = metrics.rsn;
            j["rwn"] = metrics.rwn;
            write_json(out_path, j);
            if (!csv_out.empty()) {
                std::ofstream out(csv_out);
                out << "iteration,rsn,rwn\n";
                for (std::size_t k = 0; k < metrics.rsn.size(); ++k)
                    out << k << ',' << metrics.rsn[k] << ',' << metrics.rwn[k] << '\n';
            }
            return 0;
        }
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
