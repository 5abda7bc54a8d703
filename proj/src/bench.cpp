#include "gsparse/bench.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace gsparse::bench {

std::vector<double> lambda_grid(const GridSpec& spec) {
    if (spec.q_points < 2) throw std::invalid_argument("lambda_grid: Q must be >= 2");
    std::vector<double> grid(static_cast<std::size_t>(spec.q_points));
    for (int t = 0; t < spec.q_points; ++t) {
        const double expo = -(1.0 + 2.0 * t / (spec.q_points - 1));
        grid[static_cast<std::size_t>(t)] = std::pow(10.0, expo) * spec.lambda_max;
    }
    return grid;
}

Comparison compare_strategies(const ProblemInstance& instance, const Irl1Config& config,
                              const std::vector<Strategy>& strategies) {
    Comparison cmp;
    for (Strategy s : strategies) {
        Irl1Config cfg = config;
        cfg.strategy = s;
        StrategyRun run;
        run.strategy = strategy_name(s);
        run.result = gsparse::run(instance, cfg);
        cmp.runs.push_back(std::move(run));
    }
    double base_time = 0.0;
    for (const auto& run : cmp.runs)
        if (run.strategy == "none") base_time = run.result.report.solve_time_s;
    for (auto& run : cmp.runs)
        run.normalized_time =
            base_time > 0.0 ? run.result.report.solve_time_s / base_time : 1.0;

    for (std::size_t a = 0; a < cmp.runs.size(); ++a) {
        for (std::size_t b = a + 1; b < cmp.runs.size(); ++b) {
            const auto& xa = cmp.runs[a].result.x;
            const auto& xb = cmp.runs[b].result.x;
            double diff = 0.0, ref = 0.0;
            for (std::size_t j = 0; j < xa.size(); ++j) {
                diff += (xa[j] - xb[j]) * (xa[j] - xb[j]);
                ref += xa[j] * xa[j];
            }
            const double rel = ref > 0.0 ? std::sqrt(diff / ref) : std::sqrt(diff);
            cmp.max_rel_distance = std::max(cmp.max_rel_distance, rel);
        }
    }
    cmp.agree = cmp.max_rel_distance <= 1e-5;
    return cmp;
}

ScreeningMetrics screening_metrics(const RunReport& scr_report, const RunReport& ori_report) {
    ScreeningMetrics out;
    out.null_groups =
        ori_report.num_groups - static_cast<int>(ori_report.nonzero_groups.size());
    if (out.null_groups <= 0) {
        out.defined = false;
        return out;
    }
    const std::size_t limit = std::min<std::size_t>(scr_report.iterations.size(), 20);
    for (std::size_t k = 0; k < limit; ++k) {
        const auto& rec = scr_report.iterations[k];
        out.rsn.push_back(static_cast<double>(rec.screened) / out.null_groups);
        out.rwn.push_back(static_cast<double>(rec.repaired) / out.null_groups);
    }
    return out;
}

std::vector<GainPoint> gain_study(const data::SyntheticSpec& base_spec, double p, int q,
                                  double lambda_frac, GainVariable vary,
                                  const std::vector<double>& values,
                                  const Irl1Config& config_template) {
    if (values.empty()) throw std::invalid_argument("gain_study: values must be nonempty");
    std::vector<GainPoint> points;
    for (double v : values) {
        data::SyntheticSpec spec = base_spec;
        double frac = lambda_frac;
        switch (vary) {
            case GainVariable::Lambda: frac = v; break;
            case GainVariable::Noise: spec.noise_std = v; break;
            case GainVariable::NumFeatures: spec.n = static_cast<int>(v); break;
        }
        data::SyntheticInstance inst = data::generate_synthetic(spec);
        // lambda needs lambda_max, which needs an instance; build at a
        // placeholder lambda first.
        ProblemInstance probe(inst.a, inst.y, inst.partition, 1.0, p, q);
        const double lambda = frac * probe.lambda_max();
        ProblemInstance problem(std::move(inst.a), std::move(inst.y), std::move(inst.partition),
                                lambda, p, q);

        GainPoint pt;
        pt.value = v;
        Irl1Config cfg = config_template;
        cfg.strategy = Strategy::None;
        pt.time_ori = gsparse::run(problem, cfg).report.solve_time_s;
        cfg.strategy = Strategy::Proposed;
        pt.time_scr = gsparse::run(problem, cfg).report.solve_time_s;
        pt.gain = pt.time_scr > 0.0 ? pt.time_ori / pt.time_scr : 0.0;
        points.push_back(pt);
    }
    return points;
}

nlohmann::json report_to_json(const RunReport& report) {
    nlohmann::json j;
    j["strategy"] = report.strategy;
    j["num_groups"] = report.num_groups;
    j["lambda"] = report.lambda;
    j["lambda_max"] = report.lambda_max;
    j["p"] = report.p;
    j["q"] = report.q;
    j["eps0"] = report.eps0;
    j["mu"] = report.mu;
    j["inner_tol"] = report.inner_tol;
    j["outer_tol"] = report.outer_tol;
    j["outer_iterations"] = report.outer_iterations;
    j["converged"] = report.converged;
    j["solve_time_s"] = report.solve_time_s;
    j["final_objective"] = report.final_objective;
    j["nonzero_groups"] = report.nonzero_groups;
    j["final_scrlist"] = report.final_scrlist;
    nlohmann::json iters = nlohmann::json::array();
    for (const auto& rec : report.iterations) {
        nlohmann::json ji;
        ji["k"] = rec.k;
        ji["time_s"] = rec.time_s;
        ji["screened"] = rec.screened;
        ji["repaired"] = rec.repaired;
        ji["active_cols"] = rec.active_cols;
        ji["inner_iterations"] = rec.inner_iterations;
        ji["objective"] = rec.objective;
        ji["perturbed_objective"] = rec.perturbed_obj;
        ji["dual_gap"] = rec.dual_gap;
        ji["step_ratio"] = rec.step_ratio;
        iters.push_back(std::move(ji));
    }
    j["iterations"] = std::move(iters);
    return j;
}

nlohmann::json comparison_to_json(const Comparison& cmp) {
    nlohmann::json j;
    j["agree"] = cmp.agree;
    j["max_rel_distance"] = cmp.max_rel_distance;
    nlohmann::json runs = nlohmann::json::array();
    for (const auto& run : cmp.runs) {
        nlohmann::json jr = report_to_json(run.result.report);
        jr["normalized_time"] = run.normalized_time;
        runs.push_back(std::move(jr));
    }
    j["runs"] = std::move(runs);
    return j;
}

void write_report_csv(const std::string& path, const RunReport& report) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_report_csv: cannot open " + path);
    out << "iteration,time_s,screened,repaired,active_cols,objective\n";
    for (const auto& rec : report.iterations)
        out << rec.k << ',' << rec.time_s << ',' << rec.screened << ',' << rec.repaired << ','
            << rec.active_cols << ',' << rec.objective << '\n';
}

}  // namespace gsparse::bench
