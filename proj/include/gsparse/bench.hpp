#pragma once

#include <optional>
#include <string>
#include <vector>

#include "gsparse/data.hpp"
#include "gsparse/irl1.hpp"

#include <nlohmann/json_fwd.hpp>

namespace gsparse::bench {

struct GridSpec {
    int q_points = 20;
    double lambda_max = 1.0;
};

// lambda_t = 10^{-(1 + 2t/(Q-1))} lambda_max, t = 0..Q-1; decreasing from
// 0.1 lambda_max to 0.001 lambda_max.
std::vector<double> lambda_grid(const GridSpec& spec);

struct StrategyRun {
    std::string strategy;
    Irl1Result result;
    double normalized_time = 0.0;  // relative to the "none" run when present
};

struct Comparison {
    std::vector<StrategyRun> runs;
    double max_rel_distance = 0.0;  // pairwise relative l2 distance of solutions
    bool agree = true;              // within 1e-5
};

// Runs each strategy on the same instance and config; reports absolute and
// ori-normalized times plus a solution-agreement gate.
Comparison compare_strategies(const ProblemInstance& instance, const Irl1Config& config,
                              const std::vector<Strategy>& strategies);

struct ScreeningMetrics {
    std::vector<double> rsn;  // per outer iteration, first 20
    std::vector<double> rwn;
    int null_groups = 0;      // of the no-screening solution
    bool defined = true;      // false when the ori solution has no null groups
};

ScreeningMetrics screening_metrics(const RunReport& scr_report, const RunReport& ori_report);

struct GainPoint {
    double value = 0.0;   // the varied quantity
    double time_ori = 0.0;
    double time_scr = 0.0;
    double gain = 0.0;    // time_ori / time_scr
};

enum class GainVariable { Lambda, Noise, NumFeatures };

// For each value, builds a fresh synthetic instance (seed policy fixed by
// base_spec.seed) and times ori vs scr. For Lambda the value is a fraction
// of lambda_max; for Noise it replaces noise_std; for NumFeatures it
// replaces n.
std::vector<GainPoint> gain_study(const data::SyntheticSpec& base_spec, double p, int q,
                                  double lambda_frac, GainVariable vary,
                                  const std::vector<double>& values,
                                  const Irl1Config& config_template);

nlohmann::json report_to_json(const RunReport& report);
nlohmann::json comparison_to_json(const Comparison& cmp);

// CSV plot data: iteration, time_s, screened, repaired, active_cols, objective.
void write_report_csv(const std::string& path, const RunReport& report);

}  // namespace gsparse::bench
