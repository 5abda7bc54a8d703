#include "gsparse/screening.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace gsparse {

const char* strategy_name(Strategy s) {
    switch (s) {
        case Strategy::Proposed: return "proposed";
        case Strategy::Strong: return "strong";
        case Strategy::None: return "none";
    }
    return "unknown";
}

Strategy parse_strategy(const std::string& name) {
    if (name == "proposed") return Strategy::Proposed;
    if (name == "strong") return Strategy::Strong;
    if (name == "none") return Strategy::None;
    throw std::invalid_argument("unknown strategy: " + name);
}

ScreenOutcome priori_screen(const GroupVector& c, const GroupVector& lambdas) {
    ScreenOutcome out;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i] <= lambdas[i])
            out.scrlist.push_back(static_cast<int>(i));
        else
            out.list.push_back(static_cast<int>(i));
    }
    return out;
}

ScreenOutcome strong_rule_screen(const GroupVector& c, const GroupVector& lambdas,
                                 const GroupVector& w) {
    double max_ratio = 0.0;
    for (std::size_t i = 0; i < c.size(); ++i) max_ratio = std::max(max_ratio, c[i] / w[i]);
    ScreenOutcome out;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i] < 2.0 * lambdas[i] - w[i] * max_ratio)
            out.scrlist.push_back(static_cast<int>(i));
        else
            out.list.push_back(static_cast<int>(i));
    }
    return out;
}

std::vector<int> kkt_check(const ProblemInstance& instance, std::span<const double> x,
                           const GroupVector& lambdas, const std::vector<int>& scrlist,
                           double slack) {
    std::vector<int> errlist;
    if (scrlist.empty()) return errlist;
    std::vector<double> r(instance.y().size());
    linalg::mat_vec(instance.a(), x, r);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= instance.y()[i];
    std::vector<double> atr(static_cast<std::size_t>(instance.num_features()));
    linalg::mat_tvec(instance.a(), r, atr);
    for (int gi : scrlist) {
        const double corr = group_dual_norm(atr, instance.partition(), gi, instance.q());
        if (corr > lambdas[static_cast<std::size_t>(gi)] * (1.0 + slack)) errlist.push_back(gi);
    }
    return errlist;
}

ScreenSolveResult screen_solve(const ProblemInstance& instance, const GroupVector& lambdas,
                               const std::vector<double>& warm_x, Strategy strategy,
                               double inner_tol, int inner_max_iters, double kkt_slack) {
    const int d = instance.num_groups();
    ScreenSolveResult result;
    switch (strategy) {
        case Strategy::Proposed:
            result.outcome = priori_screen(instance.group_correlations(), lambdas);
            break;
        case Strategy::Strong: {
            GroupVector w(lambdas.size());
            for (std::size_t i = 0; i < w.size(); ++i) w[i] = lambdas[i] / instance.lambda();
            result.outcome = strong_rule_screen(instance.group_correlations(), lambdas, w);
            break;
        }
        case Strategy::None:
            result.outcome.list.resize(static_cast<std::size_t>(d));
            for (int i = 0; i < d; ++i) result.outcome.list[static_cast<std::size_t>(i)] = i;
            break;
    }

    std::vector<double> x(static_cast<std::size_t>(instance.num_features()), 0.0);
    std::vector<double> warm = warm_x;
    if (warm.empty()) warm.assign(x.size(), 0.0);
    // Re-added and screened groups must enter the subsolver at zero.
    for (int gi : result.outcome.scrlist)
        for (int idx : instance.partition().group(gi)) warm[static_cast<std::size_t>(idx)] = 0.0;

    SubproblemSpec spec;
    spec.problem = &instance;
    spec.lambdas = lambdas;
    spec.tol = inner_tol;
    spec.max_iters = inner_max_iters;

    for (int round = 0; round <= d; ++round) {
        if (!result.outcome.list.empty()) {
            spec.active_groups = result.outcome.list;
            spec.x_init = warm;
            SubproblemResult sub = solve_subproblem(spec);
            result.stats.subsolver_invoked = true;
            result.stats.inner_iterations += sub.iterations;
            result.stats.final_residual = sub.final_residual;
            result.stats.subsolver_converged = sub.converged;
            result.stats.active_cols = 0;
            for (int gi : result.outcome.list)
                result.stats.active_cols += static_cast<int>(instance.partition().group(gi).size());
            x = std::move(sub.x);
            result.stats.dual_gap = subproblem_dual_gap(spec, x);
            result.stats.subproblem_primal = subproblem_objective(spec, x);
        } else {
            std::fill(x.begin(), x.end(), 0.0);
            result.stats.active_cols = 0;
            result.stats.dual_gap = 0.0;
            double ynorm_sq = 0.0;
            for (double yi : instance.y()) ynorm_sq += yi * yi;
            result.stats.subproblem_primal = 0.5 * ynorm_sq;
        }

        result.outcome.errlist =
            kkt_check(instance, x, lambdas, result.outcome.scrlist, kkt_slack);
        if (result.outcome.errlist.empty()) break;
        if (round == d)
            throw std::runtime_error("screen_solve: repair loop failed to terminate");

        // Batch repair: move every violating group back to the active list.
        result.stats.repair_rounds += 1;
        result.stats.wrongly_screened += static_cast<int>(result.outcome.errlist.size());
        std::vector<int> kept;
        for (int gi : result.outcome.scrlist)
            if (!std::binary_search(result.outcome.errlist.begin(), result.outcome.errlist.end(), gi))
                kept.push_back(gi);
        result.outcome.scrlist = std::move(kept);
        result.outcome.list.insert(result.outcome.list.end(), result.outcome.errlist.begin(),
                                   result.outcome.errlist.end());
        std::sort(result.outcome.list.begin(), result.outcome.list.end());
        warm = x;  // re-added groups are zero in x already
    }

    result.stats.screened = static_cast<int>(result.outcome.scrlist.size());
    result.x = std::move(x);
    return result;
}

}  // namespace gsparse
