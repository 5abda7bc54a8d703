#pragma once

#include <vector>

#include "gsparse/core.hpp"
#include "gsparse/subsolver.hpp"

namespace gsparse {

enum class Strategy { Proposed, Strong, None };

const char* strategy_name(Strategy s);
Strategy parse_strategy(const std::string& name);  // throws on unknown name

// Group index bookkeeping for one screening pass: groups handed to the
// subsolver, groups screened to zero, and groups the KKT check flagged as
// wrongly screened in the current round.
struct ScreenOutcome {
    std::vector<int> list;     // ascending
    std::vector<int> scrlist;  // ascending
    std::vector<int> errlist;
};

// Screen group i iff c_i <= lambda_i.
ScreenOutcome priori_screen(const GroupVector& c, const GroupVector& lambdas);

// Baseline rule: screen iff c_i < 2 lambda_i - w_i max_j(c_j / w_j).
ScreenOutcome strong_rule_screen(const GroupVector& c, const GroupVector& lambdas,
                                 const GroupVector& w);

// Screened groups whose correlation with the residual A x - y exceeds
// lambda_i (1 + slack). The residual is recomputed from x.
std::vector<int> kkt_check(const ProblemInstance& instance, std::span<const double> x,
                           const GroupVector& lambdas, const std::vector<int>& scrlist,
                           double slack = 1e-6);

struct ScreenSolveStats {
    int screened = 0;          // |scrlist| after repair
    int repair_rounds = 0;
    int wrongly_screened = 0;  // total groups re-added by the KKT check
    int active_cols = 0;       // columns handed to the final subsolver call
    int inner_iterations = 0;  // summed over repair rounds
    double dual_gap = 0.0;          // at the returned solution
    double subproblem_primal = 0.0;  // P(x) at the returned solution
    double final_residual = 0.0;
    bool subsolver_converged = true;
    bool subsolver_invoked = false;
};

struct ScreenSolveResult {
    std::vector<double> x;
    ScreenOutcome outcome;
    ScreenSolveStats stats;
};

// One screen -> solve -> KKT-check -> repair loop. Produces the same
// solution (up to inner tolerance) as solving the subproblem without
// screening. Strategy None skips screening entirely.
ScreenSolveResult screen_solve(const ProblemInstance& instance, const GroupVector& lambdas,
                               const std::vector<double>& warm_x, Strategy strategy,
                               double inner_tol = 1e-8, int inner_max_iters = 10000,
                               double kkt_slack = 1e-6);

}  // namespace gsparse
