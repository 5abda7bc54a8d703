#pragma once

#include <span>
#include <vector>

#include "gsparse/core.hpp"

namespace gsparse {

// Convex weighted group-lasso subproblem restricted to a list of active
// groups:  min (1/2)||A x - y||^2 + sum_{i in active} lambda_i ||x_{G_i}||_q
// with x = 0 on every group outside the active list.
struct SubproblemSpec {
    const ProblemInstance* problem = nullptr;
    std::vector<int> active_groups;  // group ids, ascending
    GroupVector lambdas;             // full length d; entries > 0 on active groups
    std::vector<double> x_init;      // full length n; empty means zero start
    double tol = 1e-8;
    int max_iters = 10000;
};

struct SubproblemResult {
    std::vector<double> x;  // full length n, zero off the active groups
    int iterations = 0;
    double final_residual = 0.0;
    bool converged = false;
};

// Proximal map of tau * ||.||_q applied in place to one group segment.
// q = 2 is the block soft-threshold (exact zero when ||v|| <= tau),
// q = 1 the componentwise soft-threshold.
void prox_group(std::span<double> v, double tau, int q);

// Proximal gradient with Barzilai-Borwein steps and monotone backtracking.
// Stops when the fixed-point residual ||x - prox(x - tau grad)|| / max(1,||x||)
// drops below tol and the dual gap is below 10 * tol * max(1, P(x)).
// Throws std::runtime_error if iterates become non-finite.
SubproblemResult solve_subproblem(const SubproblemSpec& spec);

// P(x) - G(theta) with theta = s (A x - y) scaled into the dual feasible
// set, s = min(1, min_i lambda_i / ||(A_{G_i})^T (A x - y)||_{q'}).
double subproblem_dual_gap(const SubproblemSpec& spec, std::span<const double> x);

// P(x) for the subproblem (square loss plus weighted group norms over the
// active list).
double subproblem_objective(const SubproblemSpec& spec, std::span<const double> x);

}  // namespace gsparse
