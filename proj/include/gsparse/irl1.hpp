#pragma once

#include <string>
#include <vector>

#include "gsparse/core.hpp"
#include "gsparse/screening.hpp"

namespace gsparse {

enum class InitRule { EarlyStoppedL1, Zeros, Given };

struct Irl1Config {
    double mu = 0.9;                 // epsilon decay factor, in (0,1)
    double outer_tol = 1e-6;         // ||x^{k+1} - x^k|| / ||x^{k+1}||
    int max_outer = 500;
    Strategy strategy = Strategy::Proposed;
    double eps0 = -1.0;              // <= 0 means use (lambda_max / (2 p lambda))^{1/(p-1)}
    InitRule init_rule = InitRule::EarlyStoppedL1;
    std::vector<double> x0;          // used when init_rule == Given
    int init_budget = 50;            // inner iterations for the early-stopped init
    double inner_tol = 1e-8;
    int inner_max_iters = 10000;
    double kkt_slack = 1e-6;
    bool record_scrlist = false;     // keep per-iteration screened sets in the report
};

struct OuterRecord {
    int k = 0;
    double time_s = 0.0;  // screen + solve + repair for this iteration
    int screened = 0;
    int repaired = 0;     // groups re-added by the KKT check
    int active_cols = 0;
    int inner_iterations = 0;
    double objective = 0.0;
    double perturbed_obj = 0.0;
    double dual_gap = 0.0;
    double subproblem_primal = 0.0;
    double step_ratio = 0.0;  // termination quantity
    std::vector<int> scrlist;  // filled when record_scrlist is set
};

struct RunReport {
    std::vector<OuterRecord> iterations;
    int outer_iterations = 0;
    bool converged = false;
    double solve_time_s = 0.0;  // total solver time, excludes setup and reporting
    double final_objective = 0.0;
    std::vector<int> final_scrlist;
    std::vector<int> nonzero_groups;
    std::string strategy;
    int num_groups = 0;
    double lambda = 0.0;
    double lambda_max = 0.0;
    double p = 0.0;
    int q = 0;
    double eps0 = 0.0;
    double mu = 0.0;
    double inner_tol = 0.0;
    double outer_tol = 0.0;
};

struct Irl1Result {
    std::vector<double> x;
    RunReport report;
};

// w_i = p (||x_{G_i}||_q + eps_i)^{p-1}
GroupVector update_weights(const ProblemInstance& instance, std::span<const double> x,
                           const GroupVector& eps);

// eps0 = (lambda_max / (2 p lambda))^{1/(p-1)}
double initial_epsilon(double lambda_max, double p, double lambda);

void decay_epsilon(GroupVector& eps, double mu);

// Unit-weight subproblem iterated for a small budget.
std::vector<double> init_x0(const ProblemInstance& instance, const Irl1Config& config);

// Outer loop: weights -> screening/solve -> epsilon decay, until the relative
// step drops below outer_tol or max_outer is hit.
Irl1Result run(const ProblemInstance& instance, const Irl1Config& config);

}  // namespace gsparse
