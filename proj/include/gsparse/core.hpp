#pragma once

#include <limits>
#include <span>
#include <vector>

#include "gsparse/linalg.hpp"

namespace gsparse {

// One real value per group.
using GroupVector = std::vector<double>;

// Disjoint partition of the feature indices {0,...,n-1} into d groups.
class GroupPartition {
public:
    GroupPartition() = default;
    // Throws std::invalid_argument if the sets do not partition [0, n).
    GroupPartition(std::vector<std::vector<int>> groups, int n);

    // Contiguous blocks of uniform size; n must be divisible by group_size.
    static GroupPartition uniform(int n, int group_size);

    int num_groups() const { return static_cast<int>(groups_.size()); }
    int num_features() const { return n_; }
    const std::vector<int>& group(int i) const { return groups_[static_cast<std::size_t>(i)]; }
    const std::vector<std::vector<int>>& groups() const { return groups_; }

private:
    std::vector<std::vector<int>> groups_;
    int n_ = 0;
};

// q' = q / (q - 1), with q = 1 mapping to infinity.
double dual_exponent(int q);

// || x_{G_i} ||_q for q in {1, 2}.
double group_norm(std::span<const double> x, const GroupPartition& partition, int i, int q);

// || v_{G_i} ||_{q'}: l2 for q = 2, l-infinity for q = 1.
double group_dual_norm(std::span<const double> v, const GroupPartition& partition, int i, int q);

// Least-squares problem with a group regularizer; immutable once built.
// The per-group correlations || (A^T y)_{G_i} ||_{q'} and their maximum
// (lambda_max) are computed once here since screening and the epsilon
// initialization reuse them every outer iteration.
class ProblemInstance {
public:
    ProblemInstance(linalg::Matrix a, std::vector<double> y, GroupPartition partition,
                    double lambda, double p, int q);

    const linalg::Matrix& a() const { return a_; }
    const std::vector<double>& y() const { return y_; }
    const GroupPartition& partition() const { return partition_; }
    double lambda() const { return lambda_; }
    double p() const { return p_; }
    int q() const { return q_; }
    int num_rows() const { return static_cast<int>(a_.rows()); }
    int num_features() const { return partition_.num_features(); }
    int num_groups() const { return partition_.num_groups(); }

    const GroupVector& group_correlations() const { return correlations_; }
    double lambda_max() const { return lambda_max_; }

private:
    linalg::Matrix a_;
    std::vector<double> y_;
    GroupPartition partition_;
    double lambda_;
    double p_;
    int q_;
    GroupVector correlations_;
    double lambda_max_;
};

// (1/2) || A x - y ||^2 + lambda * sum_i || x_{G_i} ||_q^p
double objective(const ProblemInstance& instance, std::span<const double> x);

// Same with each group norm shifted by eps_i before the p-th power.
// Throws if any eps_i <= 0.
double perturbed_objective(const ProblemInstance& instance, std::span<const double> x,
                           const GroupVector& eps);

}  // namespace gsparse
