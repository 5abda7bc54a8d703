#include "gsparse/core.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace gsparse {

GroupPartition::GroupPartition(std::vector<std::vector<int>> groups, int n)
    : groups_(std::move(groups)), n_(n) {
    if (n <= 0) throw std::invalid_argument("GroupPartition: n must be positive");
    std::vector<char> seen(static_cast<std::size_t>(n), 0);
    int covered = 0;
    for (const auto& g : groups_) {
        if (g.empty()) throw std::invalid_argument("GroupPartition: empty group");
        for (int idx : g) {
            if (idx < 0 || idx >= n)
                throw std::invalid_argument("GroupPartition: index out of range");
            if (seen[static_cast<std::size_t>(idx)])
                throw std::invalid_argument("GroupPartition: overlapping groups");
            seen[static_cast<std::size_t>(idx)] = 1;
            ++covered;
        }
    }
    if (covered != n)
        throw std::invalid_argument("GroupPartition: groups do not cover all features");
}

GroupPartition GroupPartition::uniform(int n, int group_size) {
    if (group_size <= 0 || n % group_size != 0)
        throw std::invalid_argument("GroupPartition::uniform: n not divisible by group size");
    std::vector<std::vector<int>> groups;
    groups.reserve(static_cast<std::size_t>(n / group_size));
    for (int start = 0; start < n; start += group_size) {
        std::vector<int> g(static_cast<std::size_t>(group_size));
        for (int j = 0; j < group_size; ++j) g[static_cast<std::size_t>(j)] = start + j;
        groups.push_back(std::move(g));
    }
    return GroupPartition(std::move(groups), n);
}

double dual_exponent(int q) {
    if (q == 1) return std::numeric_limits<double>::infinity();
    if (q == 2) return 2.0;
    throw std::invalid_argument("dual_exponent: q must be 1 or 2");
}

double group_norm(std::span<const double> x, const GroupPartition& partition, int i, int q) {
    const auto& g = partition.group(i);
    if (q == 2) {
        double s = 0.0;
        for (int idx : g) s += x[static_cast<std::size_t>(idx)] * x[static_cast<std::size_t>(idx)];
        return std::sqrt(s);
    }
    double s = 0.0;
    for (int idx : g) s += std::abs(x[static_cast<std::size_t>(idx)]);
    return s;
}

double group_dual_norm(std::span<const double> v, const GroupPartition& partition, int i, int q) {
    const auto& g = partition.group(i);
    if (q == 2) {
        double s = 0.0;
        for (int idx : g) s += v[static_cast<std::size_t>(idx)] * v[static_cast<std::size_t>(idx)];
        return std::sqrt(s);
    }
    double s = 0.0;
    for (int idx : g) s = std::max(s, std::abs(v[static_cast<std::size_t>(idx)]));
    return s;
}

ProblemInstance::ProblemInstance(linalg::Matrix a, std::vector<double> y,
                                 GroupPartition partition, double lambda, double p, int q)
    : a_(std::move(a)),
      y_(std::move(y)),
      partition_(std::move(partition)),
      lambda_(lambda),
      p_(p),
      q_(q) {
    if (static_cast<int>(a_.cols()) != partition_.num_features())
        throw std::invalid_argument("ProblemInstance: column count does not match partition");
    if (a_.rows() != y_.size())
        throw std::invalid_argument("ProblemInstance: row count does not match y");
    if (lambda_ <= 0.0) throw std::invalid_argument("ProblemInstance: lambda must be positive");
    if (p_ <= 0.0 || p_ >= 1.0) throw std::invalid_argument("ProblemInstance: p must be in (0,1)");
    if (q_ != 1 && q_ != 2) throw std::invalid_argument("ProblemInstance: q must be 1 or 2");

    std::vector<double> aty(a_.cols());
    linalg::mat_tvec(a_, y_, aty);
    const int d = partition_.num_groups();
    correlations_.resize(static_cast<std::size_t>(d));
    lambda_max_ = 0.0;
    for (int i = 0; i < d; ++i) {
        correlations_[static_cast<std::size_t>(i)] = group_dual_norm(aty, partition_, i, q_);
        lambda_max_ = std::max(lambda_max_, correlations_[static_cast<std::size_t>(i)]);
    }
}

double objective(const ProblemInstance& instance, std::span<const double> x) {
    std::vector<double> r(static_cast<std::size_t>(instance.num_rows()));
    linalg::mat_vec(instance.a(), x, r);
    double fit = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double e = r[i] - instance.y()[i];
        fit += e * e;
    }
    double reg = 0.0;
    for (int i = 0; i < instance.num_groups(); ++i)
        reg += std::pow(group_norm(x, instance.partition(), i, instance.q()), instance.p());
    return 0.5 * fit + instance.lambda() * reg;
}

double perturbed_objective(const ProblemInstance& instance, std::span<const double> x,
                           const GroupVector& eps) {
    if (static_cast<int>(eps.size()) != instance.num_groups())
        throw std::invalid_argument("perturbed_objective: eps size mismatch");
    for (double e : eps)
        if (e <= 0.0) throw std::invalid_argument("perturbed_objective: eps must be positive");
    std::vector<double> r(static_cast<std::size_t>(instance.num_rows()));
    linalg::mat_vec(instance.a(), x, r);
    double fit = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double e = r[i] - instance.y()[i];
        fit += e * e;
    }
    double reg = 0.0;
    for (int i = 0; i < instance.num_groups(); ++i) {
        const double ni = group_norm(x, instance.partition(), i, instance.q());
        reg += std::pow(ni + eps[static_cast<std::size_t>(i)], instance.p());
    }
    return 0.5 * fit + instance.lambda() * reg;
}

}  // namespace gsparse
