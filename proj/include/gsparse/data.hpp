#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gsparse/core.hpp"

namespace gsparse::data {

struct SyntheticSpec {
    int m = 500;
    int n = 2000;
    int group_size = 5;
    int k_active = 10;
    double noise_std = 0.01;
    std::uint64_t seed = 0;
};

struct SyntheticInstance {
    linalg::Matrix a;  // rows orthonormalized, A A^T = I
    std::vector<double> y;
    std::vector<double> x_true;
    GroupPartition partition;
};

// A is an m x n standard-Gaussian draw with rows orthonormalized; x_true has
// k_active groups of Gaussian entries chosen uniformly, the rest zero;
// y = A x_true + noise. Deterministic in the seed.
SyntheticInstance generate_synthetic(const SyntheticSpec& spec);

enum class Task { Regression, Classification };

struct Dataset {
    linalg::Matrix x;
    std::vector<double> y;
    std::vector<std::string> feature_names;
    Task task = Task::Regression;
};

// Sparse "label idx:val ..." text format, 1-based indices. Throws on
// malformed lines (with the line number) and on empty files.
Dataset read_libsvm(const std::string& path);

// Writes the same format; zero entries are omitted.
void write_libsvm(const std::string& path, const linalg::Matrix& x,
                  const std::vector<double>& y);

// Numeric CSV with a header row; target column selected by name.
Dataset read_csv(const std::string& path, const std::string& target_column);

struct ExpandedData {
    linalg::Matrix a;
    GroupPartition partition;
};

// For each raw feature pair (j, l) emits one group of the five monomials
// {x_j x_l, x_j^2 x_l, x_j x_l^2, x_j^2, x_l^2}; columns are centered and
// scaled to unit l2 norm. Constant raw columns are dropped first.
ExpandedData polynomial_group_expand(const Dataset& dataset, int degree = 3);

// key=value per line; '#' starts a comment. Also accepts the inline
// "m=500,n=2000" form used on the command line.
SyntheticSpec parse_synthetic_spec(const std::string& text);
SyntheticSpec read_synthetic_spec_file(const std::string& path);

}  // namespace gsparse::data
