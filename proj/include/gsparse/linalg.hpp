#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace gsparse::linalg {

// Dense column-major matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t i, std::size_t j) { return data_[j * rows_ + i]; }
    double operator()(std::size_t i, std::size_t j) const { return data_[j * rows_ + i]; }

    double* col(std::size_t j) { return data_.data() + j * rows_; }
    const double* col(std::size_t j) const { return data_.data() + j * rows_; }

    std::span<const double> data() const { return data_; }
    std::span<double> data() { return data_; }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// y = A x. Row-partitioned across threads; per-row accumulation order is
// fixed, so the result is identical for any thread count.
void mat_vec(const Matrix& a, std::span<const double> x, std::span<double> y);

// g = A^T r. One dot product per column.
void mat_tvec(const Matrix& a, std::span<const double> r, std::span<double> g);

// Same products restricted to a column subset; x and g are indexed by
// position in cols, not by original column id.
void mat_vec_cols(const Matrix& a, std::span<const int> cols,
                  std::span<const double> x, std::span<double> y);
void mat_tvec_cols(const Matrix& a, std::span<const int> cols,
                   std::span<const double> r, std::span<double> g);

// Single-threaded reference kernels used by the tests and the kernel
// benchmark. Must produce bitwise-identical results to the parallel ones.
namespace serial {
void mat_vec(const Matrix& a, std::span<const double> x, std::span<double> y);
void mat_tvec(const Matrix& a, std::span<const double> r, std::span<double> g);
void mat_vec_cols(const Matrix& a, std::span<const int> cols,
                  std::span<const double> x, std::span<double> y);
void mat_tvec_cols(const Matrix& a, std::span<const int> cols,
                   std::span<const double> r, std::span<double> g);
}  // namespace serial

double dot(std::span<const double> u, std::span<const double> v);
double norm2(std::span<const double> v);

// Largest eigenvalue of A^T A estimated by power iteration.
double estimate_spectral_norm_sq(const Matrix& a, int iters = 20);

}  // namespace gsparse::linalg
