#include "gsparse/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace gsparse::linalg {

namespace {
constexpr std::size_t kParallelCutoff = 1u << 15;
}

namespace serial {

void mat_vec(const Matrix& a, std::span<const double> x, std::span<double> y) {
    const std::size_t m = a.rows(), n = a.cols();
    std::fill(y.begin(), y.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        const double* col = a.col(j);
        const double xj = x[j];
        for (std::size_t i = 0; i < m; ++i) y[i] += col[i] * xj;
    }
}

void mat_tvec(const Matrix& a, std::span<const double> r, std::span<double> g) {
    const std::size_t m = a.rows(), n = a.cols();
    for (std::size_t j = 0; j < n; ++j) {
        const double* col = a.col(j);
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += col[i] * r[i];
        g[j] = s;
    }
}

void mat_vec_cols(const Matrix& a, std::span<const int> cols,
                  std::span<const double> x, std::span<double> y) {
    const std::size_t m = a.rows();
    std::fill(y.begin(), y.end(), 0.0);
    for (std::size_t k = 0; k < cols.size(); ++k) {
        const double* col = a.col(static_cast<std::size_t>(cols[k]));
        const double xk = x[k];
        for (std::size_t i = 0; i < m; ++i) y[i] += col[i] * xk;
    }
}

void mat_tvec_cols(const Matrix& a, std::span<const int> cols,
                   std::span<const double> r, std::span<double> g) {
    const std::size_t m = a.rows();
    for (std::size_t k = 0; k < cols.size(); ++k) {
        const double* col = a.col(static_cast<std::size_t>(cols[k]));
        double s = 0.0;
        for (std::size_t i = 0; i < m; ++i) s += col[i] * r[i];
        g[k] = s;
    }
}

}  // namespace serial

void mat_vec(const Matrix& a, std::span<const double> x, std::span<double> y) {
    const std::size_t m = a.rows(), n = a.cols();
#ifdef _OPENMP
    if (m * n >= kParallelCutoff) {
#pragma omp parallel
        {
            const int nt = omp_get_num_threads();
            const int tid = omp_get_thread_num();
            const std::size_t r0 = m * tid / nt;
            const std::size_t r1 = m * (tid + 1) / nt;
            for (std::size_t i = r0; i < r1; ++i) y[i] = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double* col = a.col(j);
                const double xj = x[j];
                for (std::size_t i = r0; i < r1; ++i) y[i] += col[i] * xj;
            }
        }
        return;
    }
#endif
    serial::mat_vec(a, x, y);
}

void mat_tvec(const Matrix& a, std::span<const double> r, std::span<double> g) {
    const std::size_t m = a.rows(), n = a.cols();
#ifdef _OPENMP
    if (m * n >= kParallelCutoff) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(n); ++j) {
            const double* col = a.col(static_cast<std::size_t>(j));
            double s = 0.0;
            for (std::size_t i = 0; i < m; ++i) s += col[i] * r[i];
            g[static_cast<std::size_t>(j)] = s;
        }
        return;
    }
#endif
    serial::mat_tvec(a, r, g);
}

void mat_vec_cols(const Matrix& a, std::span<const int> cols,
                  std::span<const double> x, std::span<double> y) {
    const std::size_t m = a.rows();
#ifdef _OPENMP
    if (m * cols.size() >= kParallelCutoff) {
#pragma omp parallel
        {
            const int nt = omp_get_num_threads();
            const int tid = omp_get_thread_num();
            const std::size_t r0 = m * tid / nt;
            const std::size_t r1 = m * (tid + 1) / nt;
            for (std::size_t i = r0; i < r1; ++i) y[i] = 0.0;
            for (std::size_t k = 0; k < cols.size(); ++k) {
                const double* col = a.col(static_cast<std::size_t>(cols[k]));
                const double xk = x[k];
                for (std::size_t i = r0; i < r1; ++i) y[i] += col[i] * xk;
            }
        }
        return;
    }
#endif
    serial::mat_vec_cols(a, cols, x, y);
}

void mat_tvec_cols(const Matrix& a, std::span<const int> cols,
                   std::span<const double> r, std::span<double> g) {
    const std::size_t m = a.rows();
#ifdef _OPENMP
    if (m * cols.size() >= kParallelCutoff) {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(cols.size()); ++k) {
            const double* col = a.col(static_cast<std::size_t>(cols[k]));
            double s = 0.0;
            for (std::size_t i = 0; i < m; ++i) s += col[i] * r[i];
            g[static_cast<std::size_t>(k)] = s;
        }
        return;
    }
#endif
    serial::mat_tvec_cols(a, cols, r, g);
}

double dot(std::span<const double> u, std::span<const double> v) {
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
    return s;
}

double norm2(std::span<const double> v) { return std::sqrt(dot(v, v)); }

double estimate_spectral_norm_sq(const Matrix& a, int iters) {
    const std::size_t m = a.rows(), n = a.cols();
    if (m == 0 || n == 0) return 0.0;
    std::mt19937_64 rng(12345);
    std::normal_distribution<double> gauss;
    std::vector<double> v(n), av(m), atav(n);
    for (auto& vi : v) vi = gauss(rng);
    double lam = 0.0;
    for (int it = 0; it < iters; ++it) {
        const double nv = norm2(v);
        if (nv == 0.0) return 0.0;
        for (auto& vi : v) vi /= nv;
        mat_vec(a, v, av);
        mat_tvec(a, av, atav);
        lam = dot(v, atav);
        v = atav;
    }
    return lam;
}

}  // namespace gsparse::linalg
