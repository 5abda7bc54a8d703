#include "gsparse/subsolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace gsparse {

namespace {

// Column view of A restricted to the active groups, compacted into a
// physical copy when the active set shrinks below half of the columns.
struct ActiveView {
    const linalg::Matrix* full = nullptr;
    std::vector<int> cols;               // original column ids, ascending
    std::vector<int> group_offsets;      // start of each active group in view coords
    std::vector<int> group_sizes;
    std::vector<double> group_lambdas;
    linalg::Matrix compact;
    bool use_compact = false;
    bool all_columns = false;

    int num_cols() const { return static_cast<int>(cols.size()); }

    void mv(std::span<const double> x, std::span<double> y) const {
        if (all_columns)
            linalg::mat_vec(*full, x, y);
        else if (use_compact)
            linalg::mat_vec(compact, x, y);
        else
            linalg::mat_vec_cols(*full, cols, x, y);
    }
    void tmv(std::span<const double> r, std::span<double> g) const {
        if (all_columns)
            linalg::mat_tvec(*full, r, g);
        else if (use_compact)
            linalg::mat_tvec(compact, r, g);
        else
            linalg::mat_tvec_cols(*full, cols, r, g);
    }
};

ActiveView make_view(const SubproblemSpec& spec) {
    const ProblemInstance& prob = *spec.problem;
    ActiveView view;
    view.full = &prob.a();
    for (int gi : spec.active_groups) {
        const auto& g = prob.partition().group(gi);
        view.group_offsets.push_back(static_cast<int>(view.cols.size()));
        view.group_sizes.push_back(static_cast<int>(g.size()));
        view.group_lambdas.push_back(spec.lambdas[static_cast<std::size_t>(gi)]);
        view.cols.insert(view.cols.end(), g.begin(), g.end());
    }
    view.all_columns = view.cols.size() == prob.a().cols();
    if (!view.all_columns && 2 * view.cols.size() < prob.a().cols()) {
        view.use_compact = true;
        view.compact = linalg::Matrix(prob.a().rows(), view.cols.size());
        for (std::size_t k = 0; k < view.cols.size(); ++k) {
            const double* src = prob.a().col(static_cast<std::size_t>(view.cols[k]));
            std::copy(src, src + prob.a().rows(), view.compact.col(k));
        }
    }
    return view;
}

double view_spectral_norm_sq(const ActiveView& view, std::size_t m) {
    // Power iteration through the view's own products.
    std::vector<double> v(static_cast<std::size_t>(view.num_cols()), 1.0);
    std::vector<double> av(m), atav(v.size());
    double lam = 1.0;
    for (int it = 0; it < 20; ++it) {
        const double nv = linalg::norm2(v);
        if (nv == 0.0) return 1.0;
        for (auto& vi : v) vi /= nv;
        view.mv(v, av);
        view.tmv(av, atav);
        lam = linalg::dot(v, atav);
        v = atav;
    }
    return std::max(lam, 1e-12);
}

double group_seg_norm(std::span<const double> x, int off, int sz, int q) {
    double s = 0.0;
    if (q == 2) {
        for (int j = 0; j < sz; ++j) s += x[static_cast<std::size_t>(off + j)] * x[static_cast<std::size_t>(off + j)];
        return std::sqrt(s);
    }
    for (int j = 0; j < sz; ++j) s += std::abs(x[static_cast<std::size_t>(off + j)]);
    return s;
}

double group_seg_dual_norm(std::span<const double> v, int off, int sz, int q) {
    double s = 0.0;
    if (q == 2) {
        for (int j = 0; j < sz; ++j) s += v[static_cast<std::size_t>(off + j)] * v[static_cast<std::size_t>(off + j)];
        return std::sqrt(s);
    }
    for (int j = 0; j < sz; ++j) s = std::max(s, std::abs(v[static_cast<std::size_t>(off + j)]));
    return s;
}

double regularizer(const ActiveView& view, std::span<const double> x, int q) {
    double reg = 0.0;
    for (std::size_t k = 0; k < view.group_offsets.size(); ++k)
        reg += view.group_lambdas[k] *
               group_seg_norm(x, view.group_offsets[k], view.group_sizes[k], q);
    return reg;
}

// Dual gap of the subproblem in view coordinates given the residual
// r = A x - y and the gradient g = A^T r.
double dual_gap_from_grad(const ActiveView& view, const std::vector<double>& y, int q,
                          double primal, std::span<const double> r,
                          std::span<const double> g) {
    double s = 1.0;
    for (std::size_t k = 0; k < view.group_offsets.size(); ++k) {
        const double gn = group_seg_dual_norm(g, view.group_offsets[k], view.group_sizes[k], q);
        if (gn > 0.0) s = std::min(s, view.group_lambdas[k] / gn);
    }
    double dual = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double th = s * r[i];
        dual += -0.5 * (th + y[i]) * (th + y[i]) + 0.5 * y[i] * y[i];
    }
    return std::max(primal - dual, 0.0);
}

}  // namespace

void prox_group(std::span<double> v, double tau, int q) {
    if (q == 2) {
        double nv = 0.0;
        for (double vi : v) nv += vi * vi;
        nv = std::sqrt(nv);
        if (nv <= tau) {
            std::fill(v.begin(), v.end(), 0.0);
        } else {
            const double scale = 1.0 - tau / nv;
            for (auto& vi : v) vi *= scale;
        }
        return;
    }
    for (auto& vi : v) {
        const double mag = std::abs(vi) - tau;
        vi = mag > 0.0 ? (vi > 0.0 ? mag : -mag) : 0.0;
    }
}

SubproblemResult solve_subproblem(const SubproblemSpec& spec) {
    const ProblemInstance& prob = *spec.problem;
    const int q = prob.q();
    const std::size_t m = prob.y().size();
    SubproblemResult result;
    result.x.assign(static_cast<std::size_t>(prob.num_features()), 0.0);

    ActiveView view = make_view(spec);
    const int na = view.num_cols();
    if (na == 0) {
        result.converged = true;
        return result;
    }
    for (double lam : view.group_lambdas)
        if (lam <= 0.0) throw std::invalid_argument("solve_subproblem: nonpositive lambda");

    std::vector<double> x(static_cast<std::size_t>(na), 0.0);
    if (!spec.x_init.empty()) {
        for (int k = 0; k < na; ++k)
            x[static_cast<std::size_t>(k)] = spec.x_init[static_cast<std::size_t>(view.cols[static_cast<std::size_t>(k)])];
    }

    const double lip = view_spectral_norm_sq(view, m);
    const double tau_fallback = 1.0 / lip;

    std::vector<double> r(m), g(static_cast<std::size_t>(na));
    std::vector<double> x_next(static_cast<std::size_t>(na)), r_next(m), g_next(static_cast<std::size_t>(na));
    std::vector<double> step(static_cast<std::size_t>(na));

    view.mv(x, r);
    for (std::size_t i = 0; i < m; ++i) r[i] -= prob.y()[i];
    double fval = 0.5 * linalg::dot(r, r);
    view.tmv(r, g);

    double tau = tau_fallback;
    std::vector<double> dx, dg;
    bool have_prev = false;

    const double gap_target_scale = 10.0 * spec.tol;

    for (int it = 1; it <= spec.max_iters; ++it) {
        if (have_prev) {
            const double num = linalg::dot(dx, dx);
            const double den = linalg::dot(dx, dg);
            tau = (den > 1e-30 * num && num > 0.0)
                      ? std::clamp(num / den, 1e-5 * tau_fallback, 1e5 * tau_fallback)
                      : tau_fallback;
        }

        double f_next = 0.0;
        for (int bt = 0;; ++bt) {
            for (int k = 0; k < na; ++k)
                x_next[static_cast<std::size_t>(k)] =
                    x[static_cast<std::size_t>(k)] - tau * g[static_cast<std::size_t>(k)];
            for (std::size_t k = 0; k < view.group_offsets.size(); ++k)
                prox_group(std::span<double>(x_next)
                               .subspan(static_cast<std::size_t>(view.group_offsets[k]),
                                        static_cast<std::size_t>(view.group_sizes[k])),
                           tau * view.group_lambdas[k], q);
            view.mv(x_next, r_next);
            for (std::size_t i = 0; i < m; ++i) r_next[i] -= prob.y()[i];
            f_next = 0.5 * linalg::dot(r_next, r_next);
            double lin = 0.0, sq = 0.0;
            for (int k = 0; k < na; ++k) {
                const double dk = x_next[static_cast<std::size_t>(k)] - x[static_cast<std::size_t>(k)];
                lin += g[static_cast<std::size_t>(k)] * dk;
                sq += dk * dk;
            }
            if (f_next <= fval + lin + 0.5 * sq / tau + 1e-12 * std::abs(fval) + 1e-300) break;
            if (bt >= 60) break;  // step is numerically saturated, accept
            tau *= 0.5;
        }
        if (!std::isfinite(f_next))
            throw std::runtime_error("solve_subproblem: iterates diverged (non-finite values)");

        double dx_norm = 0.0;
        for (int k = 0; k < na; ++k) {
            const double dk = x_next[static_cast<std::size_t>(k)] - x[static_cast<std::size_t>(k)];
            dx_norm += dk * dk;
        }
        dx_norm = std::sqrt(dx_norm);
        const double residual = dx_norm / std::max(1.0, linalg::norm2(x));

        view.tmv(r_next, g_next);
        dx.resize(static_cast<std::size_t>(na));
        dg.resize(static_cast<std::size_t>(na));
        for (int k = 0; k < na; ++k) {
            dx[static_cast<std::size_t>(k)] =
                x_next[static_cast<std::size_t>(k)] - x[static_cast<std::size_t>(k)];
            dg[static_cast<std::size_t>(k)] =
                g_next[static_cast<std::size_t>(k)] - g[static_cast<std::size_t>(k)];
        }
        have_prev = true;
        x.swap(x_next);
        r.swap(r_next);
        g.swap(g_next);
        fval = f_next;
        result.iterations = it;
        result.final_residual = residual;

        if (residual <= spec.tol) {
            const double primal = fval + regularizer(view, x, q);
            const double gap = dual_gap_from_grad(view, prob.y(), q, primal, r, g);
            if (gap <= gap_target_scale * std::max(1.0, primal)) {
                result.converged = true;
                break;
            }
        }
    }

    for (int k = 0; k < na; ++k)
        result.x[static_cast<std::size_t>(view.cols[static_cast<std::size_t>(k)])] =
            x[static_cast<std::size_t>(k)];
    return result;
}

double subproblem_objective(const SubproblemSpec& spec, std::span<const double> x) {
    const ProblemInstance& prob = *spec.problem;
    std::vector<double> r(prob.y().size());
    linalg::mat_vec(prob.a(), x, r);
    double fit = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) {
        const double e = r[i] - prob.y()[i];
        fit += e * e;
    }
    double reg = 0.0;
    for (int gi : spec.active_groups)
        reg += spec.lambdas[static_cast<std::size_t>(gi)] *
               group_norm(x, prob.partition(), gi, prob.q());
    return 0.5 * fit + reg;
}

double subproblem_dual_gap(const SubproblemSpec& spec, std::span<const double> x) {
    const ProblemInstance& prob = *spec.problem;
    const std::size_t m = prob.y().size();
    std::vector<double> r(m);
    linalg::mat_vec(prob.a(), x, r);
    for (std::size_t i = 0; i < m; ++i) r[i] -= prob.y()[i];
    const double primal = subproblem_objective(spec, x);

    std::vector<double> atr(static_cast<std::size_t>(prob.num_features()));
    linalg::mat_tvec(prob.a(), r, atr);
    double s = 1.0;
    for (int gi : spec.active_groups) {
        const double gn = group_dual_norm(atr, prob.partition(), gi, prob.q());
        if (gn > 0.0) s = std::min(s, spec.lambdas[static_cast<std::size_t>(gi)] / gn);
    }
    double dual = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
        const double th = s * r[i];
        dual += -0.5 * (th + prob.y()[i]) * (th + prob.y()[i]) + 0.5 * prob.y()[i] * prob.y()[i];
    }
    return std::max(primal - dual, 0.0);
}

}  // namespace gsparse
