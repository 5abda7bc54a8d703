#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "gsparse/core.hpp"
#include "gsparse/subsolver.hpp"

using namespace gsparse;

namespace {

linalg::Matrix identity(std::size_t n) {
    linalg::Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i) a(i, i) = 1.0;
    return a;
}

struct RandomInstance {
    linalg::Matrix a;
    std::vector<double> y;
};

RandomInstance random_instance(std::size_t m, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    RandomInstance out{linalg::Matrix(m, n), std::vector<double>(m)};
    for (auto& v : out.a.data()) v = gauss(rng);
    for (auto& v : out.y) v = gauss(rng);
    return out;
}

// Independent objective recomputation with plain index loops; deliberately
// avoids the library's matvec and norm helpers.
double naive_objective(const linalg::Matrix& a, const std::vector<double>& y,
                       const GroupPartition& part, double lambda, double p, int q,
                       const std::vector<double>& x) {
    double fit = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        double ri = -y[i];
        for (std::size_t j = 0; j < a.cols(); ++j) ri += a(i, j) * x[j];
        fit += ri * ri;
    }
    double reg = 0.0;
    for (int g = 0; g < part.num_groups(); ++g) {
        double nrm = 0.0;
        for (int idx : part.group(g)) {
            if (q == 2)
                nrm += x[static_cast<std::size_t>(idx)] * x[static_cast<std::size_t>(idx)];
            else
                nrm += std::fabs(x[static_cast<std::size_t>(idx)]);
        }
        if (q == 2) nrm = std::sqrt(nrm);
        reg += std::pow(nrm, p);
    }
    return 0.5 * fit + lambda * reg;
}

}  // namespace

TEST_CASE("partition validation") {
    CHECK_THROWS(GroupPartition({{0, 1}, {1, 2}}, 3));      // overlap
    CHECK_THROWS(GroupPartition({{0}, {2}}, 3));            // gap
    CHECK_THROWS(GroupPartition({{0}, {}, {1}}, 2));        // empty group
    CHECK_THROWS(GroupPartition({{0, 3}}, 2));              // out of range
    GroupPartition ok({{2, 0}, {1}}, 3);
    CHECK(ok.num_groups() == 2);
    CHECK_THROWS(GroupPartition::uniform(10, 3));
    CHECK(GroupPartition::uniform(10, 5).num_groups() == 2);
}

TEST_CASE("dual exponent") {
    CHECK(dual_exponent(2) == doctest::Approx(2.0));
    CHECK(std::isinf(dual_exponent(1)));
    CHECK_THROWS(dual_exponent(4));
}

TEST_CASE("group norms and dual norms") {
    GroupPartition part({{0, 1}}, 2);
    std::vector<double> x{3.0, 4.0};
    CHECK(group_norm(x, part, 0, 2) == doctest::Approx(5.0));
    std::vector<double> x2{3.0, -4.0};
    CHECK(group_norm(x2, part, 0, 1) == doctest::Approx(7.0));
    CHECK(group_dual_norm(x, part, 0, 2) == doctest::Approx(5.0));
    CHECK(group_dual_norm(x2, part, 0, 1) == doctest::Approx(4.0));
    std::vector<double> z{0.0, 0.0};
    CHECK(group_norm(z, part, 0, 2) == 0.0);
    CHECK(group_dual_norm(z, part, 0, 1) == 0.0);
}

TEST_CASE("Hoelder pairing on random vectors") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> gauss;
    GroupPartition part = GroupPartition::uniform(12, 4);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> u(12), v(12);
        for (auto& t : u) t = gauss(rng);
        for (auto& t : v) t = gauss(rng);
        for (int q : {1, 2}) {
            for (int g = 0; g < part.num_groups(); ++g) {
                double inner = 0.0;
                for (int idx : part.group(g))
                    inner += u[static_cast<std::size_t>(idx)] * v[static_cast<std::size_t>(idx)];
                CHECK(std::fabs(inner) <=
                      group_norm(u, part, g, q) * group_dual_norm(v, part, g, q) + 1e-12);
            }
        }
    }
}

TEST_CASE("objective examples") {
    {
        auto a = identity(2);
        std::vector<double> y{1.0, 0.0};
        ProblemInstance inst(a, y, GroupPartition({{0, 1}}, 2), 0.1, 0.5, 2);
        CHECK(objective(inst, std::vector<double>{1.0, 0.0}) == doctest::Approx(0.1));
        CHECK(objective(inst, std::vector<double>{0.0, 0.0}) == doctest::Approx(0.5));
    }
    {
        auto ri = random_instance(3, 4, 42);
        GroupPartition part = GroupPartition::uniform(4, 2);
        ProblemInstance inst(ri.a, ri.y, part, 0.3, 0.5, 2);
        std::mt19937_64 rng(43);
        std::normal_distribution<double> gauss;
        std::vector<double> x(4);
        for (auto& v : x) v = gauss(rng);
        CHECK(objective(inst, x) ==
              doctest::Approx(naive_objective(ri.a, ri.y, part, 0.3, 0.5, 2, x)).epsilon(1e-12));
    }
}

TEST_CASE("objective invariant under group permutation") {
    auto ri = random_instance(6, 8, 77);
    GroupPartition part = GroupPartition::uniform(8, 2);
    ProblemInstance inst(ri.a, ri.y, part, 0.2, 0.5, 2);
    std::vector<double> x{1.0, -2.0, 0.5, 0.0, 3.0, 1.0, -1.0, 0.25};
    const double ref = objective(inst, x);

    // Swap group blocks 0 and 3 in both A and x.
    linalg::Matrix ap = ri.a;
    std::vector<double> xp = x;
    for (int j = 0; j < 2; ++j) {
        for (std::size_t i = 0; i < ap.rows(); ++i)
            std::swap(ap(i, static_cast<std::size_t>(j)), ap(i, static_cast<std::size_t>(6 + j)));
        std::swap(xp[static_cast<std::size_t>(j)], xp[static_cast<std::size_t>(6 + j)]);
    }
    ProblemInstance perm(ap, ri.y, part, 0.2, 0.5, 2);
    CHECK(objective(perm, xp) == doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("perturbed objective") {
    auto a = identity(2);
    std::vector<double> y{3.0, 4.0};
    ProblemInstance inst(a, y, GroupPartition({{0}, {1}}, 2), 0.1, 0.5, 2);
    std::vector<double> zero{0.0, 0.0};
    GroupVector eps{1.0, 1.0};
    CHECK(perturbed_objective(inst, zero, eps) == doctest::Approx(12.5 + 0.1 * 2));

    // eps -> 0 approaches the plain objective
    GroupVector tiny{1e-14, 1e-14};
    CHECK(perturbed_objective(inst, zero, tiny) ==
          doctest::Approx(objective(inst, zero)).epsilon(1e-6));

    CHECK_THROWS(perturbed_objective(inst, zero, GroupVector{1.0, 0.0}));

    // monotone in each eps_i
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unif(0.01, 2.0);
    for (int trial = 0; trial < 100; ++trial) {
        GroupVector e1{unif(rng), unif(rng)};
        GroupVector e2 = e1;
        e2[trial % 2] += unif(rng);
        CHECK(perturbed_objective(inst, zero, e1) <= perturbed_objective(inst, zero, e2) + 1e-12);
    }
}

TEST_CASE("majorization: one subproblem solve does not increase the perturbed objective") {
    auto ri = random_instance(10, 20, 99);
    GroupPartition part = GroupPartition::uniform(20, 5);
    ProblemInstance inst(ri.a, ri.y, part, 0.2, 0.5, 2);
    std::mt19937_64 rng(100);
    std::normal_distribution<double> gauss;
    std::vector<double> xk(20);
    for (auto& v : xk) v = gauss(rng);
    GroupVector eps(4, 0.3);

    SubproblemSpec spec;
    spec.problem = &inst;
    spec.active_groups = {0, 1, 2, 3};
    spec.lambdas.resize(4);
    for (int i = 0; i < 4; ++i) {
        const double ni = group_norm(xk, part, i, 2);
        spec.lambdas[static_cast<std::size_t>(i)] =
            inst.lambda() * inst.p() * std::pow(ni + eps[static_cast<std::size_t>(i)], inst.p() - 1.0);
    }
    spec.x_init = xk;
    auto res = solve_subproblem(spec);
    CHECK(perturbed_objective(inst, res.x, eps) <= perturbed_objective(inst, xk, eps) + 1e-10);
}

TEST_CASE("group correlations and lambda_max") {
    {
        auto a = identity(2);
        std::vector<double> y{3.0, 4.0};
        ProblemInstance inst(a, y, GroupPartition({{0}, {1}}, 2), 0.1, 0.5, 2);
        CHECK(inst.group_correlations()[0] == doctest::Approx(3.0));
        CHECK(inst.group_correlations()[1] == doctest::Approx(4.0));
        CHECK(inst.lambda_max() == doctest::Approx(4.0));
    }
    {
        auto a = identity(2);
        std::vector<double> y{0.0, 0.0};
        ProblemInstance inst(a, y, GroupPartition({{0}, {1}}, 2), 0.1, 0.5, 2);
        CHECK(inst.group_correlations()[0] == 0.0);
        CHECK(inst.lambda_max() == 0.0);
    }
    {
        auto ri = random_instance(5, 6, 17);
        GroupPartition part = GroupPartition::uniform(6, 3);
        ProblemInstance inst(ri.a, ri.y, part, 0.1, 0.5, 2);
        // column-by-column recomputation
        for (int g = 0; g < 2; ++g) {
            double sq = 0.0;
            for (int idx : part.group(g)) {
                double dot = 0.0;
                for (std::size_t i = 0; i < 5; ++i)
                    dot += ri.a(i, static_cast<std::size_t>(idx)) * ri.y[i];
                sq += dot * dot;
            }
            CHECK(inst.group_correlations()[static_cast<std::size_t>(g)] ==
                  doctest::Approx(std::sqrt(sq)).epsilon(1e-12));
        }
    }
}

TEST_CASE("zero-solution bracket around lambda_max") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        auto ri = random_instance(8, 12, 300 + seed);
        GroupPartition part = GroupPartition::uniform(12, 3);
        ProblemInstance inst(ri.a, ri.y, part, 1.0, 0.5, 2);
        const double lmax = inst.lambda_max();
        REQUIRE(lmax > 0.0);

        SubproblemSpec spec;
        spec.problem = &inst;
        spec.active_groups = {0, 1, 2, 3};
        for (double factor : {1.001, 0.999}) {
            spec.lambdas.assign(4, factor * lmax);
            auto res = solve_subproblem(spec);
            double nrm = linalg::norm2(res.x);
            if (factor > 1.0)
                CHECK(nrm == 0.0);
            else
                CHECK(nrm > 0.0);
        }
    }
}

TEST_CASE("instance validation") {
    auto a = identity(2);
    std::vector<double> y{1.0, 2.0};
    GroupPartition part({{0}, {1}}, 2);
    CHECK_THROWS(ProblemInstance(a, y, part, -1.0, 0.5, 2));
    CHECK_THROWS(ProblemInstance(a, y, part, 1.0, 1.5, 2));
    CHECK_THROWS(ProblemInstance(a, y, part, 1.0, 0.5, 3));
    CHECK_THROWS(ProblemInstance(a, std::vector<double>{1.0}, part, 1.0, 0.5, 2));
}
