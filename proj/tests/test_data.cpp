#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <string>

#include "gsparse/data.hpp"

using namespace gsparse;

namespace {

struct TempFile {
    std::string path;
    explicit TempFile(const std::string& name) : path("/tmp/gsparse_test_" + name) {}
    ~TempFile() { std::remove(path.c_str()); }
};

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path);
    out << content;
}

}  // namespace

TEST_CASE("synthetic generation is reproducible and row-orthonormal") {
    data::SyntheticSpec spec;
    spec.m = 30;
    spec.n = 100;
    spec.k_active = 4;
    spec.seed = 123;
    auto a1 = data::generate_synthetic(spec);
    auto a2 = data::generate_synthetic(spec);
    CHECK(a1.y == a2.y);
    CHECK(a1.x_true == a2.x_true);
    CHECK(std::equal(a1.a.data().begin(), a1.a.data().end(), a2.a.data().begin()));

    // A A^T = I within 1e-10
    double max_err = 0.0;
    for (int i = 0; i < spec.m; ++i) {
        for (int j = 0; j < spec.m; ++j) {
            double dot = 0.0;
            for (int k = 0; k < spec.n; ++k)
                dot += a1.a(static_cast<std::size_t>(i), static_cast<std::size_t>(k)) *
                       a1.a(static_cast<std::size_t>(j), static_cast<std::size_t>(k));
            max_err = std::max(max_err, std::fabs(dot - (i == j ? 1.0 : 0.0)));
        }
    }
    CHECK(max_err <= 1e-10);

    spec.seed = 124;
    auto a3 = data::generate_synthetic(spec);
    CHECK(a3.y != a1.y);
}

TEST_CASE("synthetic active group count and noiseless case") {
    data::SyntheticSpec spec;
    spec.m = 25;
    spec.n = 80;
    spec.k_active = 3;
    spec.noise_std = 0.0;
    spec.seed = 5;
    auto inst = data::generate_synthetic(spec);
    int active = 0;
    for (int g = 0; g < 16; ++g) {
        bool nz = false;
        for (int j = 0; j < 5; ++j)
            if (inst.x_true[static_cast<std::size_t>(5 * g + j)] != 0.0) nz = true;
        if (nz) ++active;
    }
    CHECK(active == 3);
    // y = A x_true exactly
    std::vector<double> ax(25);
    linalg::mat_vec(inst.a, inst.x_true, ax);
    for (int i = 0; i < 25; ++i)
        CHECK(inst.y[static_cast<std::size_t>(i)] ==
              doctest::Approx(ax[static_cast<std::size_t>(i)]).epsilon(1e-14));
}

TEST_CASE("synthetic spec validation") {
    data::SyntheticSpec spec;
    spec.m = 10;
    spec.n = 21;  // not divisible by 5
    CHECK_THROWS(data::generate_synthetic(spec));
    spec.n = 20;
    spec.k_active = 10;  // more than 4 groups
    CHECK_THROWS(data::generate_synthetic(spec));
}

TEST_CASE("libsvm parsing") {
    TempFile f("read.libsvm");
    write_file(f.path, "1.5 1:2.0 3:-1.0\n-0.5 2:4.0\n");
    auto ds = data::read_libsvm(f.path);
    CHECK(ds.y == std::vector<double>{1.5, -0.5});
    CHECK(ds.x.rows() == 2);
    CHECK(ds.x.cols() == 3);
    CHECK(ds.x(0, 0) == 2.0);
    CHECK(ds.x(0, 1) == 0.0);
    CHECK(ds.x(0, 2) == -1.0);
    CHECK(ds.x(1, 1) == 4.0);
}

TEST_CASE("libsvm error paths") {
    TempFile empty("empty.libsvm");
    write_file(empty.path, "");
    CHECK_THROWS(data::read_libsvm(empty.path));

    TempFile bad("bad.libsvm");
    write_file(bad.path, "1.0 notatoken\n");
    CHECK_THROWS_WITH_AS(data::read_libsvm(bad.path),
                         doctest::Contains("line 1"), std::runtime_error);

    CHECK_THROWS(data::read_libsvm("/nonexistent/file.libsvm"));
}

TEST_CASE("libsvm round trip on random sparse data") {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unif;
    linalg::Matrix x(12, 7);
    for (auto& v : x.data())
        if (unif(rng) < 0.4) v = gauss(rng);
    // keep the last column occupied so the width survives the round trip
    x(0, 6) = 1.25;
    std::vector<double> y(12);
    for (auto& v : y) v = gauss(rng);

    TempFile f("roundtrip.libsvm");
    data::write_libsvm(f.path, x, y);
    auto ds = data::read_libsvm(f.path);
    REQUIRE(ds.x.rows() == 12);
    REQUIRE(ds.x.cols() == 7);
    CHECK(ds.y == y);
    CHECK(std::equal(x.data().begin(), x.data().end(), ds.x.data().begin()));
}

TEST_CASE("csv parsing") {
    TempFile f("data.csv");
    write_file(f.path, "a,b,target\n1.0,2.0,3.0\n4.0,5.0,6.0\n");
    auto ds = data::read_csv(f.path, "target");
    CHECK(ds.y == std::vector<double>{3.0, 6.0});
    CHECK(ds.x.rows() == 2);
    CHECK(ds.x.cols() == 2);
    CHECK(ds.x(1, 1) == 5.0);
    CHECK(ds.feature_names == std::vector<std::string>{"a", "b"});

    CHECK_THROWS(data::read_csv(f.path, "missing"));

    TempFile g("badcell.csv");
    write_file(g.path, "a,target\nxyz,1.0\n");
    CHECK_THROWS_WITH_AS(data::read_csv(g.path, "target"),
                         doctest::Contains("line 2"), std::runtime_error);
}

TEST_CASE("polynomial expansion widths") {
    std::mt19937_64 rng(10);
    std::normal_distribution<double> gauss;
    {
        // 14 raw features -> C(14,2) = 91 groups -> 455 columns
        data::Dataset ds;
        ds.x = linalg::Matrix(40, 14);
        for (auto& v : ds.x.data()) v = gauss(rng);
        auto ex = data::polynomial_group_expand(ds);
        CHECK(ex.a.cols() == 455);
        CHECK(ex.partition.num_groups() == 91);
        // unit column norms
        for (std::size_t j = 0; j < ex.a.cols(); ++j) {
            double nrm = 0.0;
            for (std::size_t i = 0; i < ex.a.rows(); ++i) nrm += ex.a(i, j) * ex.a(i, j);
            CHECK(std::sqrt(nrm) == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
    {
        data::Dataset ds;
        ds.x = linalg::Matrix(10, 2);
        for (auto& v : ds.x.data()) v = gauss(rng);
        auto ex = data::polynomial_group_expand(ds);
        CHECK(ex.a.cols() == 5);
        CHECK(ex.partition.num_groups() == 1);
    }
}

TEST_CASE("constant columns are dropped before expansion") {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> gauss;
    data::Dataset ds;
    ds.x = linalg::Matrix(10, 4);
    for (auto& v : ds.x.data()) v = gauss(rng);
    for (std::size_t i = 0; i < 10; ++i) ds.x(i, 2) = 7.0;  // constant
    auto ex = data::polynomial_group_expand(ds);
    CHECK(ex.partition.num_groups() == 3);  // C(3,2)
}

TEST_CASE("synthetic spec parsing") {
    auto spec = data::parse_synthetic_spec("m=500,n=2000,seed=7");
    CHECK(spec.m == 500);
    CHECK(spec.n == 2000);
    CHECK(spec.seed == 7);
    CHECK(spec.group_size == 5);

    auto spec2 = data::parse_synthetic_spec("m=10\nn=20\nnoise_std=0.5\n# comment\nk_active=2\n");
    CHECK(spec2.noise_std == 0.5);
    CHECK(spec2.k_active == 2);

    CHECK_THROWS(data::parse_synthetic_spec("m:10"));
    CHECK_THROWS(data::parse_synthetic_spec("bogus=3"));
}
