#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "rsfde/errors.hpp"
#include "rsfde/oracles.hpp"
#include "rsfde/preconditioner.hpp"
#include "rsfde/presets.hpp"
#include "test_support.hpp"

using namespace rsfde;
using test::dense_of;
using test::small_spec;

TEST_CASE("e bounds of a constant coefficient")
{
    ProblemSpec s = small_spec(2, 5, {1.3, 1.7}, {1.0, 2.0});
    s.coefficient = [](std::span<const double>, double) { return 1.0; };
    const CoefficientBounds b = compute_e_bar(s);
    CHECK(b.e_bar == 1.0);
    CHECK(b.e_hat == 1.0);
    CHECK(b.e_check == 1.0);
}

TEST_CASE("e bounds match a brute-force scan")
{
    const ProblemSpec s = make_preset(Preset::ex1, 15, 64, {1.5});
    const Discretization d(s);
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::size_t m = 0; m < s.time_steps; ++m) {
        const auto e = d.e_half(m);
        lo = std::min(lo, *std::min_element(e->begin(), e->end()));
        hi = std::max(hi, *std::max_element(e->begin(), e->end()));
    }
    const CoefficientBounds b = compute_e_bar(s);
    CHECK(b.e_check == lo);
    CHECK(b.e_hat == hi);
    CHECK(b.e_bar == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-15));
    // e is decreasing in t here, so a strided scan that keeps the last level is exact.
    const CoefficientBounds strided = compute_e_bar(s, 7);
    CHECK(strided.e_check == lo);
    CHECK(strided.e_hat == hi);
}

TEST_CASE("non-positive coefficient is refused")
{
    ProblemSpec s = small_spec(1, 5, {1.5}, {1.0});
    s.coefficient = [](std::span<const double> x, double) { return x[0] - 0.5; };
    CHECK_THROWS_AS(compute_e_bar(s), InvalidCoefficient);
}

TEST_CASE("preconditioner spectrum")
{
    const ProblemSpec s = small_spec(2, 6, {1.3, 1.8}, {1.0, 0.7});
    const Discretization d(s);
    const double e_bar = compute_e_bar(s).e_bar;
    const PrecondSpectrum p = build_precond(d, e_bar);
    REQUIRE(p.diag.size() == d.size());

    SUBCASE("every eigenvalue exceeds e_bar")
    {
        for (double v : p.diag) CHECK(v > e_bar);
    }

    SUBCASE("diagonal equals the dense spectrum")
    {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(oracle::preconditioner(s, e_bar));
        std::vector<double> got = p.diag;
        std::sort(got.begin(), got.end());
        for (std::size_t i = 0; i < got.size(); ++i)
            CHECK(got[i] == doctest::Approx(es.eigenvalues()(Eigen::Index(i))).epsilon(1e-11));
    }

    SUBCASE("powers agree with dense matrix functions")
    {
        const Eigen::MatrixXd dense = oracle::preconditioner(s, e_bar);
        const std::vector<double> x = test::random_vector(d.size(), 11);
        CHECK(test::rel_diff(apply_P_inv(p, x), dense.ldlt().solve(test::as_eigen(x))) < 1e-10);
        CHECK(test::rel_diff(apply_P_inv_sqrt(p, x), oracle::spd_power(dense, -0.5) * test::as_eigen(x)) < 1e-10);
        CHECK(test::rel_diff(apply_P_sqrt(p, x), oracle::spd_power(dense, 0.5) * test::as_eigen(x)) < 1e-10);
        std::vector<double> y(x.size());
        apply_P_power(p, 1.0, x, y);
        CHECK(test::rel_diff(y, dense * test::as_eigen(x)) < 1e-10);
    }

    SUBCASE("half powers compose")
    {
        const std::vector<double> x = test::random_vector(d.size(), 12);
        CHECK(test::rel_diff(apply_P_inv_sqrt(p, apply_P_inv_sqrt(p, x)), apply_P_inv(p, x)) < 1e-12);
        std::vector<double> px(x.size());
        apply_P_power(p, 1.0, x, px);
        CHECK(test::rel_diff(apply_P_sqrt(p, apply_P_sqrt(p, x)), px) < 1e-12);
        CHECK(test::rel_diff(apply_P_sqrt(p, apply_P_inv_sqrt(p, x)), x) < 1e-13);
    }

    SUBCASE("P inverse contracts by at most 1 / e_bar")
    {
        for (std::uint64_t seed = 0; seed < 20; ++seed) {
            const std::vector<double> x = test::random_vector(d.size(), 100 + seed);
            CHECK(test::norm(apply_P_inv(p, x)) <= test::norm(x) / e_bar);
        }
    }

    SUBCASE("general power goes through pow")
    {
        const std::vector<double> x = test::random_vector(d.size(), 13);
        std::vector<double> once(x.size()), twice(x.size()), sq(x.size());
        apply_P_power(p, 1.0, x, once);
        apply_P_power(p, 1.0, once, twice);
        apply_P_power(p, 2.0, x, sq);
        CHECK(test::rel_diff(sq, twice) < 1e-12);
    }
}

TEST_CASE("H^{-1/2} tau(S) H^{-1/2} equals H^{-1} tau(S)")
{
    // All factors are diagonal in the same sine basis, so they commute.
    const ProblemSpec s = small_spec(2, 5, {1.2, 1.6}, {1.0, 1.0});
    const Eigen::MatrixXd h = oracle::H_full(s);
    const Eigen::MatrixXd ts = oracle::S_alpha(s, true);
    const Eigen::MatrixXd hm = oracle::spd_power(h, -0.5);
    const Eigen::MatrixXd lhs = hm * ts * hm;
    const Eigen::MatrixXd rhs = h.inverse() * ts;
    CHECK((lhs - rhs).norm() / rhs.norm() < 1e-12);
}

TEST_CASE("constant e with tau(S) makes the preconditioned operator the identity")
{
    ProblemSpec s = small_spec(3, 3, {1.1, 1.5, 1.9}, {1.0, 2.0, 0.5});
    s.coefficient = [](std::span<const double>, double) { return 2.5; };
    const Discretization d(s);
    const PrecondSpectrum p = build_precond(d, 2.5);
    const Eigen::MatrixXd a = oracle::A_tilde(s, 0, true);
    const Eigen::MatrixXd pinv = dense_of(d.size(), [&](std::span<const double> x, std::span<double> y) {
        const std::vector<double> v = apply_P_inv(p, x);
        std::copy(v.begin(), v.end(), y.begin());
    });
    const Eigen::MatrixXd prod = pinv * a;
    CHECK((prod - Eigen::MatrixXd::Identity(prod.rows(), prod.cols())).norm() < 1e-11);
}
