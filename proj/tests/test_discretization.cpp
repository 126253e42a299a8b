#include <doctest.h>

#include <cmath>
#include <memory>

#include "rsfde/discretization.hpp"
#include "rsfde/errors.hpp"
#include "rsfde/oracles.hpp"
#include "rsfde/presets.hpp"
#include "test_support.hpp"

using namespace rsfde;

using test::dense_of;
using test::small_spec;

TEST_CASE("problem validation")
{
    ProblemSpec s = small_spec(2, 4, {1.5, 1.6}, {1.0, 2.0});
    CHECK_NOTHROW(s.validate());
    CHECK(s.mesh_width(0) == doctest::Approx(0.2));
    CHECK(s.time_step() == doctest::Approx(0.1));

    ProblemSpec bad = s;
    bad.alphas = {1.5, 2.5};
    CHECK_THROWS_AS(bad.validate(), DomainError);
    bad = s;
    bad.kappas = {1.0, 0.0};
    CHECK_THROWS(bad.validate());
    bad = s;
    bad.dim = 4;
    CHECK_THROWS(bad.validate());
    bad = s;
    bad.alphas = {1.5};
    CHECK_THROWS(bad.validate());
    bad = s;
    bad.coefficient = nullptr;
    CHECK_THROWS_AS(bad.validate(), ConfigurationError);
    bad = s;
    bad.n = 0;
    CHECK_THROWS(bad.validate());
}

TEST_CASE("grid ordering has axis 0 fastest")
{
    ProblemSpec s = small_spec(3, 4, {1.5, 1.5, 1.5}, {1, 1, 1});
    s.domain = {{0.0, 5.0}, {0.0, 10.0}, {-1.0, 4.0}};
    Discretization d(s);
    const std::vector<double> p = d.point(1 + 4 * 2 + 16 * 3);
    CHECK(p[0] == doctest::Approx(2.0));
    CHECK(p[1] == doctest::Approx(6.0));
    CHECK(p[2] == doctest::Approx(3.0));
    CHECK(d.node(2, 0) == doctest::Approx(-1.0));
    CHECK(d.node(2, 5) == doctest::Approx(4.0));
    const std::vector<double> v = d.sample([](std::span<const double> x) { return x[0] + 100 * x[1] + 1e4 * x[2]; });
    CHECK(v[1 + 4 * 2 + 16 * 3] == doctest::Approx(2.0 + 600.0 + 3e4));
}

TEST_CASE("S_alpha against the dense Kronecker assembly")
{
    SUBCASE("d = 1, N <= 32")
    {
        for (std::size_t n : {1, 2, 7, 32}) {
            const ProblemSpec s = small_spec(1, n, {1.3}, {2.0});
            Discretization d(s);
            const std::vector<double> x = test::random_vector(n, n);
            std::vector<double> y(n);
            d.apply_S_alpha(x, y);
            CHECK(test::rel_diff(y, oracle::S_alpha(s) * test::as_eigen(x)) < 1e-12);
        }
    }
    SUBCASE("d = 2, zero in zero out")
    {
        Discretization d(small_spec(2, 5, {1.2, 1.8}, {1, 1}));
        std::vector<double> x(25, 0.0), y(25, 1.0);
        d.apply_S_alpha(x, y);
        CHECK(test::norm(y) == 0.0);
    }
    SUBCASE("d = 3, N = 4")
    {
        const ProblemSpec s = small_spec(3, 4, {1.2, 1.5, 1.9}, {1.0, 0.5, 2.0});
        Discretization d(s);
        const std::vector<double> x = test::random_vector(64, 3);
        std::vector<double> y(64);
        d.apply_S_alpha(x, y);
        CHECK(test::rel_diff(y, oracle::S_alpha(s) * test::as_eigen(x)) < 1e-12);
    }
}

TEST_CASE("S_alpha axis terms act fiber by fiber")
{
    // permuting the indices of axis 1 commutes with a term acting only on axis 0
    const ProblemSpec s = small_spec(2, 6, {1.4, 1.7}, {1.0, 0.0001});
    Discretization d(s);
    const std::vector<double> x = test::random_vector(36, 9);
    std::vector<double> xp(36), y(36), yp(36);
    const std::size_t perm[] = {3, 0, 5, 1, 4, 2};
    for (std::size_t j = 0; j < 6; ++j) {
        for (std::size_t i = 0; i < 6; ++i) xp[i + 6 * perm[j]] = x[i + 6 * j];
    }
    const auto& ax = d.axes()[0];
    auto axis0 = [&](std::span<const double> in, std::span<double> out) {
        std::vector<double> tmp(6), tmp2(6);
        for (std::size_t j = 0; j < 6; ++j) {
            std::copy_n(in.begin() + 6 * j, 6, tmp.begin());
            ax.toeplitz.apply(tmp, tmp2);
            std::copy_n(tmp2.begin(), 6, out.begin() + 6 * j);
        }
    };
    axis0(x, y);
    axis0(xp, yp);
    for (std::size_t j = 0; j < 6; ++j) {
        for (std::size_t i = 0; i < 6; ++i) CHECK(yp[i + 6 * perm[j]] == doctest::Approx(y[i + 6 * j]).epsilon(1e-14));
    }
}

TEST_CASE("H and its inverse")
{
    const ProblemSpec s = small_spec(2, 7, {1.3, 1.9}, {1, 1});
    Discretization d(s);
    const std::vector<double> y = test::random_vector(49, 4);
    std::vector<double> hy(49), back(49);
    d.apply_H(y, hy);
    CHECK(test::rel_diff(hy, oracle::H_full(s) * test::as_eigen(y)) < 1e-14);
    d.apply_H_inverse(hy, back);
    CHECK(test::rel_diff(back, y) < 1e-13);

    const ProblemSpec s1 = small_spec(1, 32, {1.7}, {1});
    Discretization d1(s1);
    const std::vector<double> x = test::random_vector(32, 5);
    std::vector<double> z(32);
    d1.apply_H_inverse(x, z);
    CHECK(test::rel_diff(z, oracle::compact_H(1.7, 32).partialPivLu().solve(test::as_eigen(x))) < 1e-11);

    // Kronecker factorisation on a constant vector
    const ProblemSpec sq = small_spec(2, 5, {1.5, 1.5}, {1, 1});
    Discretization d2(sq);
    std::vector<double> ones(25, 1.0), out(25);
    d2.apply_H_inverse(ones, out);
    const Eigen::VectorXd one_d = oracle::compact_H(1.5, 5).partialPivLu().solve(Eigen::VectorXd::Ones(5));
    for (std::size_t j = 0; j < 5; ++j) {
        for (std::size_t i = 0; i < 5; ++i) CHECK(out[i + 5 * j] == doctest::Approx(one_d(Eigen::Index(i)) * one_d(Eigen::Index(j))).epsilon(1e-13));
    }
    CHECK_THROWS_AS(d2.apply_H_inverse(std::vector<double>(24), out), DimensionError);
}

TEST_CASE("A_tilde against the dense oracle for d = 1, 2, 3")
{
    const std::vector<std::vector<double>> alphas{{1.35}, {1.5, 1.7}, {1.2, 1.6, 1.95}};
    const std::vector<std::vector<double>> kappas{{3.0}, {1.0, 2.0}, {1.0, 0.7, 1.3}};
    for (int dim = 1; dim <= 3; ++dim) {
        for (std::size_t n : {1, 3, 8}) {
            CAPTURE(dim);
            CAPTURE(n);
            ProblemSpec s = small_spec(dim, n, alphas[std::size_t(dim - 1)], kappas[std::size_t(dim - 1)]);
            s.time_steps = 7;
            Discretization d(s);
            const std::size_t size = d.size();
            const std::vector<double> x = test::random_vector(size, 17);
            std::vector<double> y(size);
            for (std::size_t m : {std::size_t{0}, std::size_t{4}, std::size_t{6}}) {
                const Eigen::VectorXd want = oracle::A_tilde(s, m) * test::as_eigen(x);
                d.apply_A_tilde(m, x, y);
                CHECK(test::rel_diff(y, want) < 1e-11);
                d.apply_A_tilde_unsimplified(m, x, y);
                CHECK(test::rel_diff(y, want) < 1e-11);
            }
            d.apply_A_tilde(0, std::vector<double>(size, 0.0), y);
            CHECK(test::norm(y) == 0.0);
        }
    }
}

TEST_CASE("A_tilde on an eigenvector of H^{-1}S with e = 1")
{
    ProblemSpec s = small_spec(1, 9, {1.6}, {1.0});
    s.coefficient = [](std::span<const double>, double) { return 1.0; };
    Discretization d(s);
    const Eigen::MatrixXd hs = oracle::H_full(s).partialPivLu().solve(oracle::S_alpha(s));
    Eigen::EigenSolver<Eigen::MatrixXd> es(hs);
    for (Eigen::Index k = 0; k < 9; ++k) {
        const Eigen::VectorXd v = es.eigenvectors().col(k).real().normalized();
        const double lambda = es.eigenvalues()(k).real();
        const std::vector<double> vs(v.data(), v.data() + 9);
        std::vector<double> y(9);
        d.apply_A_tilde(2, vs, y);
        CHECK(test::rel_diff(y, (lambda + 1.0) * v) < 1e-12);
    }
}

TEST_CASE("build_rhs against the boundary-source oracle")
{
    for (int dim = 1; dim <= 3; ++dim) {
        CAPTURE(dim);
        ProblemSpec s = small_spec(dim, dim == 3 ? 4 : 6, std::vector<double>(std::size_t(dim), 1.45),
                                   std::vector<double>(std::size_t(dim), 1.2));
        if (dim > 1) s.alphas[1] = 1.85;
        Discretization d(s);
        const std::vector<double> u = test::random_vector(d.size(), 99);
        d.set_solution(u);
        CHECK(test::rel_diff(d.build_rhs(3), oracle::rhs(s, 3, u)) < 1e-12);
    }
}

TEST_CASE("build_rhs with random polynomial sources")
{
    for (int dim = 2; dim <= 3; ++dim) {
        for (std::uint64_t seed : {1u, 2u, 3u}) {
            CAPTURE(dim);
            CAPTURE(seed);
            const std::vector<double> c = test::random_vector(10, seed);
            ProblemSpec s = small_spec(dim, 4, std::vector<double>(std::size_t(dim), 1.3),
                                       std::vector<double>(std::size_t(dim), 1.0));
            s.alphas.back() = 1.9;
            s.source = [c](std::span<const double> x, double t) {
                double v = c[0] + c[1] * t;
                for (std::size_t i = 0; i < x.size(); ++i) {
                    v += c[2 + i] * x[i] + c[5 + i] * x[i] * x[i] * x[i];
                }
                return v + c[8] * x[0] * x[1] + c[9] * x[0] * x[1] * x.back();
            };
            Discretization d(s);
            const std::vector<double> u = test::random_vector(d.size(), seed + 10);
            d.set_solution(u);
            CHECK(test::rel_diff(d.build_rhs(5), oracle::rhs(s, 5, u)) < 1e-12);
        }
    }
}

TEST_CASE("source vector of a constant source in 1D is all ones")
{
    ProblemSpec s = small_spec(1, 9, {1.7}, {1.0});
    s.source = [](std::span<const double>, double) { return 1.0; };
    Discretization d(s);
    for (double v : d.source_vector(0)) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("zero source gives the homogeneous right-hand side")
{
    ProblemSpec s = small_spec(2, 5, {1.5, 1.6}, {1.0, 1.0});
    s.source = [](std::span<const double>, double) { return 0.0; };
    Discretization d(s);
    const std::vector<double> u = test::random_vector(25, 5);
    d.set_solution(u);
    const Eigen::MatrixXd h = oracle::H_full(s);
    const Eigen::VectorXd e = oracle::E_half(s, 2);
    const Eigen::VectorXd want =
        h.partialPivLu().solve(h * (e.asDiagonal() * test::as_eigen(u)) - oracle::S_alpha(s) * test::as_eigen(u));
    CHECK(test::rel_diff(d.build_rhs(2), want) < 1e-12);
}

TEST_CASE("missing source is a configuration error")
{
    ProblemSpec s = small_spec(1, 5, {1.5}, {1.0});
    s.source = nullptr;
    Discretization d(s);
    CHECK_THROWS_AS(d.build_rhs(0), ConfigurationError);
    CHECK_THROWS_AS(d.set_solution(std::vector<double>(4)), DimensionError);
}

TEST_CASE("E diagonal is evaluated at half time levels")
{
    ProblemSpec s = small_spec(1, 3, {1.5}, {1.0});
    s.coefficient = [](std::span<const double> x, double t) { return 1.0 + x[0] + t; };
    Discretization d(s);
    const auto e = d.e_half(3);
    CHECK((*e)[1] == doctest::Approx(1.0 + 0.5 + 0.35));
}

TEST_CASE("exact solution leaves a fourth-order spatial residual")
{
    // Semi-discrete residual at a half level: H(e u_t) + (2/tau) S u - F.
    // u_t comes from a fourth-order central difference so differencing
    // u at adjacent time levels does not swamp the spatial error in roundoff.
    // The zero extension of u is not smooth at the walls, so the node next to
    // the boundary converges more slowly; fourth order is checked on the middle half.
    const std::size_t big_m = 4096;
    const std::size_t m = big_m / 2;
    double prev_inner = 0.0, prev_all = 0.0;
    for (std::size_t np1 : {16, 32, 64, 128}) {
        const ProblemSpec s = make_preset(Preset::ex1, np1 - 1, big_m, {1.5});
        Discretization d(s);
        const std::size_t n = d.size();
        const double tau = s.time_step();
        const double t = tau * (double(m) + 0.5);
        const double dt = 1e-3;
        const auto at = [&](double shift) { return d.sample(s.exact, t + shift); };
        const std::vector<double> u = at(0.0), up1 = at(dt), um1 = at(-dt), up2 = at(2 * dt), um2 = at(-2 * dt);
        const auto e = d.e_half(m);
        std::vector<double> eut(n), h(n), su(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double ut = (8.0 * (up1[i] - um1[i]) - (up2[i] - um2[i])) / (12.0 * dt);
            eut[i] = (*e)[i] * ut;
        }
        d.apply_H(eut, h);
        d.apply_S_alpha(u, su);
        const std::vector<double> f = d.source_vector(m);
        double inner = 0.0, all = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double r = std::abs(h[i] + 2.0 * su[i] / tau - f[i]);
            all = std::max(all, r);
            if (i > n / 4 && i < 3 * n / 4) inner = std::max(inner, r);
        }
        CAPTURE(np1);
        if (prev_inner > 0.0) {
            CHECK(std::log2(prev_inner / inner) >= 3.5);
            CHECK(std::log2(prev_all / all) >= 1.5);
        }
        prev_inner = inner;
        prev_all = all;
    }
}
