#include <doctest.h>

#include <algorithm>
#include <ctime>
#include <cmath>
#include <complex>
#include <numbers>

#include "rsfde/errors.hpp"
#include "rsfde/oracles.hpp"
#include "rsfde/structured.hpp"
#include "rsfde/transforms.hpp"
#include "test_support.hpp"

using namespace rsfde;

TEST_CASE("dst1 of length one is the identity")
{
    SineTransformPlan plan(1);
    const std::vector<double> x{5.0};
    CHECK(dst1(plan, x)[0] == doctest::Approx(5.0).epsilon(1e-15));
}

TEST_CASE("dst1 of e_1 is the first column of S")
{
    SineTransformPlan plan(3);
    const std::vector<double> y = dst1(plan, std::vector<double>{1.0, 0.0, 0.0});
    CHECK(y[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(y[1] == doctest::Approx(std::sqrt(2.0) / 2.0).epsilon(1e-14));
    CHECK(y[2] == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("dst1 matches the dense sine matrix and is an involution")
{
    for (std::size_t n : {1, 2, 3, 7, 16, 31, 64}) {
        CAPTURE(n);
        SineTransformPlan plan(n);
        const std::vector<double> x = test::random_vector(n, n);
        const std::vector<double> y = dst1(plan, x);
        CHECK(test::rel_diff(y, oracle::sine_matrix(n) * test::as_eigen(x)) < 1e-13);
        CHECK(test::rel_diff(dst1(plan, y), x) < 1e-13);
    }
}

TEST_CASE("dst1 is an isometry")
{
    for (std::size_t n = 1; n <= 1024; n = n * 2 + 1) {
        SineTransformPlan plan(n);
        const std::vector<double> x = test::random_vector(n, 3 * n);
        CHECK(std::abs(test::norm(dst1(plan, x)) - test::norm(x)) <= 1e-13 * test::norm(x));
    }
}

TEST_CASE("dst1 rejects a length mismatch")
{
    SineTransformPlan plan(4);
    CHECK_THROWS_AS(dst1(plan, std::vector<double>(5)), DimensionError);
    CHECK_THROWS_AS(SineTransformPlan(0), DimensionError);
}

TEST_CASE("dst1_all_axes equals the Kronecker product of sine matrices")
{
    const GridShape g{5, 3};
    SineTransformPlan plan(5);
    const std::vector<double> x = test::random_vector(g.size(), 11);
    std::vector<double> y(g.size());
    dst1_all_axes(plan, g, x, y);
    const Eigen::MatrixXd s = oracle::sine_matrix(5);
    CHECK(test::rel_diff(y, oracle::axis_kron({s, s, s}) * test::as_eigen(x)) < 1e-13);
}

TEST_CASE("identity Toeplitz returns its input")
{
    std::vector<double> col(9, 0.0);
    col[0] = 1.0;
    CirculantEmbedding emb(col);
    const std::vector<double> x = test::random_vector(9, 1);
    CHECK(test::rel_diff(toeplitz_matvec(emb, x), x) < 1e-14);
}

TEST_CASE("second difference Toeplitz times ones")
{
    std::vector<double> col(6, 0.0);
    col[0] = 2.0;
    col[1] = -1.0;
    CirculantEmbedding emb(col);
    const std::vector<double> y = toeplitz_matvec(emb, std::vector<double>(6, 1.0));
    const std::vector<double> want{1, 0, 0, 0, 0, 1};
    for (std::size_t i = 0; i < 6; ++i) CHECK(y[i] == doctest::Approx(want[i]).epsilon(1e-14).scale(1.0));
}

TEST_CASE("Toeplitz matvec against the dense product")
{
    SUBCASE("FCD column, n = 16")
    {
        const FcdStencil s = fcd_coefficients(1.5, 16);
        const std::vector<double> x = test::random_vector(16, 5);
        CHECK(test::rel_diff(toeplitz_matvec(CirculantEmbedding(s.coeffs), x),
                             oracle::toeplitz(oracle::fcd_column(1.5, 16)) * test::as_eigen(x)) < 1e-12);
    }
    SUBCASE("random symmetric columns, n <= 64")
    {
        for (std::size_t n = 1; n <= 64; ++n) {
            const std::vector<double> col = test::random_vector(n, 100 + n);
            const std::vector<double> x = test::random_vector(n, 200 + n);
            CHECK(test::rel_diff(toeplitz_matvec(CirculantEmbedding(col), x), oracle::toeplitz(col) * test::as_eigen(x)) <
                  1e-12);
        }
    }
}

TEST_CASE("embedding symbol is the DFT of the even padded column")
{
    const std::vector<double> col{3.0, -1.0, 0.5, 0.25, -0.125};
    CirculantEmbedding emb(col);
    const std::size_t L = emb.order();
    CHECK(L >= 2 * col.size());
    std::vector<double> c(L, 0.0);
    c[0] = col[0];
    for (std::size_t k = 1; k < col.size(); ++k) c[k] = c[L - k] = col[k];
    for (std::size_t f = 0; f <= L / 2; ++f) {
        std::complex<double> s = 0.0;
        for (std::size_t j = 0; j < L; ++j) s += c[j] * std::polar(1.0, -2.0 * std::numbers::pi * double(f * j) / double(L));
        CHECK(std::abs(s.imag()) < 1e-12);
        CHECK(emb.symbol()[f] * double(L) == doctest::Approx(s.real()).epsilon(1e-12));
    }
}

TEST_CASE("fft_friendly_length returns 7-smooth lengths")
{
    CHECK(fft_friendly_length(16) == 16);
    CHECK(fft_friendly_length(2 * 8191) == 16384);
    CHECK(fft_friendly_length(22) == 24);
    CHECK(fft_friendly_length(1) == 1);
}

TEST_CASE("Toeplitz matvec rejects a length mismatch")
{
    CirculantEmbedding emb(std::vector<double>{1.0, 2.0});
    CHECK_THROWS_AS(toeplitz_matvec(emb, std::vector<double>(3)), DimensionError);
    CHECK_THROWS_AS(CirculantEmbedding(std::vector<double>{}), DimensionError);
}

TEST_CASE("cosine sums match the explicit formula")
{
    const std::vector<double> t = test::random_vector(13, 9);
    const std::vector<double> c = cosine_sums(t);
    const Eigen::VectorXd want = oracle::tau_eigenvalues(t);
    CHECK(test::rel_diff(c, want) < 1e-13);
}

namespace {

double cpu_seconds()
{
    timespec t{};
    clock_gettime(CLOCK_PROCESS_CPUTIME_ID, &t);
    return double(t.tv_sec) + 1e-9 * double(t.tv_nsec);
}

template <class F>
double seconds_per_call(F&& f)
{
    std::size_t reps = 1;
    for (;;) {
        const double t0 = cpu_seconds();
        for (std::size_t r = 0; r < reps; ++r) f();
        if (cpu_seconds() - t0 > 0.02) break;
        reps *= 2;
    }
    double best = 1e300;
    for (int trial = 0; trial < 5; ++trial) {
        const double t0 = cpu_seconds();
        for (std::size_t r = 0; r < reps; ++r) f();
        best = std::min(best, (cpu_seconds() - t0) / double(reps));
    }
    return best;
}

} // namespace

// Single doublings are noisy once the data leaves cache, so the gate is the
// geometric-mean ratio over 2^10..2^20; one doubling at 4x would mean a
// quadratic step.
TEST_CASE("transform cost grows like n log n under doubling")
{
    double first_dst = 0.0, first_toep = 0.0, last_dst = 0.0, last_toep = 0.0;
    double prev_dst = 0.0, prev_toep = 0.0;
    const int k0 = 10, k1 = 20;
    for (int k = k0; k <= k1; ++k) {
        const std::size_t n = (std::size_t{1} << k) - 1;
        CAPTURE(n);
        std::vector<double> x = test::random_vector(n, 1), y(n), col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = 1.0 / double(1 + i * i);
        SineTransformPlan plan(n);
        CirculantEmbedding emb(col);
        ToeplitzWorkspace ws;
        const double td = seconds_per_call([&] { plan.apply(x, y); });
        const double tt = seconds_per_call([&] { emb.apply(x, y, ws); });
        if (k == k0) {
            first_dst = td;
            first_toep = tt;
        } else {
            MESSAGE("n=" << n << " dst x" << td / prev_dst << " toeplitz x" << tt / prev_toep);
            CHECK(td / prev_dst < 4.0);
            CHECK(tt / prev_toep < 4.0);
        }
        prev_dst = last_dst = td;
        prev_toep = last_toep = tt;
    }
    const double steps = double(k1 - k0);
    CHECK(std::pow(last_dst / first_dst, 1.0 / steps) <= 2.6);
    CHECK(std::pow(last_toep / first_toep, 1.0 / steps) <= 2.6);
}
