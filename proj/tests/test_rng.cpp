#include <doctest.h>

#include <rbmlab/rng.hpp>

#include <complex>
#include <cstdlib>

using rbmlab::BatchAccumulator;
using rbmlab::MCEstimate;

TEST_SUITE("rng") {

TEST_CASE("streams are deterministic and separated by id") {
    auto r1 = rbmlab::make_stream(42, 0);
    auto r2 = rbmlab::make_stream(42, 0);
    auto r3 = rbmlab::make_stream(42, 1);
    bool differs = false;
    for (int i = 0; i < 16; ++i) {
        auto a = r1(), b = r2(), c = r3();
        CHECK(a == b);
        differs = differs || (a != c);
    }
    CHECK(differs);
}

TEST_CASE("batch accumulator reproduces mean and a sane SE") {
    // alternating +1/-1 with a slight offset: mean exact, SE from batch means
    const long n = 10000;
    BatchAccumulator acc(n);
    for (long i = 0; i < n; ++i)
        acc.add(i, std::complex<double>((i % 2 == 0 ? 1.0 : -1.0) + 0.5, 0.25));
    MCEstimate e = acc.estimate();
    CHECK(e.n_samples == n);
    CHECK(e.mean.real() == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(e.mean.imag() == doctest::Approx(0.25).epsilon(1e-12));
    // every batch holds the same alternating pattern, so batch means agree
    CHECK(e.se_re <= 1e-12);
    CHECK(e.se_im <= 1e-12);
}

TEST_CASE("merged accumulators equal a single pass") {
    const long n = 1000;
    auto value = [](long i) {
        return std::complex<double>(std::sin(0.1 * double(i)), std::cos(0.3 * double(i)));
    };
    BatchAccumulator whole(n);
    for (long i = 0; i < n; ++i) whole.add(i, value(i));
    BatchAccumulator lo(n), hi(n);
    for (long i = 0; i < n / 2; ++i) lo.add(i, value(i));
    for (long i = n / 2; i < n; ++i) hi.add(i, value(i));
    lo.merge(hi);
    MCEstimate a = whole.estimate(), b = lo.estimate();
    CHECK(a.mean == b.mean);  // bitwise: same per-batch sums, same order
    CHECK(a.se_re == b.se_re);
    CHECK(a.se_im == b.se_im);
}

TEST_CASE("empty accumulator yields a zero estimate") {
    BatchAccumulator acc(100);
    MCEstimate e = acc.estimate();
    CHECK(e.n_samples == 0);
    CHECK(e.mean == std::complex<double>(0.0, 0.0));
    CHECK(e.se_re == 0.0);
}

TEST_CASE("parallel_mc is deterministic at fixed worker count") {
    auto run = [](int workers) {
        BatchAccumulator acc = rbmlab::parallel_mc(
            5000, workers, 97, BatchAccumulator(5000),
            [](std::mt19937_64& rng, long idx, BatchAccumulator& a, int) {
                std::normal_distribution<double> gauss(0.0, 1.0);
                double x = gauss(rng);
                a.add(idx, std::complex<double>(x * x, x));
            });
        return acc.estimate();
    };
    MCEstimate a = run(2), b = run(2), c = run(1);
    CHECK(a.mean == b.mean);  // bitwise equality across reruns
    CHECK(a.se_re == b.se_re);
    // single-worker answer is statistically compatible (E[x^2] = 1)
    CHECK(std::abs(c.mean.real() - 1.0) < 5.0 * std::max(c.se_re, 1e-3));
    CHECK(std::abs(a.mean.real() - 1.0) < 5.0 * std::max(a.se_re, 1e-3));
}

TEST_CASE("worker resolution: flag beats environment beats default") {
    ::unsetenv("RBM_LAB_WORKERS");
    CHECK(rbmlab::resolve_workers(0) == 1);
    CHECK(rbmlab::resolve_workers(3) == 3);
    ::setenv("RBM_LAB_WORKERS", "5", 1);
    CHECK(rbmlab::resolve_workers(0) == 5);
    CHECK(rbmlab::resolve_workers(2) == 2);
    // malformed env fails loudly instead of silently serializing
    ::setenv("RBM_LAB_WORKERS", "junk", 1);
    CHECK_THROWS_AS(rbmlab::resolve_workers(0), std::invalid_argument);
    CHECK(rbmlab::resolve_workers(2) == 2);  // explicit flag still wins
    ::setenv("RBM_LAB_WORKERS", "-4", 1);
    CHECK_THROWS_AS(rbmlab::resolve_workers(0), std::invalid_argument);
    ::unsetenv("RBM_LAB_WORKERS");
}

}
