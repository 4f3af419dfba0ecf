#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <vector>

#include "mpts/rng.hpp"
#include "mpts/sampling.hpp"
#include "oracles.hpp"

namespace mpts {
namespace {

struct Moments {
    double mean;
    double variance;
};

Moments beta_moments(double a, double b, int draws, std::uint64_t seed) {
    Rng rng(seed);
    double sum = 0, sum_sq = 0;
    for (int i = 0; i < draws; ++i) {
        const double x = sample_beta(a, b, rng);
        sum += x;
        sum_sq += x * x;
    }
    const double mean = sum / draws;
    return {mean, (sum_sq - draws * mean * mean) / (draws - 1)};
}

TEST(Rng, SameSeedSameStream) {
    Rng a(123), b(123), c(124);
    bool differs = false;
    for (int i = 0; i < 1000; ++i) {
        const auto x = a();
        EXPECT_EQ(x, b());
        differs |= x != c();
    }
    EXPECT_TRUE(differs);
}

TEST(Rng, RunStreamsAreDistinct) {
    std::set<std::uint64_t> first_words;
    for (std::uint64_t run = 0; run < 10000; ++run) {
        Rng r = stream_for_run(42, run);
        first_words.insert(r());
    }
    EXPECT_EQ(first_words.size(), 10000u);

    Rng a = stream_for_run(1, 5), b = stream_for_run(2, 5);
    EXPECT_NE(a(), b());
}

TEST(Rng, UniformRanges) {
    Rng rng(7);
    double sum = 0;
    for (int i = 0; i < 100000; ++i) {
        const double u = rng.uniform();
        const double v = rng.uniform_open();
        ASSERT_GE(u, 0.0);
        ASSERT_LT(u, 1.0);
        ASSERT_GT(v, 0.0);
        ASSERT_LT(v, 1.0);
        sum += u;
    }
    EXPECT_NEAR(sum / 100000, 0.5, 0.003);
}

TEST(Rng, BelowIsUniform) {
    Rng rng(99);
    std::vector<double> counts(6, 0.0);
    for (int i = 0; i < 60000; ++i) counts[rng.below(6)] += 1;
    EXPECT_GT(oracle::chi_square_gof_p(counts, std::vector<double>(6, 1.0 / 6)), 0.01);
    for (int i = 0; i < 100; ++i) EXPECT_EQ(rng.below(1), 0u);
}

TEST(Rng, NormalMoments) {
    Rng rng(11);
    const int n = 200000;
    double sum = 0, sum_sq = 0;
    for (int i = 0; i < n; ++i) {
        const double z = rng.normal();
        sum += z;
        sum_sq += z * z;
    }
    EXPECT_NEAR(sum / n, 0.0, 0.01);
    EXPECT_NEAR(sum_sq / n, 1.0, 0.015);
}

TEST(SampleBeta, IntegerParameterMoments) {
    // Beta(3, 7): mean 0.3, variance 21 / (100 * 11).
    const auto m = beta_moments(3, 7, 1000000, 2024);
    EXPECT_NEAR(m.mean, 0.3, 0.002);
    EXPECT_NEAR(m.variance / 0.019090909090909091, 1.0, 0.05);
}

TEST(SampleBeta, NonIntegerParameterMoments) {
    const auto m = beta_moments(2.0, 1.3, 1000000, 2025);
    EXPECT_NEAR(m.mean, 2.0 / 3.3, 0.003);
    // var = ab / ((a+b)^2 (a+b+1))
    EXPECT_NEAR(m.variance / (2.0 * 1.3 / (3.3 * 3.3 * 4.3)), 1.0, 0.05);
}

TEST(SampleBeta, UniformPriorMatchesCdf) {
    // Beta(1, 1) and Beta(2, 5): compare decile counts with the exact CDF.
    for (auto [a, b] : {std::pair{1, 1}, std::pair{2, 5}}) {
        Rng rng(static_cast<std::uint64_t>(a * 100 + b));
        std::vector<double> counts(10, 0.0), probs(10);
        for (int i = 0; i < 10; ++i) {
            probs[i] = oracle::beta_cdf_ibeta(a, b, (i + 1) / 10.0) - oracle::beta_cdf_ibeta(a, b, i / 10.0);
        }
        for (int i = 0; i < 200000; ++i) {
            const double x = sample_beta(a, b, rng);
            counts[std::min(9, static_cast<int>(x * 10))] += 1;
        }
        EXPECT_GT(oracle::chi_square_gof_p(counts, probs), 0.01) << a << "," << b;
    }
}

TEST(SampleGamma, SmallShapeMean) {
    Rng rng(5);
    double sum = 0;
    for (int i = 0; i < 200000; ++i) sum += sample_gamma(0.4, rng);
    EXPECT_NEAR(sum / 200000, 0.4, 0.01);
    EXPECT_THROW(sample_gamma(0.0, rng), std::invalid_argument);
}

}  // namespace
}  // namespace mpts
