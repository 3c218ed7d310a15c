#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "showdag/rng.hpp"
#include "showdag/stats.hpp"

using namespace showdag;

namespace {

// textbook reference in extended precision, computed independently of the
// implementation's code path
struct Reference {
    long double t;
    long double df;
};

Reference reference_independent(const std::vector<double>& x, const std::vector<double>& y) {
    long double n1 = x.size(), n2 = y.size();
    long double mx = 0, my = 0;
    for (double v : x) mx += v;
    for (double v : y) my += v;
    mx /= n1;
    my /= n2;
    long double sx = 0, sy = 0;
    for (double v : x) sx += (v - mx) * (v - mx);
    for (double v : y) sy += (v - my) * (v - my);
    long double pooled = (sx + sy) / (n1 + n2 - 2);
    return {(mx - my) / std::sqrt(pooled * (1 / n1 + 1 / n2)), n1 + n2 - 2};
}

Reference reference_paired(const std::vector<double>& x, const std::vector<double>& y) {
    long double n = x.size();
    long double mean = 0;
    for (std::size_t i = 0; i < x.size(); ++i) mean += (long double)x[i] - y[i];
    mean /= n;
    long double ss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        long double d = (long double)x[i] - y[i] - mean;
        ss += d * d;
    }
    long double sd = std::sqrt(ss / (n - 1));
    return {mean / (sd / std::sqrt(n)), n - 1};
}

}  // namespace

TEST(Stats, KnownIndependentCase) {
    TestResult r = t_independent({1, 2, 3}, {4, 5, 6});
    EXPECT_NEAR(r.t, -3.674, 0.001);
    EXPECT_DOUBLE_EQ(r.df, 4.0);
    EXPECT_NEAR(r.p, 0.0213, 0.0005);
}

TEST(Stats, MatchesReferenceToTightTolerance) {
    Rng rng(8080);
    for (int trial = 0; trial < 100; ++trial) {
        std::size_t n1 = 3 + rng.next_below(40);
        std::size_t n2 = 3 + rng.next_below(40);
        std::vector<double> x(n1), y(n2);
        for (double& v : x) v = 10.0 * rng.next_u01() - 3.0;
        for (double& v : y) v = 8.0 * rng.next_u01() + 1.0;
        TestResult r = t_independent(x, y);
        Reference ref = reference_independent(x, y);
        EXPECT_NEAR(r.t, static_cast<double>(ref.t), 1e-9);
        EXPECT_DOUBLE_EQ(r.df, static_cast<double>(ref.df));

        std::vector<double> y2(n1);
        for (double& v : y2) v = 5.0 * rng.next_u01();
        TestResult rp = t_paired(x, y2);
        Reference refp = reference_paired(x, y2);
        EXPECT_NEAR(rp.t, static_cast<double>(refp.t), 1e-9);
    }
}

TEST(Stats, PairedIdenticalVectorsAreDegenerate) {
    std::vector<double> x = {1, 2, 3, 4};
    TestResult r = t_paired(x, x);
    EXPECT_TRUE(r.degenerate);
    EXPECT_DOUBLE_EQ(r.t, 0.0);
    EXPECT_DOUBLE_EQ(r.p, 1.0);
}

TEST(Stats, PairedConstantShiftWithJitterIsSignificant) {
    std::vector<double> x, y;
    Rng rng(11);
    for (int i = 0; i < 20; ++i) {
        double base = rng.next_u01();
        x.push_back(base + 0.5 + 0.001 * rng.next_u01());
        y.push_back(base);
    }
    TestResult r = t_paired(x, y);
    EXPECT_GT(r.t, 0.0);
    EXPECT_LT(r.p, 0.001);
}

TEST(Stats, ErrorsOnDegenerateInputs) {
    EXPECT_THROW(t_independent({1}, {2, 3}), ConfigError);
    EXPECT_THROW(t_independent({2, 2, 2}, {2, 2}), DegenerateVariance);
    EXPECT_THROW(t_paired({1, 2}, {1, 2, 3}), ConfigError);
    EXPECT_THROW(t_paired({2, 3, 4}, {1, 2, 3}), DegenerateVariance);
}

TEST(Stats, WelchAgreesWithPooledOnEqualVariances) {
    std::vector<double> x = {1.0, 2.0, 3.0, 4.0, 5.0};
    std::vector<double> y = {2.5, 3.5, 4.5, 5.5, 6.5};
    TestResult pooled = t_independent(x, y);
    TestResult welch = t_welch(x, y);
    EXPECT_NEAR(pooled.t, welch.t, 1e-12);
    EXPECT_NEAR(pooled.df, welch.df, 1e-9);
}
