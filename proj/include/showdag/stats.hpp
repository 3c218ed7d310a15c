#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "showdag/errors.hpp"

namespace showdag {

struct TestResult {
    enum class Kind { Independent, Welch, Paired };
    Kind kind = Kind::Independent;
    double t = 0.0;
    double df = 0.0;
    double p = 1.0;  // two-sided
    bool degenerate = false;
};

namespace detail {

inline std::pair<double, double> mean_and_variance(const std::vector<double>& x) {
    double mean = 0.0;
    for (double v : x) mean += v;
    mean /= static_cast<double>(x.size());
    double ss = 0.0;
    for (double v : x) ss += (v - mean) * (v - mean);
    return {mean, ss / static_cast<double>(x.size() - 1)};
}

inline double two_sided_p(double t, double df) {
    boost::math::students_t dist(df);
    return 2.0 * boost::math::cdf(dist, -std::abs(t));
}

}  // namespace detail

// Two-sample t test with pooled variance; two-sided p.
inline TestResult t_independent(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() < 2 || y.size() < 2) throw ConfigError("t_independent needs at least 2 per sample");
    auto [mx, vx] = detail::mean_and_variance(x);
    auto [my, vy] = detail::mean_and_variance(y);
    double n1 = static_cast<double>(x.size()), n2 = static_cast<double>(y.size());
    double pooled = ((n1 - 1.0) * vx + (n2 - 1.0) * vy) / (n1 + n2 - 2.0);
    if (pooled <= 0.0) throw DegenerateVariance("all values identical in both samples");
    TestResult r;
    r.kind = TestResult::Kind::Independent;
    r.df = n1 + n2 - 2.0;
    r.t = (mx - my) / std::sqrt(pooled * (1.0 / n1 + 1.0 / n2));
    r.p = detail::two_sided_p(r.t, r.df);
    return r;
}

// Welch variant (unequal variances), exposed for comparison runs.
inline TestResult t_welch(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() < 2 || y.size() < 2) throw ConfigError("t_welch needs at least 2 per sample");
    auto [mx, vx] = detail::mean_and_variance(x);
    auto [my, vy] = detail::mean_and_variance(y);
    double n1 = static_cast<double>(x.size()), n2 = static_cast<double>(y.size());
    double a = vx / n1, b = vy / n2;
    if (a + b <= 0.0) throw DegenerateVariance("all values identical in both samples");
    TestResult r;
    r.kind = TestResult::Kind::Welch;
    r.t = (mx - my) / std::sqrt(a + b);
    r.df = (a + b) * (a + b) / (a * a / (n1 - 1.0) + b * b / (n2 - 1.0));
    r.p = detail::two_sided_p(r.t, r.df);
    return r;
}

// Paired t test on matched vectors. By documented convention, identical
// pairs (all differences zero) yield t = 0, p = 1 flagged degenerate; a
// nonzero constant difference has no defined statistic and throws.
inline TestResult t_paired(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw ConfigError("t_paired needs matched vectors");
    if (x.size() < 2) throw ConfigError("t_paired needs at least 2 pairs");
    std::vector<double> d(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) d[i] = x[i] - y[i];
    auto [md, vd] = detail::mean_and_variance(d);
    TestResult r;
    r.kind = TestResult::Kind::Paired;
    r.df = static_cast<double>(x.size() - 1);
    if (vd <= 0.0) {
        if (md == 0.0) {
            r.t = 0.0;
            r.p = 1.0;
            r.degenerate = true;
            return r;
        }
        throw DegenerateVariance("constant nonzero paired difference");
    }
    r.t = md / std::sqrt(vd / static_cast<double>(x.size()));
    r.p = detail::two_sided_p(r.t, r.df);
    return r;
}

}  // namespace showdag
