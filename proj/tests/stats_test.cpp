#include "oracles.hpp"

#include <knockout/crmodel.hpp>
#include <knockout/stats.hpp>
#include <knockout/winprob.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>

using namespace knockout;

namespace {

EmpiricalSample cr_sample(double pr_b, std::size_t n = 16) {
    return EmpiricalSample(exact_uniform_win_probs(generate_cr({n, pr_b})).p, "CR");
}

std::vector<double> lognormal_values(double mu, double sigma, std::size_t m, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::lognormal_distribution<double> dist(mu, sigma);
    std::vector<double> v(m);
    for (auto& x : v) x = dist(rng);
    return v;
}

std::vector<double> power_law_values(double alpha, double xmin, std::size_t m, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> v(m);
    for (auto& x : v) x = xmin * std::pow(1.0 - u(rng), -1.0 / (alpha - 1.0));
    return v;
}

} // namespace

TEST(Ecdf, Examples) {
    const auto pts = ecdf_points(EmpiricalSample({3, 1, 2}));
    ASSERT_EQ(pts.size(), 3u);
    EXPECT_EQ(pts[0].x, 1);
    EXPECT_DOUBLE_EQ(pts[0].y, 1.0 / 3.0);
    EXPECT_DOUBLE_EQ(pts[1].y, 2.0 / 3.0);
    EXPECT_DOUBLE_EQ(pts[2].y, 1.0);

    const auto dup = ecdf_points(EmpiricalSample({1, 1, 2}));
    ASSERT_EQ(dup.size(), 2u);
    EXPECT_DOUBLE_EQ(dup[0].y, 2.0 / 3.0);
}

TEST(Ecdf, SixteenPointLayoutAndCcdfConsistency) {
    const auto s = cr_sample(0.374);
    const auto f = ecdf_points(s);
    const auto c = ccdf_points(s);
    ASSERT_EQ(f.size(), c.size());
    EXPECT_EQ(f.back().y, 1.0);
    for (std::size_t k = 0; k < f.size(); ++k) {
        EXPECT_EQ(f[k].x, c[k].x);
        EXPECT_DOUBLE_EQ(f[k].y + c[k].y, 1.0);
        if (k) {
            EXPECT_GT(f[k].x, f[k - 1].x);
            EXPECT_GE(f[k].y, f[k - 1].y);
            EXPECT_LE(c[k].y, c[k - 1].y);
        }
    }
    EXPECT_EQ(kCcdfConvention, "P(X > x)");
}

TEST(Ecdf, EmptyRejected) {
    EXPECT_THROW(ecdf_points(EmpiricalSample(std::vector<double>{})), InvalidArgument);
    EXPECT_THROW(EmpiricalSample({1.0, 0.0}), InvalidArgument);
}

TEST(Kolmogorov, KnownValues) {
    EXPECT_EQ(kolmogorov_survival(0.0), 1.0);
    // Classical critical values: Q(1.358) ~ 0.05, Q(1.628) ~ 0.01.
    EXPECT_NEAR(kolmogorov_survival(1.358), 0.05, 5e-4);
    EXPECT_NEAR(kolmogorov_survival(1.628), 0.01, 2e-4);
    // Both series agree at the switch point.
    EXPECT_NEAR(kolmogorov_survival(1.18 - 1e-9), kolmogorov_survival(1.18), 1e-9);
}

TEST(KsTwoSample, IdenticalSamples) {
    const auto s = cr_sample(0.3);
    for (auto method : {KsMethod::automatic, KsMethod::asymptotic, KsMethod::exact_permutation}) {
        const auto r = ks_two_sample(s, s, method);
        EXPECT_EQ(r.d, 0.0);
        EXPECT_EQ(r.p_value, 1.0);
    }
}

TEST(KsTwoSample, DisjointSupports) {
    const auto r = ks_two_sample(EmpiricalSample({1, 2, 3}), EmpiricalSample({4, 5, 6, 7}));
    EXPECT_EQ(r.d, 1.0);
}

TEST(KsTwoSample, AutomaticMethodSelection) {
    EXPECT_EQ(ks_two_sample(cr_sample(0.3), cr_sample(0.2)).method, KsMethod::exact_permutation);
    EXPECT_EQ(ks_two_sample(EmpiricalSample(std::vector<double>(20, 1.0)), EmpiricalSample(std::vector<double>(13, 2.0))).method,
              KsMethod::asymptotic);
}

TEST(KsTwoSample, StatisticMatchesDefinition) {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> pick(1, 6); // ties on purpose
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> a(1 + trial % 7), b(1 + trial % 5);
        for (auto& x : a) x = pick(rng);
        for (auto& x : b) x = pick(rng);
        EXPECT_NEAR(ks_two_sample(EmpiricalSample(a), EmpiricalSample(b)).d, oracle::ks_statistic(a, b), 1e-12);
    }
}

TEST(KsTwoSample, PermutationPValueMatchesFullEnumeration) {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.1, 1.0);
    std::uniform_int_distribution<int> tie(1, 3);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> a(3), b(3);
        for (auto& x : a) x = trial % 2 ? u(rng) : tie(rng);
        for (auto& x : b) x = trial % 2 ? u(rng) : tie(rng);
        const auto r = ks_two_sample(EmpiricalSample(a), EmpiricalSample(b), KsMethod::exact_permutation);
        EXPECT_NEAR(r.p_value, oracle::ks_permutation_p(a, b), 1e-12);
    }
    // Unequal sizes, with ties.
    const std::vector<double> a{1, 2, 2, 5, 7}, b{2, 3, 4, 8, 9, 9, 10};
    EXPECT_NEAR(ks_two_sample(EmpiricalSample(a), EmpiricalSample(b), KsMethod::exact_permutation).p_value,
                oracle::ks_permutation_p(a, b), 1e-12);
}

TEST(KsTwoSample, SymmetricAndInvariantUnderMonotoneTransform) {
    std::mt19937_64 rng(8);
    std::lognormal_distribution<double> ln(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> a(16), b(16);
        for (auto& x : a) x = ln(rng);
        for (auto& x : b) x = ln(rng) * 1.3;
        const auto ab = ks_two_sample(EmpiricalSample(a), EmpiricalSample(b));
        const auto ba = ks_two_sample(EmpiricalSample(b), EmpiricalSample(a));
        EXPECT_EQ(ab.d, ba.d);
        EXPECT_NEAR(ab.p_value, ba.p_value, 1e-12);
        auto ta = a, tb = b;
        for (auto& x : ta) x = std::exp(std::sqrt(x));
        for (auto& x : tb) x = std::exp(std::sqrt(x));
        EXPECT_EQ(ks_two_sample(EmpiricalSample(ta), EmpiricalSample(tb)).d, ab.d);
    }
}

TEST(KsTwoSample, CrVectorsAcceptSelfRejectFarModel) {
    const auto self = ks_two_sample(cr_sample(0.3), cr_sample(0.3));
    EXPECT_GE(self.p_value, 0.05);
    const auto far = ks_two_sample(cr_sample(0.3), cr_sample(0.05));
    EXPECT_LT(far.p_value, 0.05);
    EXPECT_GE(far.d, 0.5);
}

TEST(ScanCr, GridHasFiftyStepsEndingAtHalf) {
    const auto g = scan_grid(0.01);
    ASSERT_EQ(g.size(), 50u);
    EXPECT_NEAR(g.front(), 0.01, 1e-15);
    EXPECT_EQ(g.back(), 0.5);
}

TEST(ScanCr, SelfConsistency) {
    const auto r = scan_cr(cr_sample(0.30), 16);
    ASSERT_TRUE(r.min_accepted && r.max_accepted);
    EXPECT_LE(*r.min_accepted, 0.30 + 1e-9);
    EXPECT_GE(*r.max_accepted, 0.30 - 1e-9);
    for (const auto& st : r.steps) EXPECT_EQ(st.accepted, st.ks.p_value >= r.threshold);
}

TEST(ScanCr, LowUpsetReferenceRejectsPointThree) {
    const auto r = scan_cr(cr_sample(0.05), 16);
    ASSERT_TRUE(r.min_accepted && r.max_accepted);
    EXPECT_LE(*r.min_accepted, 0.05 + 1e-9);
    EXPECT_LT(*r.max_accepted, 0.30);
    EXPECT_FALSE(r.steps[29].accepted);
    EXPECT_NEAR(r.steps[29].pr_b, 0.30, 1e-12);
}

TEST(ScanCr, WorkerCountDoesNotChangeResult) {
    ScanOptions one, many;
    many.workers = 4;
    const auto a = scan_cr(cr_sample(0.2), 16, one);
    const auto b = scan_cr(cr_sample(0.2), 16, many);
    ASSERT_EQ(a.steps.size(), b.steps.size());
    for (std::size_t k = 0; k < a.steps.size(); ++k) EXPECT_EQ(a.steps[k].ks.p_value, b.steps[k].ks.p_value);
}

TEST(FitPowerLaw, TwoPointClosedForm) {
    const auto f = fit_power_law(EmpiricalSample({1.0, std::exp(1.0)}), 1.0);
    EXPECT_NEAR(f.alpha, 3.0, 1e-12);
    EXPECT_EQ(f.sample_size, 2u);
}

TEST(FitPowerLaw, DegenerateInputs) {
    EXPECT_THROW(fit_power_law(EmpiricalSample({2.0, 2.0, 2.0})), InvalidArgument);
    EXPECT_THROW(fit_power_law(EmpiricalSample({1.0, 2.0}), 1.5), InvalidArgument);
}

TEST(FitPowerLaw, RecoversExponent) {
    const auto f = fit_power_law(EmpiricalSample(power_law_values(2.5, 1.0, 10'000, 1)), 1.0);
    EXPECT_NEAR(f.alpha, 2.5, 0.05);
}

TEST(FitPowerLaw, MatchesGridMaximization) {
    std::mt19937_64 rng(31);
    std::uniform_real_distribution<double> alpha_pick(1.5, 3.5);
    for (std::uint64_t trial = 0; trial < 100; ++trial) {
        const auto s = EmpiricalSample(power_law_values(alpha_pick(rng), 0.5, 50, trial));
        const auto f = fit_power_law(s);
        auto loglik = [&](double a) {
            double l = 0.0;
            for (double x : s.values()) l += std::log((a - 1.0) / s.min()) - a * std::log(x / s.min());
            return l;
        };
        // Successively refined grid search.
        double lo = 1.0 + 1e-9, hi = 10.0, best = lo;
        for (int level = 0; level < 8; ++level) {
            const double h = (hi - lo) / 100.0;
            double best_l = -INFINITY;
            for (int k = 0; k <= 100; ++k) {
                const double a = lo + k * h;
                if (const double l = loglik(a); l > best_l) best_l = l, best = a;
            }
            lo = std::max(1.0 + 1e-12, best - h);
            hi = best + h;
        }
        EXPECT_NEAR(f.alpha, best, 1e-6);
        EXPECT_NEAR(f.log_likelihood, loglik(f.alpha), 1e-9 * std::abs(f.log_likelihood));
    }
}

TEST(FitPowerLaw, ScanFindsTailStart) {
    // Log-normal body below 1, power-law tail from 1: the scan should pick an xmin near 1.
    auto v = power_law_values(2.5, 1.0, 2000, 5);
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> body(0.05, 1.0);
    for (int k = 0; k < 2000; ++k) v.push_back(body(rng));
    const auto f = fit_power_law(EmpiricalSample(v), XminMode::scan);
    EXPECT_NEAR(f.xmin, 1.0, 0.15);
    EXPECT_NEAR(f.alpha, 2.5, 0.15);
}

TEST(FitLognormal, RecoversParameters) {
    const auto f = fit_lognormal(EmpiricalSample(lognormal_values(-4.0717, 1.2611, 10'000, 2)));
    EXPECT_NEAR(f.mu, -4.0717, 0.05);
    EXPECT_NEAR(f.sigma, 1.2611, 0.05);
}

TEST(FitLognormal, MeanOfLogsAndZeroResidual) {
    const EmpiricalSample s({0.01, 0.02, 0.05, 0.09});
    const auto f = fit_lognormal(s);
    const double mean = (std::log(0.01) + std::log(0.02) + std::log(0.05) + std::log(0.09)) / 4.0;
    EXPECT_NEAR(f.mu, mean, 1e-15);
    double resid = 0.0;
    for (double x : s.values()) resid += std::log(x) - f.mu;
    EXPECT_NEAR(resid / 4.0, 0.0, 1e-12);
}

TEST(FitLognormal, DegenerateInputs) {
    EXPECT_THROW(fit_lognormal(EmpiricalSample({std::exp(1.0), std::exp(1.0)})), InvalidArgument);
    EXPECT_THROW(fit_lognormal(EmpiricalSample({1.0})), InvalidArgument);
}

TEST(Lrt, IdenticalFitsGiveZero) {
    const EmpiricalSample s(lognormal_values(0.0, 1.0, 100, 3));
    const auto f = fit_lognormal(s);
    const auto r = likelihood_ratio_test(s, f, f);
    EXPECT_EQ(r.r, 0.0);
    EXPECT_EQ(r.p_value, 1.0);
    const auto pl = fit_power_law(s);
    const auto q = likelihood_ratio_test(s, pl, pl);
    EXPECT_EQ(q.r, 0.0);
    EXPECT_EQ(q.p_value, 1.0);
}

TEST(Lrt, FavoursLognormalOnLognormalData) {
    int favoured = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const EmpiricalSample s(lognormal_values(-4.0717, 1.2611, 10'000, 1000 + seed));
        const auto r = likelihood_ratio_test(s, fit_lognormal(s), fit_power_law(s));
        favoured += r.r > 0;
        EXPECT_GE(r.p_value, 0.0);
        EXPECT_LE(r.p_value, 1.0);
    }
    EXPECT_GE(favoured, 18);
}

TEST(Lrt, AntisymmetricInArgumentOrder) {
    const EmpiricalSample s(lognormal_values(0.0, 0.7, 500, 9));
    const auto a = likelihood_ratio_test(s, fit_lognormal(s), fit_power_law(s));
    const auto b = likelihood_ratio_test(s, fit_power_law(s), fit_lognormal(s));
    EXPECT_NEAR(a.r, -b.r, 1e-12);
    EXPECT_NEAR(a.p_value, b.p_value, 1e-12);
}

TEST(Lrt, DifferentSupportsRejected) {
    const EmpiricalSample s(lognormal_values(0.0, 1.0, 200, 4));
    EXPECT_THROW(likelihood_ratio_test(s, fit_lognormal(s), fit_power_law(s, 1.0)), InvalidArgument);
}

TEST(Lrt, ZeroVarianceNonzeroDifferenceIsUndefined) {
    // Every point identical: the per-point differences are one nonzero constant.
    const EmpiricalSample s({2.0, 2.0, 2.0});
    FitResult a;
    a.family = FitFamily::log_normal;
    a.mu = 0.0;
    a.sigma = 1.0;
    a.xmin = 2.0;
    a.sample_size = 3;
    FitResult b = a;
    b.mu = 1.0;
    EXPECT_THROW(likelihood_ratio_test(s, a, b), UndefinedTest);
}
