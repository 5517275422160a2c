#include <knockout/crmodel.hpp>

#include <gtest/gtest.h>

#include <random>

using namespace knockout;

TEST(GenerateCr, UniformAtHalf) {
    const auto t = generate_cr({4, 0.5});
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j) EXPECT_EQ(t.p(i, j), 0.5);
}

TEST(GenerateCr, HigherRankedFavouredByOneMinusUpset) {
    const auto t = generate_cr({16, 0.30});
    for (std::size_t i = 0; i < 16; ++i)
        for (std::size_t j = i + 1; j < 16; ++j) {
            EXPECT_DOUBLE_EQ(t.p(i, j), 0.70);
            EXPECT_DOUBLE_EQ(t.p(j, i), 0.30);
            EXPECT_EQ(t.p(i, j) + t.p(j, i), 1.0);
        }
}

TEST(GenerateCr, TinyUpsetIsNearDeterministic) {
    const auto t = generate_cr({8, 1e-9});
    for (std::size_t j = 1; j < 8; ++j) EXPECT_NEAR(t.p(0, j), 1.0, 1e-8);
}

TEST(GenerateCr, RejectsOutOfRange) {
    EXPECT_THROW(generate_cr({4, 0.0}), InvalidArgument);
    EXPECT_THROW(generate_cr({4, -0.1}), InvalidArgument);
    EXPECT_THROW(generate_cr({4, 0.51}), InvalidArgument);
    EXPECT_NO_THROW(generate_cr({4, 0.5}));
}

TEST(SampleDeterministic, ZeroOneMatrixIsReproducedExactly) {
    const auto p = ProbabilisticTournament::from_upper(PlayerTable::numbered(6),
                                                       [](std::size_t i, std::size_t j) { return (i + j) % 2 ? 1.0 : 0.0; });
    std::mt19937_64 rng(1);
    const auto t = sample_deterministic(p, rng);
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = 0; j < 6; ++j)
            if (i != j) {
                EXPECT_EQ(t.beats(i, j), p.p(i, j) == 1.0);
            }
}

TEST(SampleDeterministic, FixedSeedIsReproducible) {
    const auto p = generate_cr({16, 0.3});
    std::mt19937_64 a(42), b(42);
    EXPECT_EQ(sample_deterministic(p, a), sample_deterministic(p, b));
}

TEST(SampleDeterministic, EdgeMarginalsAtHalf) {
    const auto p = generate_cr({4, 0.5});
    std::mt19937_64 rng(11);
    constexpr int samples = 20'000;
    std::vector<int> wins(16, 0);
    for (int s = 0; s < samples; ++s) {
        const auto t = sample_deterministic(p, rng);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = 0; j < 4; ++j)
                if (i != j && t.beats(i, j)) ++wins[i * 4 + j];
    }
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j) EXPECT_NEAR(wins[i * 4 + j] / double(samples), 0.5, 0.01);
}

TEST(SampleDeterministic, EdgeMarginalsChiSquared) {
    // Per-edge chi-squared (1 dof) at p = 0.01 over 10,000 samples.
    const auto p = generate_cr({4, 0.2});
    std::mt19937_64 rng(12);
    constexpr int samples = 10'000;
    std::vector<int> wins(16, 0);
    for (int s = 0; s < samples; ++s) {
        const auto t = sample_deterministic(p, rng);
        for (std::size_t i = 0; i < 4; ++i)
            for (std::size_t j = i + 1; j < 4; ++j) wins[i * 4 + j] += t.beats(i, j);
    }
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j) {
            const double e1 = samples * 0.8, e0 = samples * 0.2;
            const double o1 = wins[i * 4 + j], o0 = samples - o1;
            const double chi2 = (o1 - e1) * (o1 - e1) / e1 + (o0 - e0) * (o0 - e0) / e0;
            EXPECT_LT(chi2, 6.635) << i << "," << j;
        }
}

TEST(AverageUpset, Examples) {
    for (double x : {0.01, 0.13, 0.30, 0.42, 0.5}) EXPECT_NEAR(average_upset_probability(generate_cr({16, x})), x, 1e-12);

    const auto two = ProbabilisticTournament::from_upper(PlayerTable::numbered(2), [](auto, auto) { return 1.0 - 0.37401; });
    EXPECT_NEAR(average_upset_probability(two), 0.37401, 1e-12);

    // Upset entries p(lower, higher) for pairs (0,1),(0,2),(0,3),(1,2),(1,3),(2,3).
    const double upset[4][4] = {{0, 0.1, 0.2, 0.3}, {0, 0, 0.4, 0.2}, {0, 0, 0, 0.2}, {0, 0, 0, 0}};
    const auto four = ProbabilisticTournament::from_upper(PlayerTable::numbered(4),
                                                          [&](std::size_t i, std::size_t j) { return 1.0 - upset[i][j]; });
    EXPECT_NEAR(average_upset_probability(four), 1.4 / 6.0, 1e-12);
}

TEST(AverageUpset, UsesRanksNotIds) {
    // Player 1 is ranked first; it wins 90% against player 0.
    const PlayerTable players({{0, "b", 2}, {1, "a", 1}});
    const auto t = ProbabilisticTournament::from_upper(players, [](auto, auto) { return 0.1; });
    EXPECT_NEAR(average_upset_probability(t), 0.1, 1e-15);
}
