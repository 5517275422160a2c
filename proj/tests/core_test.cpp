#include "oracles.hpp"

#include <knockout/core.hpp>

#include <gtest/gtest.h>

#include <map>
#include <numeric>
#include <random>
#include <set>

using namespace knockout;

namespace {

std::vector<PlayerId> leaves_of(const Draw& d) { return {d.leaves().begin(), d.leaves().end()}; }

bool is_canonical(const std::vector<PlayerId>& leaves) {
    for (std::size_t block = 2; block <= leaves.size(); block *= 2)
        for (std::size_t s = 0; s < leaves.size(); s += block) {
            const auto first = leaves.begin() + static_cast<std::ptrdiff_t>(s);
            const auto mid = first + static_cast<std::ptrdiff_t>(block / 2);
            const auto last = first + static_cast<std::ptrdiff_t>(block);
            if (*std::min_element(first, last) != *std::min_element(first, mid)) return false;
        }
    return true;
}

} // namespace

TEST(NumDraws, SmallValues) {
    EXPECT_EQ(num_draws(1), 1);
    EXPECT_EQ(num_draws(2), 1);
    EXPECT_EQ(num_draws(4), 3);
    EXPECT_EQ(num_draws(8), 315);
    EXPECT_EQ(num_draws(16), 638'512'875);
}

TEST(NumDraws, ThirtyTwoDoesNotOverflow) {
    // 32! / 2^31, computed independently.
    BigCount fact = 1;
    for (int k = 2; k <= 32; ++k) fact *= k;
    EXPECT_EQ(num_draws(32), fact / (BigCount(1) << 31));
    EXPECT_GT(num_draws(32), BigCount(std::numeric_limits<std::uint64_t>::max()));
}

TEST(NumDraws, MatchesBruteForceOrbitCount) {
    for (std::size_t n : {2u, 4u, 8u}) {
        std::vector<PlayerId> perm(n);
        std::iota(perm.begin(), perm.end(), PlayerId{0});
        std::set<std::vector<PlayerId>> orbits;
        do {
            auto o = oracle::orbit(perm);
            orbits.insert(*std::min_element(o.begin(), o.end()));
        } while (std::next_permutation(perm.begin(), perm.end()));
        EXPECT_EQ(BigCount(orbits.size()), num_draws(n)) << "n=" << n;
        EXPECT_EQ(oracle::all_draws(n).size(), orbits.size());
    }
}

TEST(NumDraws, RejectsNonPowerOfTwo) {
    EXPECT_THROW(num_draws(3), InvalidArgument);
    EXPECT_THROW(num_draws(12), InvalidArgument);
    EXPECT_THROW(num_draws(0), InvalidArgument);
}

TEST(Canonicalize, Examples) {
    EXPECT_EQ(leaves_of(canonicalize({1, 0})), (std::vector<PlayerId>{0, 1}));
    EXPECT_EQ(leaves_of(canonicalize({2, 3, 1, 0})), (std::vector<PlayerId>{0, 1, 2, 3}));
    EXPECT_EQ(leaves_of(canonicalize({0, 1, 2, 3})), (std::vector<PlayerId>{0, 1, 2, 3}));
}

TEST(Canonicalize, OrbitOfExampleMapsToOneDraw) {
    const auto orbit = oracle::orbit({2, 3, 1, 0});
    ASSERT_EQ(orbit.size(), 8u);
    for (const auto& o : orbit) EXPECT_EQ(leaves_of(canonicalize(o)), (std::vector<PlayerId>{0, 1, 2, 3}));
}

TEST(Canonicalize, FourPlayersPartitionIntoThreeOrbitsOfEight) {
    std::vector<PlayerId> perm{0, 1, 2, 3};
    std::map<std::vector<PlayerId>, int> sizes;
    do {
        ++sizes[leaves_of(canonicalize(perm))];
    } while (std::next_permutation(perm.begin(), perm.end()));
    ASSERT_EQ(sizes.size(), 3u);
    for (const auto& [draw, size] : sizes) EXPECT_EQ(size, 8);
}

TEST(Canonicalize, PropertyIdempotentAndConstantOnOrbit) {
    std::mt19937_64 rng(7);
    for (std::size_t n : {2u, 4u, 8u, 16u}) {
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<PlayerId> perm(n);
            std::iota(perm.begin(), perm.end(), PlayerId{0});
            std::shuffle(perm.begin(), perm.end(), rng);
            const auto canon = leaves_of(canonicalize(perm));
            EXPECT_TRUE(is_canonical(canon));
            EXPECT_EQ(leaves_of(canonicalize(canon)), canon);
            if (n <= 8) {
                for (const auto& o : oracle::orbit(perm)) EXPECT_EQ(leaves_of(canonicalize(o)), canon);
            }
        }
    }
}

TEST(Canonicalize, RejectsNonPermutations) {
    EXPECT_THROW(canonicalize({0, 0}), InvalidArgument);
    EXPECT_THROW(canonicalize({0, 2}), InvalidArgument);
    EXPECT_THROW(canonicalize({0, 1, 2}), InvalidArgument);
}

TEST(RandomDraw, TwoPlayersAlwaysTheSingleDraw) {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        std::mt19937_64 rng(seed);
        EXPECT_EQ(leaves_of(random_draw(2, rng)), (std::vector<PlayerId>{0, 1}));
    }
}

TEST(RandomDraw, FourPlayersUniformOverThreeDraws) {
    std::mt19937_64 rng(2024);
    std::map<std::vector<PlayerId>, int> freq;
    constexpr int samples = 30'000;
    for (int s = 0; s < samples; ++s) ++freq[leaves_of(random_draw(4, rng))];
    ASSERT_EQ(freq.size(), 3u);
    double chi2 = 0.0;
    for (const auto& [draw, count] : freq) {
        EXPECT_NEAR(count / double(samples), 1.0 / 3.0, 0.01);
        const double expected = samples / 3.0;
        chi2 += (count - expected) * (count - expected) / expected;
    }
    EXPECT_LT(chi2, 9.21); // chi-squared, 2 dof, p = 0.01
}

TEST(RandomDraw, SixteenPlayersCanonical) {
    std::mt19937_64 rng(99);
    for (int s = 0; s < 100; ++s) EXPECT_TRUE(is_canonical(leaves_of(random_draw(16, rng))));
}

TEST(Simulate, Examples) {
    const auto two = DeterministicTournament::from_relation(PlayerTable::numbered(2),
                                                            [](std::size_t i, std::size_t) { return i == 0; });
    EXPECT_EQ(simulate(canonicalize({0, 1}), two), 0u);

    const auto t = oracle::cycle4();
    EXPECT_EQ(simulate(canonicalize({0, 3, 1, 2}), t), 0u);
    EXPECT_EQ(simulate(canonicalize({0, 1, 2, 3}), t), 2u);
    EXPECT_EQ(simulate(canonicalize({0, 2, 1, 3}), t), 1u);
}

TEST(Simulate, MatchesRecursiveOracle) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto t = oracle::random_tournament(8, seed);
        for (const auto& d : oracle::all_draws(8)) EXPECT_EQ(simulate(canonicalize(d), t), oracle::winner(d, t));
    }
}

TEST(Simulate, RejectsMismatchedSize) {
    EXPECT_THROW(simulate(canonicalize({0, 1}), oracle::cycle4()), InvalidArgument);
}

TEST(DrawWinProbabilities, Examples) {
    const auto two = ProbabilisticTournament::from_upper(PlayerTable::numbered(2), [](auto, auto) { return 0.7; });
    const auto p2 = draw_win_probabilities(canonicalize({0, 1}), two);
    EXPECT_DOUBLE_EQ(p2[0], 0.7);
    EXPECT_DOUBLE_EQ(p2[1], 0.3);

    const auto flat = ProbabilisticTournament::from_upper(PlayerTable::numbered(4), [](auto, auto) { return 0.5; });
    for (double v : draw_win_probabilities(canonicalize({0, 1, 2, 3}), flat)) EXPECT_DOUBLE_EQ(v, 0.25);

    const auto cyc = ProbabilisticTournament::from_deterministic(oracle::cycle4());
    EXPECT_EQ(draw_win_probabilities(canonicalize({0, 1, 2, 3}), cyc), (std::vector<double>{0, 0, 1, 0}));
}

TEST(DrawWinProbabilities, DegenerateMatrixAgreesWithSimulate) {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto t = oracle::random_tournament(8, seed);
        const auto p = ProbabilisticTournament::from_deterministic(t);
        for (const auto& leaves : oracle::all_draws(8)) {
            const auto d = canonicalize(leaves);
            const auto probs = draw_win_probabilities(d, p);
            const auto w = simulate(d, t);
            for (std::size_t i = 0; i < 8; ++i) EXPECT_EQ(probs[i], i == w ? 1.0 : 0.0);
        }
    }
}

TEST(DrawWinProbabilities, SumsToOneAndMatchesRecursiveOracle) {
    std::mt19937_64 rng(5);
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const auto t = oracle::random_probabilistic(16, seed);
        const auto d = random_draw(16, rng);
        const auto probs = draw_win_probabilities(d, t);
        EXPECT_NEAR(std::accumulate(probs.begin(), probs.end(), 0.0), 1.0, 1e-9);
        const auto ref = oracle::winner_distribution(leaves_of(d), t);
        for (std::size_t i = 0; i < 16; ++i) EXPECT_NEAR(probs[i], ref[i], 1e-14);
    }
}

TEST(Tournaments, RejectInvalidRelations) {
    EXPECT_THROW(DeterministicTournament(PlayerTable::numbered(2), {{false, true}, {true, false}}), InvalidArgument);
    EXPECT_THROW(DeterministicTournament(PlayerTable::numbered(2), {{false, false}, {false, false}}), InvalidArgument);
    EXPECT_THROW(DeterministicTournament(PlayerTable::numbered(2), {{true, true}, {false, false}}), InvalidArgument);
    EXPECT_THROW(ProbabilisticTournament(PlayerTable::numbered(2), {{0.5, 0.6}, {0.6, 0.5}}), InvalidArgument);
    EXPECT_THROW(ProbabilisticTournament(PlayerTable::numbered(2), {{0.5, 1.2}, {-0.2, 0.5}}), InvalidArgument);
    EXPECT_NO_THROW(ProbabilisticTournament(PlayerTable::numbered(2), {{0.0, 0.25}, {0.75, 0.0}}));
}

TEST(Tournaments, DiagonalStoredAsHalf) {
    const ProbabilisticTournament t(PlayerTable::numbered(2), {{0.0, 0.25}, {0.75, 1.0}});
    EXPECT_EQ(t.p(0, 0), 0.5);
    EXPECT_EQ(t.p(1, 1), 0.5);
}

TEST(PlayerTable, RejectsBadRanksAndIds) {
    EXPECT_THROW(PlayerTable({{0, "a", 1}, {1, "b", 1}}), InvalidArgument);
    EXPECT_THROW(PlayerTable({{0, "a", 1}, {2, "b", 2}}), InvalidArgument);
    EXPECT_THROW(PlayerTable({{0, "a", 0}}), InvalidArgument);
}

TEST(FormatBracket, NestedText) {
    EXPECT_EQ(format_bracket(canonicalize({0, 3, 1, 2}), PlayerTable::numbered(4)), "((p0,p3),(p1,p2))");
}
