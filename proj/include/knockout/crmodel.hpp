#ifndef KNOCKOUT_CRMODEL_HPP
#define KNOCKOUT_CRMODEL_HPP

#include <knockout/core.hpp>

#include <cstddef>
#include <random>
#include <string>
#include <vector>

namespace knockout {

/// Condorcet Random model: every lower-ranked player upsets every
/// higher-ranked one with the same probability pr_b.
struct CrParams {
    std::size_t n = 0;
    double pr_b = 0.5;
};

inline void validate(const CrParams& params) {
    if (!(params.pr_b > 0.0 && params.pr_b <= 0.5))
        throw InvalidArgument("upset probability must lie in (0, 0.5]; got " + std::to_string(params.pr_b));
}

/// Players p0..p{n-1} ranked in id order; p(higher, lower) = 1 - pr_b.
inline ProbabilisticTournament generate_cr(const CrParams& params) {
    validate(params);
    const double favourite = 1.0 - params.pr_b;
    return ProbabilisticTournament::from_upper(PlayerTable::numbered(params.n),
                                               [&](std::size_t, std::size_t) { return favourite; });
}

/// One realization of match outcomes: i beats j with probability p(i, j),
/// independently per unordered pair (pairs visited in row-major order).
template <class URBG>
DeterministicTournament sample_deterministic(const ProbabilisticTournament& t, URBG& rng) {
    const auto n = t.size();
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<std::vector<bool>> beats(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool i_wins = unit(rng) < t.p(i, j);
            beats[i][j] = i_wins;
            beats[j][i] = !i_wins;
        }
    return DeterministicTournament(t.players(), std::move(beats));
}

/// Mean over unordered pairs of the probability that the lower-ranked player wins.
inline double average_upset_probability(const ProbabilisticTournament& t) {
    const auto n = t.size();
    if (n < 2) throw InvalidArgument("average upset probability needs at least two players");
    const auto& players = t.players();
    double sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool i_higher = players.ranked_above(i, j);
            sum += i_higher ? t.p(j, i) : t.p(i, j);
            ++pairs;
        }
    return sum / static_cast<double>(pairs);
}

} // namespace knockout

#endif // KNOCKOUT_CRMODEL_HPP
