#ifndef KNOCKOUT_SOLVER_HPP
#define KNOCKOUT_SOLVER_HPP

#include <knockout/bracket_dp.hpp>
#include <knockout/core.hpp>
#include <knockout/detail/bits.hpp>

#include <chrono>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace knockout {

/// Instrumentation of the bracket search.
///
/// A choice point is one alternative tried at a branching node: a split of
/// the node's players into halves together with the opponent the node's
/// winner meets in that node's match. Alternatives already ruled out by the
/// memoized feasible-winner sets are not tried and not counted, so a search
/// that never backtracks visits exactly n-1 choice points.
struct SearchStats {
    std::uint64_t choice_points = 0;
    std::uint64_t solutions_found = 0;
    double elapsed_seconds = 0.0;
};

struct FindResult {
    std::optional<Draw> draw;
    SearchStats stats;
};

struct PlayerWinCount {
    PlayerId player = 0;
    std::uint64_t count = 0;
    double share = 0.0; ///< count / num_draws(n)
    std::optional<SearchStats> first; ///< stats of find_winning_draw, when instrumented
    std::optional<SearchStats> all;   ///< stats of a full enumeration, when instrumented
};

struct WinCountReport {
    std::vector<PlayerWinCount> rows; ///< indexed by player id
    BigCount total_draws;
    double elapsed_seconds = 0.0;
};

namespace detail {

class Stopwatch {
public:
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

/// Depth-first bracket assembly over player subsets with memoized
/// feasible-winner sets. Not thread-safe; create one per thread.
class BracketSearch {
public:
    explicit BracketSearch(const DeterministicTournament& t) : n_(t.size()), beaten_(t.size(), 0) {
        require_power_of_two(n_, "bracket search");
        if (n_ > kMaxMaskPlayers)
            throw ResourceLimit("bracket search supports at most " + std::to_string(kMaxMaskPlayers) + " players");
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j)
                if (t.beats(i, j)) beaten_[i] |= bit(j);
    }

    std::size_t size() const noexcept { return n_; }
    Mask everyone() const noexcept { return full_mask(n_); }

    /// Players that win at least one bracket over exactly the players in s.
    Mask feasible_winners(Mask s) {
        if (popcount(s) == 1) return s;
        if (auto it = memo_.find(s); it != memo_.end()) return it->second;
        Mask winners = 0;
        for_each_halving(s, lowest_index(s), [&](Mask a, Mask b) {
            const Mask fa = feasible_winners(a);
            const Mask fb = feasible_winners(b);
            for_each_bit(fa & ~winners, [&](std::size_t i) {
                if (beaten_[i] & fb) winners |= bit(i);
            });
            for_each_bit(fb & ~winners, [&](std::size_t j) {
                if (beaten_[j] & fa) winners |= bit(j);
            });
            return winners != s;
        });
        memo_.emplace(s, winners);
        return winners;
    }

    /// Writes one canonical leaf order of a bracket over s won by w into out.
    /// Requires w in feasible_winners(s).
    void build_one(Mask s, std::size_t w, PlayerId* out, SearchStats& stats) {
        if (popcount(s) == 1) {
            *out = w;
            return;
        }
        const Mask lowest = s & (~s + 1);
        const std::size_t half = static_cast<std::size_t>(popcount(s)) / 2;
        for_each_halving(s, w, [&](Mask a, Mask b) {
            if (!(feasible_winners(a) & bit(w))) return true;
            const Mask rivals = feasible_winners(b) & beaten_[w];
            if (!rivals) return true;
            ++stats.choice_points;
            const std::size_t j = lowest_index(rivals);
            const bool a_left = (a & lowest) != 0;
            build_one(a, w, a_left ? out : out + half, stats);
            build_one(b, j, a_left ? out + half : out, stats);
            return false;
        });
    }

    /// Fills out with each canonical bracket over s won by w in turn and
    /// calls k() after each; k returns false to stop. Returns false if stopped.
    bool expand(Mask s, std::size_t w, PlayerId* out, SearchStats& stats, FunctionRef<bool()> k) {
        if (popcount(s) == 1) {
            *out = w;
            return k();
        }
        const Mask lowest = s & (~s + 1);
        const std::size_t half = static_cast<std::size_t>(popcount(s)) / 2;
        return for_each_halving(s, w, [&](Mask a, Mask b) {
            if (!(feasible_winners(a) & bit(w))) return true;
            const Mask rivals = feasible_winners(b) & beaten_[w];
            const bool a_left = (a & lowest) != 0;
            PlayerId* out_a = a_left ? out : out + half;
            PlayerId* out_b = a_left ? out + half : out;
            for (Mask r = rivals; r; r &= r - 1) {
                const std::size_t j = lowest_index(r);
                ++stats.choice_points;
                const bool go_on = expand(a, w, out_a, stats, [&]() { return expand(b, j, out_b, stats, k); });
                if (!go_on) return false;
            }
            return true;
        });
    }

private:
    std::size_t n_;
    std::vector<Mask> beaten_; ///< beaten_[i]: players i beats
    std::unordered_map<Mask, Mask> memo_;
};

inline void require_target(const DeterministicTournament& t, PlayerId target) {
    if (target >= t.size())
        throw InvalidArgument("target id " + std::to_string(target) + " is not a player of a " +
                              std::to_string(t.size()) + "-player tournament");
}

} // namespace detail

/// Tournament Fixing Problem: a draw that `target` wins, if one exists.
inline FindResult find_winning_draw(const DeterministicTournament& t, PlayerId target) {
    detail::require_target(t, target);
    detail::Stopwatch clock;
    detail::BracketSearch search(t);
    FindResult result;
    const auto all = search.everyone();
    if (search.feasible_winners(all) & detail::bit(target)) {
        std::vector<PlayerId> leaves(t.size());
        if (t.size() == 1) result.stats.choice_points = 1;
        search.build_one(all, target, leaves.data(), result.stats);
        result.draw = canonicalize(std::move(leaves));
        result.stats.solutions_found = 1;
    }
    result.stats.elapsed_seconds = clock.seconds();
    return result;
}

/// Streams each distinct canonical draw won by `target` to `visit`, stopping
/// after `limit` draws when given. The order is deterministic.
inline SearchStats enumerate_winning_draws(const DeterministicTournament& t, PlayerId target,
                                           std::optional<std::uint64_t> limit,
                                           const std::function<void(const Draw&)>& visit) {
    detail::require_target(t, target);
    detail::Stopwatch clock;
    SearchStats stats;
    if (limit && *limit == 0) return stats;
    detail::BracketSearch search(t);
    const auto all = search.everyone();
    if (search.feasible_winners(all) & detail::bit(target)) {
        if (t.size() == 1) stats.choice_points = 1;
        std::vector<PlayerId> leaves(t.size());
        search.expand(all, target, leaves.data(), stats, [&]() {
            ++stats.solutions_found;
            if (visit) visit(detail_adopt_canonical(std::vector<PlayerId>(leaves)));
            return !limit || stats.solutions_found < *limit;
        });
    }
    stats.elapsed_seconds = clock.seconds();
    return stats;
}

struct EnumerationResult {
    std::vector<Draw> draws;
    SearchStats stats;
};

inline EnumerationResult enumerate_winning_draws(const DeterministicTournament& t, PlayerId target,
                                                 std::optional<std::uint64_t> limit = std::nullopt) {
    EnumerationResult result;
    result.stats = enumerate_winning_draws(t, target, limit, [&](const Draw& d) { result.draws.push_back(d); });
    return result;
}

/// Full search for every draw won by `target` without materializing them.
inline SearchStats count_by_search(const DeterministicTournament& t, PlayerId target) {
    return enumerate_winning_draws(t, target, std::nullopt, {});
}

/// Exact number of draws won by each player, by subset dynamic programming.
inline WinCountReport count_winning_draws(const DeterministicTournament& t, unsigned workers = 1) {
    detail::Stopwatch clock;
    const auto n = t.size();
    const auto counts = bracket_dp<std::uint64_t>(
        n, [&](std::size_t i, std::size_t j) { return t.beats(i, j) ? std::uint64_t{1} : std::uint64_t{0}; },
        workers);
    WinCountReport report;
    report.total_draws = num_draws(n);
    const double total = report.total_draws.convert_to<double>();
    report.rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        report.rows.push_back({i, counts[i], static_cast<double>(counts[i]) / total, std::nullopt, std::nullopt});
    report.elapsed_seconds = clock.seconds();
    return report;
}

/// Adds first-solution and all-solution search statistics to each row.
/// The all-solution pass visits every winning draw, so it is skipped for
/// players whose count exceeds `enumerate_cap`.
inline void instrument_search(WinCountReport& report, const DeterministicTournament& t,
                              std::uint64_t enumerate_cap = UINT64_MAX) {
    for (auto& row : report.rows) {
        if (row.count == 0) continue;
        row.first = find_winning_draw(t, row.player).stats;
        if (row.count <= enumerate_cap) row.all = count_by_search(t, row.player);
    }
}

/// Players that reach every other player in at most two steps (the uncovered set).
inline std::vector<PlayerId> kings(const DeterministicTournament& t) {
    const auto n = t.size();
    std::vector<PlayerId> out;
    for (std::size_t i = 0; i < n; ++i) {
        bool king = true;
        for (std::size_t j = 0; j < n && king; ++j) {
            if (j == i || t.beats(i, j)) continue;
            bool via = false;
            for (std::size_t k = 0; k < n && !via; ++k) via = t.beats(i, k) && t.beats(k, j);
            king = via;
        }
        if (king) out.push_back(i);
    }
    return out;
}

inline std::optional<PlayerId> condorcet_winner(const DeterministicTournament& t) {
    const auto n = t.size();
    for (std::size_t i = 0; i < n; ++i) {
        bool all = true;
        for (std::size_t j = 0; j < n && all; ++j)
            if (j != i && !t.beats(i, j)) all = false;
        if (all) return i;
    }
    return std::nullopt;
}

} // namespace knockout

#endif // KNOCKOUT_SOLVER_HPP
