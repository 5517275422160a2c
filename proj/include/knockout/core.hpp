#ifndef KNOCKOUT_CORE_HPP
#define KNOCKOUT_CORE_HPP

#include <knockout/error.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace knockout {

using PlayerId = std::size_t;

/// Exact integer for draw counts; n!/2^(n-1) leaves 64 bits for n > 20.
using BigCount = boost::multiprecision::cpp_int;

inline constexpr double kPairSumTolerance = 1e-12;

constexpr bool is_power_of_two(std::size_t n) noexcept { return std::has_single_bit(n); }

/// log2 of a power of two.
constexpr std::size_t bracket_rounds(std::size_t n) noexcept {
    return static_cast<std::size_t>(std::countr_zero(n));
}

inline void require_power_of_two(std::size_t n, std::string_view what) {
    if (!is_power_of_two(n))
        throw InvalidArgument(std::string(what) + ": player count " + std::to_string(n) +
                              " is not a power of two");
}

struct Player {
    PlayerId id = 0;
    std::string name;
    unsigned rank = 0; ///< 1 = best
};

/// Players with dense ids 0..n-1 and unique ranks 1..n.
class PlayerTable {
public:
    PlayerTable() = default;

    explicit PlayerTable(std::vector<Player> players) : players_(std::move(players)) {
        const auto n = players_.size();
        std::vector<bool> seen_rank(n + 1, false);
        for (std::size_t i = 0; i < n; ++i) {
            const auto& p = players_[i];
            if (p.id != i)
                throw InvalidArgument("player ids must be 0..n-1 in order; found id " +
                                      std::to_string(p.id) + " at position " + std::to_string(i));
            if (p.rank < 1 || p.rank > n || seen_rank[p.rank])
                throw InvalidArgument("ranks must be a permutation of 1.." + std::to_string(n) +
                                      "; bad rank " + std::to_string(p.rank) + " for '" + p.name + "'");
            seen_rank[p.rank] = true;
        }
    }

    /// Players named `<prefix><id>` with rank id+1.
    static PlayerTable numbered(std::size_t n, std::string_view prefix = "p") {
        std::vector<Player> ps;
        ps.reserve(n);
        for (std::size_t i = 0; i < n; ++i)
            ps.push_back({i, std::string(prefix) + std::to_string(i), static_cast<unsigned>(i + 1)});
        return PlayerTable(std::move(ps));
    }

    std::size_t size() const noexcept { return players_.size(); }
    const Player& operator[](PlayerId id) const { return players_.at(id); }
    const std::vector<Player>& players() const noexcept { return players_; }

    std::optional<PlayerId> find(std::string_view name) const {
        for (const auto& p : players_)
            if (p.name == name) return p.id;
        return std::nullopt;
    }

    bool ranked_above(PlayerId a, PlayerId b) const { return players_.at(a).rank < players_.at(b).rank; }

    /// Table without `gone`; ids are compacted and ranks renumbered preserving order.
    PlayerTable without(PlayerId gone) const {
        if (gone >= size()) throw InvalidArgument("no player with id " + std::to_string(gone));
        const unsigned gone_rank = players_[gone].rank;
        std::vector<Player> ps;
        ps.reserve(size() - 1);
        for (const auto& p : players_) {
            if (p.id == gone) continue;
            ps.push_back({ps.size(), p.name, p.rank > gone_rank ? p.rank - 1 : p.rank});
        }
        return PlayerTable(std::move(ps));
    }

    friend bool operator==(const PlayerTable& a, const PlayerTable& b) {
        if (a.size() != b.size()) return false;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a.players_[i].name != b.players_[i].name || a.players_[i].rank != b.players_[i].rank)
                return false;
        return true;
    }

private:
    std::vector<Player> players_;
};

/// Complete antisymmetric "beats" relation.
class DeterministicTournament {
public:
    DeterministicTournament() = default;

    DeterministicTournament(PlayerTable players, std::vector<std::vector<bool>> beats)
        : players_(std::move(players)), n_(players_.size()), beats_(n_ * n_, 0) {
        if (beats.size() != n_) throw InvalidArgument("beats matrix has wrong number of rows");
        for (std::size_t i = 0; i < n_; ++i) {
            if (beats[i].size() != n_) throw InvalidArgument("beats matrix row " + std::to_string(i) + " has wrong length");
            for (std::size_t j = 0; j < n_; ++j) beats_[i * n_ + j] = beats[i][j] ? 1 : 0;
        }
        validate();
    }

    /// Build from a predicate queried once per ordered pair i != j.
    template <class Pred>
    static DeterministicTournament from_relation(PlayerTable players, Pred&& beats) {
        const auto n = players.size();
        std::vector<std::vector<bool>> m(n, std::vector<bool>(n, false));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                if (i != j) m[i][j] = static_cast<bool>(beats(i, j));
        return DeterministicTournament(std::move(players), std::move(m));
    }

    std::size_t size() const noexcept { return n_; }
    const PlayerTable& players() const noexcept { return players_; }
    bool beats(PlayerId i, PlayerId j) const noexcept { return beats_[i * n_ + j] != 0; }

    DeterministicTournament without(PlayerId gone) const {
        auto players = players_.without(gone);
        return from_relation(std::move(players), [&](std::size_t i, std::size_t j) {
            return beats(i >= gone ? i + 1 : i, j >= gone ? j + 1 : j);
        });
    }

    friend bool operator==(const DeterministicTournament& a, const DeterministicTournament& b) {
        return a.players_ == b.players_ && a.beats_ == b.beats_;
    }

private:
    void validate() const {
        for (std::size_t i = 0; i < n_; ++i) {
            if (beats(i, i)) throw InvalidArgument("beats relation is not irreflexive at player " + std::to_string(i));
            for (std::size_t j = i + 1; j < n_; ++j)
                if (beats(i, j) == beats(j, i))
                    throw InvalidArgument("beats relation must orient exactly one of (" + std::to_string(i) + "," +
                                          std::to_string(j) + ") and its reverse");
        }
    }

    PlayerTable players_;
    std::size_t n_ = 0;
    std::vector<unsigned char> beats_;
};

/// Pairwise win probabilities with p(i,j) + p(j,i) = 1; diagonal stored as 0.5.
class ProbabilisticTournament {
public:
    ProbabilisticTournament() = default;

    ProbabilisticTournament(PlayerTable players, std::vector<std::vector<double>> p)
        : players_(std::move(players)), n_(players_.size()), p_(n_ * n_, 0.5) {
        if (p.size() != n_) throw InvalidArgument("probability matrix has wrong number of rows");
        for (std::size_t i = 0; i < n_; ++i) {
            if (p[i].size() != n_) throw InvalidArgument("probability matrix row " + std::to_string(i) + " has wrong length");
            for (std::size_t j = 0; j < n_; ++j)
                if (i != j) p_[i * n_ + j] = p[i][j];
        }
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < n_; ++j) {
                if (i == j) continue;
                const double v = p_[i * n_ + j];
                if (!(v >= 0.0 && v <= 1.0))
                    throw InvalidArgument("probability p(" + std::to_string(i) + "," + std::to_string(j) +
                                          ") is outside [0,1]");
                if (j > i && std::abs(v + p_[j * n_ + i] - 1.0) > kPairSumTolerance)
                    throw InvalidArgument("p(" + std::to_string(i) + "," + std::to_string(j) +
                                          ") + p(" + std::to_string(j) + "," + std::to_string(i) + ") != 1");
            }
    }

    /// Build from the probability that the first player of each pair i < j wins.
    template <class Fn>
    static ProbabilisticTournament from_upper(PlayerTable players, Fn&& p_upper) {
        const auto n = players.size();
        std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.5));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const double v = p_upper(i, j);
                m[i][j] = v;
                m[j][i] = 1.0 - v;
            }
        return ProbabilisticTournament(std::move(players), std::move(m));
    }

    /// The 0/1 matrix of a deterministic tournament.
    static ProbabilisticTournament from_deterministic(const DeterministicTournament& t) {
        return from_upper(t.players(), [&](std::size_t i, std::size_t j) { return t.beats(i, j) ? 1.0 : 0.0; });
    }

    std::size_t size() const noexcept { return n_; }
    const PlayerTable& players() const noexcept { return players_; }
    double p(PlayerId i, PlayerId j) const noexcept { return p_[i * n_ + j]; }

    ProbabilisticTournament without(PlayerId gone) const {
        auto players = players_.without(gone);
        return from_upper(std::move(players), [&](std::size_t i, std::size_t j) {
            return p(i >= gone ? i + 1 : i, j >= gone ? j + 1 : j);
        });
    }

    friend bool operator==(const ProbabilisticTournament& a, const ProbabilisticTournament& b) {
        return a.players_ == b.players_ && a.p_ == b.p_;
    }

private:
    PlayerTable players_;
    std::size_t n_ = 0;
    std::vector<double> p_;
};

/// An unordered balanced bracket, stored as the leaf order of its canonical
/// form: at every internal node the smallest id of the subtree is on the left.
class Draw {
public:
    std::size_t size() const noexcept { return leaves_.size(); }
    std::span<const PlayerId> leaves() const noexcept { return leaves_; }
    PlayerId operator[](std::size_t pos) const { return leaves_.at(pos); }

    friend bool operator==(const Draw&, const Draw&) = default;
    friend auto operator<=>(const Draw&, const Draw&) = default;

private:
    explicit Draw(std::vector<PlayerId> leaves) : leaves_(std::move(leaves)) {}
    friend Draw canonicalize(std::span<const PlayerId>);
    friend Draw canonicalize(std::vector<PlayerId>&&);
    friend Draw detail_adopt_canonical(std::vector<PlayerId>&&);

    std::vector<PlayerId> leaves_;
};

namespace detail {

inline void require_permutation(std::span<const PlayerId> seq) {
    std::vector<bool> seen(seq.size(), false);
    for (auto id : seq) {
        if (id >= seq.size() || seen[id])
            throw InvalidArgument("leaf sequence is not a permutation of 0.." + std::to_string(seq.size() - 1));
        seen[id] = true;
    }
}

/// Bottom-up: fixing the children first means swapping two halves moves
/// already-canonical subtrees intact, and the minimum of a canonical block
/// is its first leaf.
inline void canonicalize_in_place(std::vector<PlayerId>& leaves) {
    const auto n = leaves.size();
    for (std::size_t block = 2; block <= n; block *= 2) {
        const auto half = block / 2;
        for (std::size_t start = 0; start < n; start += block) {
            auto first = leaves.begin() + static_cast<std::ptrdiff_t>(start);
            auto mid = first + static_cast<std::ptrdiff_t>(half);
            if (*mid < *first) std::swap_ranges(first, mid, mid);
        }
    }
}

} // namespace detail

/// Wraps leaves already in canonical order (produced by the bracket search).
inline Draw detail_adopt_canonical(std::vector<PlayerId>&& leaves) { return Draw(std::move(leaves)); }

/// Number of distinct unordered draws over n players: n!/2^(n-1).
inline BigCount num_draws(std::size_t n) {
    require_power_of_two(n, "num_draws");
    BigCount result = 1;
    for (std::size_t k = 2; k <= n; ++k) result *= k;
    result >>= static_cast<unsigned>(n - 1);
    return result;
}

inline Draw canonicalize(std::vector<PlayerId>&& leaf_sequence) {
    require_power_of_two(leaf_sequence.size(), "canonicalize");
    detail::require_permutation(leaf_sequence);
    detail::canonicalize_in_place(leaf_sequence);
    return Draw(std::move(leaf_sequence));
}

inline Draw canonicalize(std::span<const PlayerId> leaf_sequence) {
    return canonicalize(std::vector<PlayerId>(leaf_sequence.begin(), leaf_sequence.end()));
}

inline Draw canonicalize(std::initializer_list<PlayerId> leaf_sequence) {
    return canonicalize(std::vector<PlayerId>(leaf_sequence));
}

/// Uniform over canonical draws: each draw is the image of exactly 2^(n-1)
/// permutations, so a uniform permutation canonicalizes to a uniform draw.
template <class URBG>
Draw random_draw(std::size_t n, URBG& rng) {
    require_power_of_two(n, "random_draw");
    std::vector<PlayerId> leaves(n);
    std::iota(leaves.begin(), leaves.end(), PlayerId{0});
    std::shuffle(leaves.begin(), leaves.end(), rng);
    return canonicalize(std::move(leaves));
}

inline void require_same_players(const Draw& draw, std::size_t n, std::string_view what) {
    if (draw.size() != n)
        throw InvalidArgument(std::string(what) + ": draw has " + std::to_string(draw.size()) +
                              " leaves but the tournament has " + std::to_string(n) + " players");
}

/// Winner of the bracket under a deterministic relation.
inline PlayerId simulate(const Draw& draw, const DeterministicTournament& t) {
    require_same_players(draw, t.size(), "simulate");
    std::vector<PlayerId> alive(draw.leaves().begin(), draw.leaves().end());
    while (alive.size() > 1) {
        std::vector<PlayerId> next;
        next.reserve(alive.size() / 2);
        for (std::size_t k = 0; k < alive.size(); k += 2)
            next.push_back(t.beats(alive[k], alive[k + 1]) ? alive[k] : alive[k + 1]);
        alive = std::move(next);
    }
    return alive.front();
}

/// Exact probability of each player (indexed by id) winning a fixed draw.
inline std::vector<double> draw_win_probabilities(const Draw& draw, const ProbabilisticTournament& t) {
    const auto n = t.size();
    require_same_players(draw, n, "draw_win_probabilities");
    const auto leaves = draw.leaves();
    // survive[pos]: probability the player at leaf pos has won every round so far.
    std::vector<double> survive(n, 1.0), next(n);
    for (std::size_t block = 2; block <= n; block *= 2) {
        const auto half = block / 2;
        for (std::size_t start = 0; start < n; start += block) {
            for (std::size_t a = start; a < start + block; ++a) {
                const std::size_t opp_begin = a < start + half ? start + half : start;
                double beat = 0.0;
                for (std::size_t b = opp_begin; b < opp_begin + half; ++b)
                    beat += survive[b] * t.p(leaves[a], leaves[b]);
                next[a] = survive[a] * beat;
            }
        }
        survive.swap(next);
    }
    std::vector<double> out(n, 0.0);
    for (std::size_t pos = 0; pos < n; ++pos) out[leaves[pos]] = survive[pos];
    return out;
}

/// Nested bracket text, e.g. "((p0,p3),(p1,p2))".
inline std::string format_bracket(const Draw& draw, const PlayerTable& players) {
    std::vector<std::string> parts;
    parts.reserve(draw.size());
    for (auto id : draw.leaves()) parts.push_back(players[id].name);
    if (parts.size() == 1) return parts.front();
    while (parts.size() > 1) {
        std::vector<std::string> next;
        for (std::size_t k = 0; k < parts.size(); k += 2) next.push_back("(" + parts[k] + "," + parts[k + 1] + ")");
        parts = std::move(next);
    }
    return parts.front();
}

} // namespace knockout

#endif // KNOCKOUT_CORE_HPP
