#ifndef KNOCKOUT_INGEST_HPP
#define KNOCKOUT_INGEST_HPP

#include <knockout/core.hpp>
#include <knockout/csv.hpp>

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace knockout {

// ---------------------------------------------------------------------------
// Records and file formats

struct MatchRecord {
    std::string season;
    std::string home;
    std::string away;
    unsigned home_goals = 0;
    unsigned away_goals = 0;

    friend bool operator==(const MatchRecord&, const MatchRecord&) = default;
};

struct HeadToHeadRecord {
    std::string player_a;
    std::string player_b;
    unsigned a_wins = 0;
    unsigned b_wins = 0;

    friend bool operator==(const HeadToHeadRecord&, const HeadToHeadRecord&) = default;
};

/// Names ordered best first.
struct RankingTable {
    std::vector<std::string> names;

    friend bool operator==(const RankingTable&, const RankingTable&) = default;
};

/// One unordered pair of a probabilistic tournament; `a` is the higher-ranked player.
struct PairRecord {
    unsigned rank_a = 0;
    std::string player_a;
    unsigned rank_b = 0;
    std::string player_b;
    double p_ab = 0.5;
};

inline const std::vector<std::string> kMatchesHeader{"season", "home", "away", "home_goals", "away_goals"};
inline const std::vector<std::string> kHeadToHeadHeader{"player_a", "player_b", "a_wins", "b_wins"};
inline const std::vector<std::string> kRanksHeader{"rank", "name"};
inline const std::vector<std::string> kPairsHeader{"rank_a", "player_a", "rank_b", "player_b", "p_ab"};
inline const std::vector<std::string> kValuesHeader{"value"};

namespace detail {

inline unsigned non_negative(std::string_view field, const std::string& context) {
    const auto v = csv::to_integer(field, context);
    if (v < 0) throw InvalidArgument(context + ": negative count " + std::string(field));
    if (v > UINT32_MAX) throw InvalidArgument(context + ": count " + std::string(field) + " is too large");
    return static_cast<unsigned>(v);
}

inline std::string row_context(std::string_view kind, const csv::Table& t, std::size_t r) {
    return std::string(kind) + " line " + std::to_string(t.line_numbers[r]);
}

inline void require_name(const std::string& name, const std::string& context) {
    if (name.empty()) throw InvalidArgument(context + ": empty name");
}

} // namespace detail

inline std::vector<MatchRecord> read_matches(std::istream& in) {
    const auto t = csv::read(in);
    csv::require_header(t, kMatchesHeader, "matches.csv");
    std::vector<MatchRecord> out;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        const auto ctx = detail::row_context("matches.csv", t, r);
        MatchRecord m{row[0], row[1], row[2], detail::non_negative(row[3], ctx), detail::non_negative(row[4], ctx)};
        detail::require_name(m.home, ctx);
        detail::require_name(m.away, ctx);
        if (m.home == m.away) throw InvalidArgument(ctx + ": team '" + m.home + "' plays itself");
        out.push_back(std::move(m));
    }
    return out;
}

inline void write_matches(std::ostream& out, const std::vector<MatchRecord>& matches) {
    csv::write_row(out, kMatchesHeader);
    for (const auto& m : matches)
        csv::write_row(out, {csv::quote(m.season), csv::quote(m.home), csv::quote(m.away),
                             std::to_string(m.home_goals), std::to_string(m.away_goals)});
}

inline std::vector<HeadToHeadRecord> read_head_to_head(std::istream& in) {
    const auto t = csv::read(in);
    csv::require_header(t, kHeadToHeadHeader, "h2h.csv");
    std::vector<HeadToHeadRecord> out;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        const auto ctx = detail::row_context("h2h.csv", t, r);
        HeadToHeadRecord h{row[0], row[1], detail::non_negative(row[2], ctx), detail::non_negative(row[3], ctx)};
        detail::require_name(h.player_a, ctx);
        detail::require_name(h.player_b, ctx);
        if (h.player_a == h.player_b) throw InvalidArgument(ctx + ": player '" + h.player_a + "' plays itself");
        out.push_back(std::move(h));
    }
    return out;
}

inline void write_head_to_head(std::ostream& out, const std::vector<HeadToHeadRecord>& records) {
    csv::write_row(out, kHeadToHeadHeader);
    for (const auto& h : records)
        csv::write_row(out, {csv::quote(h.player_a), csv::quote(h.player_b), std::to_string(h.a_wins),
                             std::to_string(h.b_wins)});
}

/// Rows may appear in any order; ranks must be exactly 1..n and names unique.
inline RankingTable read_ranks(std::istream& in) {
    const auto t = csv::read(in);
    csv::require_header(t, kRanksHeader, "ranks.csv");
    const auto n = t.rows.size();
    std::vector<std::optional<std::string>> by_rank(n);
    std::set<std::string> seen;
    for (std::size_t r = 0; r < n; ++r) {
        const auto ctx = detail::row_context("ranks.csv", t, r);
        const auto rank = csv::to_integer(t.rows[r][0], ctx);
        const auto& name = t.rows[r][1];
        detail::require_name(name, ctx);
        if (rank < 1 || rank > static_cast<std::int64_t>(n) || by_rank[static_cast<std::size_t>(rank - 1)])
            throw InvalidArgument(ctx + ": ranks must be a permutation of 1.." + std::to_string(n));
        if (!seen.insert(name).second) throw InvalidArgument(ctx + ": duplicate name '" + name + "'");
        by_rank[static_cast<std::size_t>(rank - 1)] = name;
    }
    RankingTable table;
    for (auto& name : by_rank) table.names.push_back(std::move(*name));
    return table;
}

inline void write_ranks(std::ostream& out, const RankingTable& ranks) {
    csv::write_row(out, kRanksHeader);
    for (std::size_t k = 0; k < ranks.names.size(); ++k)
        csv::write_row(out, {std::to_string(k + 1), csv::quote(ranks.names[k])});
}

inline std::vector<PairRecord> read_pairs(std::istream& in) {
    const auto t = csv::read(in);
    csv::require_header(t, kPairsHeader, "pairs.csv");
    std::vector<PairRecord> out;
    for (std::size_t r = 0; r < t.rows.size(); ++r) {
        const auto& row = t.rows[r];
        const auto ctx = detail::row_context("pairs.csv", t, r);
        PairRecord p{detail::non_negative(row[0], ctx), row[1], detail::non_negative(row[2], ctx), row[3],
                     csv::to_real(row[4], ctx)};
        detail::require_name(p.player_a, ctx);
        detail::require_name(p.player_b, ctx);
        out.push_back(std::move(p));
    }
    return out;
}

inline void write_pairs(std::ostream& out, const std::vector<PairRecord>& pairs) {
    csv::write_row(out, kPairsHeader);
    for (const auto& p : pairs)
        csv::write_row(out, {std::to_string(p.rank_a), csv::quote(p.player_a), std::to_string(p.rank_b),
                             csv::quote(p.player_b), csv::real(p.p_ab)});
}

/// Every unordered pair, higher-ranked player first, in rank order.
inline std::vector<PairRecord> to_pairs(const ProbabilisticTournament& t) {
    const auto& players = t.players();
    std::vector<PlayerId> by_rank(t.size());
    for (const auto& p : players.players()) by_rank[p.rank - 1] = p.id;
    std::vector<PairRecord> out;
    for (std::size_t a = 0; a < by_rank.size(); ++a)
        for (std::size_t b = a + 1; b < by_rank.size(); ++b) {
            const auto& pa = players[by_rank[a]];
            const auto& pb = players[by_rank[b]];
            out.push_back({pa.rank, pa.name, pb.rank, pb.name, t.p(pa.id, pb.id)});
        }
    return out;
}

/// A single column of positive values, for fitting raw samples.
inline std::vector<double> read_values(std::istream& in) {
    const auto t = csv::read(in);
    csv::require_header(t, kValuesHeader, "values.csv");
    std::vector<double> out;
    for (std::size_t r = 0; r < t.rows.size(); ++r)
        out.push_back(csv::to_real(t.rows[r][0], detail::row_context("values.csv", t, r)));
    return out;
}

// ---------------------------------------------------------------------------
// Rounding data into tournaments

/// Both views of one dataset. `imputed_pairs` lists pairs whose probability
/// was set to 0.5 because the data carry no information (never met, or 0-0
/// on aggregate).
struct TournamentPair {
    DeterministicTournament deterministic;
    ProbabilisticTournament probabilistic;
    std::vector<std::pair<std::string, std::string>> imputed_pairs;
};

/// Player ids follow rank: id = rank - 1.
inline PlayerTable players_from(const RankingTable& ranks) {
    std::vector<Player> ps;
    for (std::size_t k = 0; k < ranks.names.size(); ++k)
        ps.push_back({k, ranks.names[k], static_cast<unsigned>(k + 1)});
    return PlayerTable(std::move(ps));
}

namespace detail {

inline PlayerId resolve(const PlayerTable& players, const std::string& name, std::string_view context) {
    if (auto id = players.find(name)) return *id;
    throw InvalidArgument(std::string(context) + ": unknown name '" + name + "' (not in ranks)");
}

} // namespace detail

/// Aggregate goals over the home and away legs decide each pair; ties go to
/// away goals, then to the higher-ranked team. p(i, j) is i's share of the
/// pair's aggregate goals, 0.5 when no goals were scored.
///
/// When `season` is given only that season's matches are used.
inline TournamentPair soccer_to_tournaments(const std::vector<MatchRecord>& matches, const RankingTable& ranks,
                                            const std::optional<std::string>& season = std::nullopt) {
    const auto players = players_from(ranks);
    const auto n = players.size();
    // leg[i][j]: (goals of home side i, goals of away side j) when i hosted j.
    std::vector<std::vector<std::optional<std::pair<unsigned, unsigned>>>> leg(
        n, std::vector<std::optional<std::pair<unsigned, unsigned>>>(n));
    for (const auto& m : matches) {
        if (season && m.season != *season) continue;
        const auto h = detail::resolve(players, m.home, "matches");
        const auto a = detail::resolve(players, m.away, "matches");
        if (leg[h][a])
            throw InvalidArgument("matches: duplicate fixture " + m.home + " (home) vs " + m.away +
                                  (season ? " in season " + *season : std::string{}));
        leg[h][a] = std::pair{m.home_goals, m.away_goals};
    }
    std::string missing;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            if (i != j && !leg[i][j]) missing += (missing.empty() ? "" : "; ") + players[i].name + " (home) vs " + players[j].name;
    if (!missing.empty()) throw IncompleteData("matches: missing fixtures: " + missing);

    std::vector<std::vector<bool>> beats(n, std::vector<bool>(n, false));
    std::vector<std::vector<double>> p(n, std::vector<double>(n, 0.5));
    TournamentPair out;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto [i_home, j_away] = *leg[i][j];
            const auto [j_home, i_away] = *leg[j][i];
            const unsigned gi = i_home + i_away, gj = j_away + j_home;
            bool i_wins;
            if (gi != gj)
                i_wins = gi > gj;
            else if (i_away != j_away)
                i_wins = i_away > j_away;
            else
                i_wins = players.ranked_above(i, j);
            beats[i][j] = i_wins;
            beats[j][i] = !i_wins;
            if (gi + gj == 0) {
                out.imputed_pairs.emplace_back(players[i].name, players[j].name);
            } else {
                p[i][j] = static_cast<double>(gi) / static_cast<double>(gi + gj);
                p[j][i] = 1.0 - p[i][j];
            }
        }
    out.deterministic = DeterministicTournament(players, std::move(beats));
    out.probabilistic = ProbabilisticTournament(players, std::move(p));
    return out;
}

/// Lifetime head-to-head records: i beats j iff i won more than half of
/// their meetings; even records and never-met pairs go to the higher-ranked
/// player. p(i, j) is i's share of the meetings, 0.5 when they never met.
/// Several records for the same pair are summed.
inline TournamentPair tennis_to_tournaments(const std::vector<HeadToHeadRecord>& records, const RankingTable& ranks) {
    const auto players = players_from(ranks);
    const auto n = players.size();
    std::vector<std::vector<std::uint64_t>> wins(n, std::vector<std::uint64_t>(n, 0));
    for (const auto& h : records) {
        const auto a = detail::resolve(players, h.player_a, "h2h");
        const auto b = detail::resolve(players, h.player_b, "h2h");
        if (a == b) throw InvalidArgument("h2h: player '" + h.player_a + "' plays itself");
        wins[a][b] += h.a_wins;
        wins[b][a] += h.b_wins;
    }
    std::vector<std::vector<bool>> beats(n, std::vector<bool>(n, false));
    std::vector<std::vector<double>> p(n, std::vector<double>(n, 0.5));
    TournamentPair out;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            const auto wi = wins[i][j], wj = wins[j][i];
            const bool i_wins = wi != wj ? wi > wj : players.ranked_above(i, j);
            beats[i][j] = i_wins;
            beats[j][i] = !i_wins;
            if (wi + wj == 0) {
                out.imputed_pairs.emplace_back(players[i].name, players[j].name);
            } else {
                p[i][j] = static_cast<double>(wi) / static_cast<double>(wi + wj);
                p[j][i] = 1.0 - p[i][j];
            }
        }
    out.deterministic = DeterministicTournament(players, std::move(beats));
    out.probabilistic = ProbabilisticTournament(players, std::move(p));
    return out;
}

/// Probability file: the deterministic view rounds each pair to its
/// favourite, with exact 0.5 going to the higher-ranked player.
inline TournamentPair pairs_to_tournaments(const std::vector<PairRecord>& pairs) {
    std::map<unsigned, std::string> by_rank;
    auto note = [&](unsigned rank, const std::string& name) {
        auto [it, inserted] = by_rank.emplace(rank, name);
        if (!inserted && it->second != name)
            throw InvalidArgument("pairs: rank " + std::to_string(rank) + " is given to both '" + it->second +
                                  "' and '" + name + "'");
    };
    for (const auto& p : pairs) {
        note(p.rank_a, p.player_a);
        note(p.rank_b, p.player_b);
    }
    RankingTable ranks;
    unsigned expect = 1;
    for (auto& [rank, name] : by_rank) {
        if (rank != expect++) throw InvalidArgument("pairs: ranks must be 1..n without gaps");
        ranks.names.push_back(name);
    }
    const auto players = players_from(ranks);
    const auto n = players.size();
    std::vector<std::vector<std::optional<double>>> given(n, std::vector<std::optional<double>>(n));
    for (const auto& rec : pairs) {
        const auto a = detail::resolve(players, rec.player_a, "pairs");
        const auto b = detail::resolve(players, rec.player_b, "pairs");
        if (a == b) throw InvalidArgument("pairs: player '" + rec.player_a + "' paired with itself");
        if (given[a][b]) throw InvalidArgument("pairs: duplicate pair " + rec.player_a + " vs " + rec.player_b);
        given[a][b] = rec.p_ab;
        given[b][a] = 1.0 - rec.p_ab;
    }
    std::vector<std::vector<double>> p(n, std::vector<double>(n, 0.5));
    std::string missing;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            if (!given[i][j]) {
                if (i < j) missing += (missing.empty() ? "" : "; ") + players[i].name + " vs " + players[j].name;
                continue;
            }
            p[i][j] = *given[i][j];
        }
    if (!missing.empty()) throw IncompleteData("pairs: missing pairs: " + missing);
    TournamentPair out;
    out.probabilistic = ProbabilisticTournament(players, p);
    out.deterministic = DeterministicTournament::from_relation(players, [&](std::size_t i, std::size_t j) {
        return p[i][j] != 0.5 ? p[i][j] > 0.5 : players.ranked_above(i, j);
    });
    return out;
}

// ---------------------------------------------------------------------------
// Removing players

inline void require_droppable(std::size_t n, PlayerId player) {
    if (player >= n) throw InvalidArgument("drop_player: no player with id " + std::to_string(player));
    if (n < 3) throw InvalidArgument("drop_player: at least two players must remain");
}

/// Removes one player; the others keep their relations, ids are compacted
/// and ranks renumbered in order.
inline DeterministicTournament drop_player(const DeterministicTournament& t, PlayerId player) {
    require_droppable(t.size(), player);
    return t.without(player);
}

inline ProbabilisticTournament drop_player(const ProbabilisticTournament& t, PlayerId player) {
    require_droppable(t.size(), player);
    return t.without(player);
}

inline TournamentPair drop_player(const TournamentPair& t, PlayerId player) {
    require_droppable(t.deterministic.size(), player);
    const auto name = t.deterministic.players()[player].name;
    TournamentPair out{drop_player(t.deterministic, player), drop_player(t.probabilistic, player), {}};
    for (const auto& pr : t.imputed_pairs)
        if (pr.first != name && pr.second != name) out.imputed_pairs.push_back(pr);
    return out;
}

} // namespace knockout

#endif // KNOCKOUT_INGEST_HPP
