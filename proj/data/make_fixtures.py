#!/usr/bin/env python3
"""Regenerates the synthetic fixtures in this directory and their expected outputs.

Everything here is independent of the C++ library: rounding rules, draw
enumeration and win counting are reimplemented from scratch. Run from any
directory; output is deterministic.
"""

import csv
import itertools
import math
import random
from collections import defaultdict
from fractions import Fraction
from pathlib import Path

HERE = Path(__file__).resolve().parent


def write_csv(path, header, rows, quoted):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as f:
        f.write(",".join(header) + "\n")
        for row in rows:
            cells = []
            for value, q in zip(row, quoted):
                if q:
                    cells.append('"' + str(value).replace('"', '""') + '"')
                elif isinstance(value, float):
                    cells.append(repr(value))
                else:
                    cells.append(str(value))
            f.write(",".join(cells) + "\n")


def write_ranks(path, names):
    write_csv(path, ["rank", "name"], [(k + 1, n) for k, n in enumerate(names)], [False, True])


# --- rounding rules -------------------------------------------------------


def soccer(matches, names, season):
    idx = {n: k for k, n in enumerate(names)}
    leg = {}
    for s, home, away, hg, ag in matches:
        if s == season:
            leg[(idx[home], idx[away])] = (hg, ag)
    n = len(names)
    beats = [[False] * n for _ in range(n)]
    p = [[Fraction(1, 2)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            i_home, j_away = leg[(i, j)]
            j_home, i_away = leg[(j, i)]
            gi, gj = i_home + i_away, j_home + j_away
            if gi != gj:
                win = gi > gj
            elif i_away != j_away:
                win = i_away > j_away
            else:
                win = True  # i is ranked above j
            beats[i][j], beats[j][i] = win, not win
            if gi + gj:
                p[i][j] = Fraction(gi, gi + gj)
                p[j][i] = 1 - p[i][j]
    return beats, p


def tennis(records, names):
    idx = {n: k for k, n in enumerate(names)}
    n = len(names)
    wins = [[0] * n for _ in range(n)]
    for a, b, wa, wb in records:
        wins[idx[a]][idx[b]] += wa
        wins[idx[b]][idx[a]] += wb
    beats = [[False] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            win = wins[i][j] > wins[j][i] if wins[i][j] != wins[j][i] else True
            beats[i][j], beats[j][i] = win, not win
    return beats


def drop(beats, k):
    keep = [i for i in range(len(beats)) if i != k]
    return [[beats[i][j] for j in keep] for i in keep]


# --- oracles --------------------------------------------------------------


def all_draws(players):
    """Every unordered draw, as nested pairs, generated top-down."""
    if len(players) == 1:
        yield players[0]
        return
    first, rest = players[0], players[1:]
    half = len(players) // 2
    for others in itertools.combinations(rest, half - 1):
        left = [first, *others]
        right = [x for x in rest if x not in others]
        for l in all_draws(left):
            for r in all_draws(right):
                yield (l, r)


def winner(draw, beats):
    if not isinstance(draw, tuple):
        return draw
    a, b = winner(draw[0], beats), winner(draw[1], beats)
    return a if beats[a][b] else b


def distribution(draw, p):
    if not isinstance(draw, tuple):
        return {draw: Fraction(1)}
    left, right = distribution(draw[0], p), distribution(draw[1], p)
    out = defaultdict(Fraction)
    for a, pa in left.items():
        for b, pb in right.items():
            out[a] += pa * pb * p[a][b]
            out[b] += pa * pb * p[b][a]
    return out


def brute_counts(beats):
    n = len(beats)
    counts = [0] * n
    for d in all_draws(list(range(n))):
        counts[winner(d, beats)] += 1
    return counts


def subset_counts(beats):
    """Winner tallies over every power-of-two subset, smallest first."""
    n = len(beats)
    table = {frozenset([i]): {i: 1} for i in range(n)}
    size = 2
    while size <= n:
        for subset in itertools.combinations(range(n), size):
            lowest, rest = subset[0], subset[1:]
            tally = defaultdict(int)
            for others in itertools.combinations(rest, size // 2 - 1):
                left = frozenset((lowest, *others))
                right = frozenset(subset) - left
                for a, ca in table[left].items():
                    for b, cb in table[right].items():
                        tally[a if beats[a][b] else b] += ca * cb
            table[frozenset(subset)] = dict(tally)
        size *= 2
    full = table[frozenset(range(n))]
    return [full.get(i, 0) for i in range(n)]


def kings(beats):
    n = len(beats)
    out = []
    for i in range(n):
        if all(j == i or beats[i][j] or any(beats[i][k] and beats[k][j] for k in range(n)) for j in range(n)):
            out.append(i)
    return out


# --- fixtures -------------------------------------------------------------


def poisson(rng, lam):
    limit, k, prod = math.exp(-lam), 0, rng.random()
    while prod > limit:
        k += 1
        prod *= rng.random()
    return k


def league(rng, names, seasons):
    strength = {n: 1.6 - 0.06 * k + rng.uniform(-0.2, 0.2) for k, n in enumerate(names)}
    rows = []
    for season in seasons:
        for home in names:
            for away in names:
                if home != away:
                    rows.append((season, home, away,
                                 poisson(rng, max(0.2, 0.25 + strength[home] - 0.6 * strength[away])),
                                 poisson(rng, max(0.2, strength[away] - 0.6 * strength[home]))))
    return rows


def write_expected_counts(path, names, counts):
    write_csv(path, ["rank", "name", "seedings_won"], [(k + 1, n, c) for k, (n, c) in enumerate(zip(names, counts))],
              [False, True, False])


def main():
    rng = random.Random(20140201)
    expected = HERE / "expected"

    # Four players: 0 > 1 > 2 > 0 and everyone beats 3.
    cycle = ["p0", "p1", "p2", "p3"]
    h2h = [("p0", "p1", 3, 1), ("p1", "p2", 3, 1), ("p2", "p0", 3, 1),
           ("p0", "p3", 2, 0), ("p1", "p3", 2, 0), ("p2", "p3", 2, 0)]
    write_csv(HERE / "cycle4" / "h2h.csv", ["player_a", "player_b", "a_wins", "b_wins"], h2h, [True, True, False, False])
    write_ranks(HERE / "cycle4" / "ranks.csv", cycle)
    beats = tennis(h2h, cycle)
    write_expected_counts(expected / "cycle4_count.csv", cycle, brute_counts(beats))
    write_csv(expected / "cycle4_kings.csv", ["rank", "name"], [(k + 1, cycle[k]) for k in kings(beats)], [False, True])

    # Eight-team double round robin; expected values by full enumeration.
    clubs8 = ["Harbour City", "Northgate", "Athletic, B", "Riverside", "Old Town", "Vale United", "Castle FC", "Mill Lane"]
    matches8 = league(rng, clubs8, ["2014"])
    write_csv(HERE / "league8" / "matches.csv", ["season", "home", "away", "home_goals", "away_goals"], matches8,
              [True, True, True, False, False])
    write_ranks(HERE / "league8" / "ranks.csv", clubs8)
    beats8, p8 = soccer(matches8, clubs8, "2014")
    write_expected_counts(expected / "league8_count.csv", clubs8, brute_counts(beats8))
    draws = list(all_draws(list(range(8))))
    total = defaultdict(Fraction)
    for d in draws:
        for i, v in distribution(d, p8).items():
            total[i] += v
    write_csv(expected / "league8_winprob.csv", ["rank", "name", "p_win"],
              [(k + 1, clubs8[k], float(total[k] / len(draws))) for k in range(8)], [False, True, False])

    # Sixteen-team league over two seasons.
    clubs16 = [f"Club {chr(ord('A') + k)}" for k in range(16)]
    matches16 = league(rng, clubs16, ["2013", "2014"])
    write_csv(HERE / "league16" / "matches.csv", ["season", "home", "away", "home_goals", "away_goals"], matches16,
              [True, True, True, False, False])
    write_ranks(HERE / "league16" / "ranks.csv", clubs16)
    beats16, _ = soccer(matches16, clubs16, "2014")
    write_expected_counts(expected / "league16_2014_count.csv", clubs16, subset_counts(beats16))

    # Seventeen players: the top one beats everyone; some pairs tie or never met.
    pros = [f"Pro {k:02d}" for k in range(1, 18)]
    records = []
    for i in range(17):
        for j in range(i + 1, 17):
            if i == 0:
                records.append((pros[i], pros[j], rng.randint(2, 9), rng.randint(0, 1)))
                continue
            roll = rng.random()
            if roll < 0.1:
                continue  # never met
            if roll < 0.2:
                w = rng.randint(1, 3)
                records.append((pros[i], pros[j], w, w))
                continue
            bias = 0.5 + 0.02 * (j - i)
            games = rng.randint(2, 12)
            wi = sum(rng.random() < bias for _ in range(games))
            if rng.random() < 0.5:
                records.append((pros[i], pros[j], wi, games - wi))
            else:
                records.append((pros[j], pros[i], games - wi, wi))
    write_csv(HERE / "tennis17" / "h2h.csv", ["player_a", "player_b", "a_wins", "b_wins"], records,
              [True, True, False, False])
    write_ranks(HERE / "tennis17" / "ranks.csv", pros)
    beats17 = tennis(records, pros)
    without_top = drop(beats17, 0)
    write_expected_counts(expected / "tennis17_drop_top_count.csv", pros[1:], subset_counts(without_top))
    write_csv(expected / "tennis17_drop_top_kings.csv", ["rank", "name"],
              [(k + 1, pros[1:][k]) for k in kings(without_top)], [False, True])

    # Log-normal sample for the fit command.
    values = [rng.lognormvariate(-4.0717, 1.2611) for _ in range(5000)]
    write_csv(HERE / "samples" / "lognormal.csv", ["value"], [(v,) for v in values], [False])


if __name__ == "__main__":
    main()
