#ifndef KNOCKOUT_WINPROB_HPP
#define KNOCKOUT_WINPROB_HPP

#include <knockout/bracket_dp.hpp>
#include <knockout/core.hpp>
#include <knockout/detail/bits.hpp>

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace knockout {

enum class WinProbMethod { exact, sampled };

enum class SamplingMode {
    per_draw_exact,  ///< average the exact win probabilities of each sampled draw
    full_simulation, ///< play every match of each sampled draw and average the champion indicator
};

inline constexpr std::uint64_t kDefaultSamples = 200'000;

/// Probability of each player (by id) winning a uniformly random draw.
struct WinProbVector {
    std::vector<double> p;
    WinProbMethod method = WinProbMethod::exact;
    SamplingMode mode = SamplingMode::per_draw_exact; ///< meaningful when sampled
    std::uint64_t samples = 0;
};

inline std::string_view to_string(WinProbMethod m) { return m == WinProbMethod::exact ? "exact" : "sampled"; }
inline std::string_view to_string(SamplingMode m) {
    return m == SamplingMode::per_draw_exact ? "per-draw-exact" : "full-simulation";
}

/// Exact average over all n!/2^(n-1) draws via the subset recursion.
inline WinProbVector exact_uniform_win_probs(const ProbabilisticTournament& t, unsigned workers = 1) {
    const auto n = t.size();
    auto weighted = bracket_dp<double>(n, [&](std::size_t i, std::size_t j) { return t.p(i, j); }, workers);
    const double draws = num_draws(n).convert_to<double>();
    for (auto& v : weighted) v /= draws;
    return {std::move(weighted), WinProbMethod::exact, SamplingMode::per_draw_exact, 0};
}

namespace detail {

/// Neumaier-compensated running sums, one per player.
class CompensatedSums {
public:
    explicit CompensatedSums(std::size_t n) : sum_(n, 0.0), carry_(n, 0.0) {}

    void add(std::size_t i, double x) {
        const double t = sum_[i] + x;
        if (std::abs(sum_[i]) >= std::abs(x))
            carry_[i] += (sum_[i] - t) + x;
        else
            carry_[i] += (x - t) + sum_[i];
        sum_[i] = t;
    }

    void add(const CompensatedSums& other) {
        for (std::size_t i = 0; i < sum_.size(); ++i) {
            add(i, other.sum_[i]);
            carry_[i] += other.carry_[i];
        }
    }

    double total(std::size_t i) const { return sum_[i] + carry_[i]; }

private:
    std::vector<double> sum_, carry_;
};

/// Champion of one realization of every match in the draw.
template <class URBG>
PlayerId play_out(const Draw& draw, const ProbabilisticTournament& t, URBG& rng) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<PlayerId> alive(draw.leaves().begin(), draw.leaves().end());
    while (alive.size() > 1) {
        for (std::size_t k = 0; k < alive.size() / 2; ++k) {
            const PlayerId a = alive[2 * k], b = alive[2 * k + 1];
            alive[k] = unit(rng) < t.p(a, b) ? a : b;
        }
        alive.resize(alive.size() / 2);
    }
    return alive.front();
}

} // namespace detail

/// Monte Carlo estimate over uniformly sampled draws.
///
/// Worker w draws brackets from an engine seeded with (seed, w, 0) and,
/// in full-simulation mode, match outcomes from a separate engine seeded
/// with (seed, w, 1); both modes therefore see the same draws for a given
/// (seed, workers). Worker sums are reduced in worker order, so output is
/// reproducible for a fixed worker count. Different worker counts give
/// different (equally valid) sample paths.
inline WinProbVector sample_uniform_win_probs(const ProbabilisticTournament& t, std::uint64_t samples,
                                              std::uint64_t seed, SamplingMode mode = SamplingMode::per_draw_exact,
                                              unsigned workers = 1) {
    if (samples == 0) throw InvalidArgument("sample count must be at least 1");
    const auto n = t.size();
    require_power_of_two(n, "sample_uniform_win_probs");
    workers = detail::resolve_workers(workers);
    if (workers > samples) workers = static_cast<unsigned>(samples);

    std::vector<detail::CompensatedSums> partial(workers, detail::CompensatedSums(n));
    detail::parallel_for(samples, workers, [&](std::size_t begin, std::size_t end, unsigned w) {
        const auto lo = static_cast<std::uint32_t>(seed), hi = static_cast<std::uint32_t>(seed >> 32);
        std::seed_seq draw_seq{lo, hi, w, 0u};
        std::seed_seq match_seq{lo, hi, w, 1u};
        std::mt19937_64 draw_rng(draw_seq), match_rng(match_seq);
        auto& acc = partial[w];
        for (std::size_t s = begin; s < end; ++s) {
            const Draw draw = random_draw(n, draw_rng);
            if (mode == SamplingMode::per_draw_exact) {
                const auto probs = draw_win_probabilities(draw, t);
                for (std::size_t i = 0; i < n; ++i) acc.add(i, probs[i]);
            } else {
                acc.add(detail::play_out(draw, t, match_rng), 1.0);
            }
        }
    });

    detail::CompensatedSums total(n);
    for (const auto& part : partial) total.add(part);
    WinProbVector out{std::vector<double>(n), WinProbMethod::sampled, mode, samples};
    for (std::size_t i = 0; i < n; ++i) out.p[i] = total.total(i) / static_cast<double>(samples);
    return out;
}

} // namespace knockout

#endif // KNOCKOUT_WINPROB_HPP
