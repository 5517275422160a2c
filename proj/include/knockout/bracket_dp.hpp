#ifndef KNOCKOUT_BRACKET_DP_HPP
#define KNOCKOUT_BRACKET_DP_HPP

#include <knockout/core.hpp>
#include <knockout/detail/bits.hpp>

#include <cstddef>
#include <string>
#include <vector>

namespace knockout {

/// Largest player count for the dense subset tables (2^n * n entries).
inline constexpr std::size_t kMaxSubsetDpPlayers = 16;

/// Sums a per-match weight over every draw of the full player set.
///
/// For a subset S of power-of-two size and a member i, the table holds
///
///     V({i}, i) = 1
///     V(S, i)   = sum over halvings {A, B} of S with i in A of
///                 V(A, i) * sum_{j in B} weight(i, j) * V(B, j)
///
/// With a 0/1 "beats" weight V(S, i) counts the draws of S won by i; with
/// win probabilities it is the total probability of i winning, summed over
/// the draws of S. Each unordered halving is visited once, so every draw
/// is counted once. Subsets of equal size are independent and may be
/// processed by several workers; results do not depend on the worker count.
template <class T, class Weight>
std::vector<T> bracket_dp(std::size_t n, Weight&& weight, unsigned workers = 1) {
    using detail::Mask;
    require_power_of_two(n, "bracket_dp");
    if (n > kMaxSubsetDpPlayers)
        throw ResourceLimit("subset dynamic programming supports at most " + std::to_string(kMaxSubsetDpPlayers) +
                            " players (2^16 subsets); got " + std::to_string(n));

    const Mask all = detail::full_mask(n);
    std::vector<T> table((std::size_t{1} << n) * n, T{0});
    auto at = [&](Mask s, std::size_t i) -> T& { return table[static_cast<std::size_t>(s) * n + i]; };

    for (std::size_t i = 0; i < n; ++i) at(detail::bit(i), i) = T{1};

    for (std::size_t size = 2; size <= n; size *= 2) {
        std::vector<Mask> layer;
        detail::for_each_subset_of_size(all, static_cast<int>(size), [&](Mask s) {
            layer.push_back(s);
            return true;
        });
        detail::parallel_for(layer.size(), workers, [&](std::size_t begin, std::size_t end, unsigned) {
            for (std::size_t k = begin; k < end; ++k) {
                const Mask s = layer[k];
                detail::for_each_halving(s, detail::lowest_index(s), [&](Mask a, Mask b) {
                    // Each side's winner meets the other side's winner in the final.
                    auto accumulate = [&](Mask mine, Mask theirs) {
                        detail::for_each_bit(mine, [&](std::size_t i) {
                            const T& reach = at(mine, i);
                            if (reach == T{0}) return;
                            T beat_final{0};
                            detail::for_each_bit(theirs, [&](std::size_t j) {
                                beat_final += static_cast<T>(weight(i, j)) * at(theirs, j);
                            });
                            at(s, i) += reach * beat_final;
                        });
                    };
                    accumulate(a, b);
                    accumulate(b, a);
                    return true;
                });
            }
        });
    }

    std::vector<T> result(n);
    for (std::size_t i = 0; i < n; ++i) result[i] = at(all, i);
    return result;
}

} // namespace knockout

#endif // KNOCKOUT_BRACKET_DP_HPP
