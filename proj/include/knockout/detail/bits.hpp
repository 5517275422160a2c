#ifndef KNOCKOUT_DETAIL_BITS_HPP
#define KNOCKOUT_DETAIL_BITS_HPP

#include <bit>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <memory>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

namespace knockout::detail {

/// Player subset as a bit mask; bracket searches stay within 32 players.
using Mask = std::uint32_t;
inline constexpr std::size_t kMaxMaskPlayers = 32;

constexpr Mask bit(std::size_t i) noexcept { return Mask{1} << i; }
constexpr int popcount(Mask m) noexcept { return std::popcount(m); }
constexpr std::size_t lowest_index(Mask m) noexcept { return static_cast<std::size_t>(std::countr_zero(m)); }
constexpr Mask full_mask(std::size_t n) noexcept { return n >= 32 ? ~Mask{0} : (Mask{1} << n) - 1; }

/// Calls fn(i) for each set bit, lowest first.
template <class Fn>
constexpr void for_each_bit(Mask m, Fn&& fn) {
    while (m) {
        fn(lowest_index(m));
        m &= m - 1;
    }
}

/// Visits every k-element subset of `universe` in increasing order of the
/// subset's compressed index; fn returns false to stop early. Returns false
/// when stopped.
template <class Fn>
bool for_each_subset_of_size(Mask universe, int k, Fn&& fn) {
    const int m = popcount(universe);
    if (k < 0 || k > m) return true;
    std::size_t members[kMaxMaskPlayers];
    std::size_t count = 0;
    for_each_bit(universe, [&](std::size_t i) { members[count++] = i; });
    if (k == 0) return fn(Mask{0});
    // Gosper's hack over compressed positions 0..m-1.
    std::uint64_t c = (std::uint64_t{1} << k) - 1;
    const std::uint64_t limit = std::uint64_t{1} << m;
    while (c < limit) {
        Mask subset = 0;
        for (std::uint64_t x = c; x; x &= x - 1) subset |= bit(members[std::countr_zero(x)]);
        if (!fn(subset)) return false;
        const std::uint64_t lo = c & (~c + 1);
        const std::uint64_t ripple = c + lo;
        c = (((ripple ^ c) >> 2) / lo) | ripple;
    }
    return true;
}

/// Visits each unordered split of `s` into two equal halves exactly once as
/// fn(a, b), where a is the half containing player `anchor`.
template <class Fn>
bool for_each_halving(Mask s, std::size_t anchor, Fn&& fn) {
    const Mask rest = s & ~bit(anchor);
    const int want = popcount(s) / 2 - 1;
    return for_each_subset_of_size(rest, want, [&](Mask x) {
        const Mask a = x | bit(anchor);
        return fn(a, s ^ a);
    });
}

/// Non-owning callable reference; cheap to pass down recursive searches.
template <class Sig>
class FunctionRef;

template <class R, class... Args>
class FunctionRef<R(Args...)> {
public:
    template <class F>
        requires(!std::is_same_v<std::remove_cvref_t<F>, FunctionRef>)
    FunctionRef(F&& f) noexcept // NOLINT(google-explicit-constructor)
        : obj_(const_cast<void*>(static_cast<const void*>(std::addressof(f)))),
          call_([](void* o, Args... args) -> R {
              return (*static_cast<std::remove_reference_t<F>*>(o))(std::forward<Args>(args)...);
          }) {}

    R operator()(Args... args) const { return call_(obj_, std::forward<Args>(args)...); }

private:
    void* obj_;
    R (*call_)(void*, Args...);
};

inline unsigned resolve_workers(unsigned requested) {
    if (requested != 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Runs fn(begin, end, worker) over a static partition of [0, count).
/// The partition depends only on (count, workers), so per-worker results
/// reduced in worker order are reproducible.
template <class Fn>
void parallel_for(std::size_t count, unsigned workers, Fn&& fn) {
    workers = resolve_workers(workers);
    if (workers <= 1 || count < 2) {
        fn(std::size_t{0}, count, 0u);
        return;
    }
    if (workers > count) workers = static_cast<unsigned>(count);
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(workers);
    threads.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t begin = count * w / workers;
        const std::size_t end = count * (w + 1) / workers;
        threads.emplace_back([&, begin, end, w] {
            try {
                fn(begin, end, w);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& th : threads) th.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace knockout::detail

#endif // KNOCKOUT_DETAIL_BITS_HPP
