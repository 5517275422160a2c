#ifndef KNOCKOUT_STATS_HPP
#define KNOCKOUT_STATS_HPP

#include <knockout/core.hpp>
#include <knockout/crmodel.hpp>
#include <knockout/detail/bits.hpp>
#include <knockout/winprob.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace knockout {

/// Positive reals kept in ascending order.
class EmpiricalSample {
public:
    EmpiricalSample() = default;

    explicit EmpiricalSample(std::vector<double> values, std::string label = {})
        : values_(std::move(values)), label_(std::move(label)) {
        for (double v : values_)
            if (!(v > 0.0) || !std::isfinite(v))
                throw InvalidArgument("sample '" + label_ + "' holds a non-positive or non-finite value " +
                                      std::to_string(v));
        std::sort(values_.begin(), values_.end());
    }

    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }
    const std::vector<double>& values() const noexcept { return values_; }
    const std::string& label() const noexcept { return label_; }
    double min() const { return values_.front(); }
    double max() const { return values_.back(); }

private:
    std::vector<double> values_;
    std::string label_;
};

// ---------------------------------------------------------------------------
// Empirical distribution functions

struct StepPoint {
    double x;
    double y;
};

/// The CCDF is reported as the strict tail, so that it equals 1 - F.
inline constexpr std::string_view kCcdfConvention = "P(X > x)";

inline void require_nonempty(const EmpiricalSample& s, std::string_view what) {
    if (s.empty()) throw InvalidArgument(std::string(what) + ": sample '" + s.label() + "' is empty");
}

/// Right-continuous ECDF as one point per distinct value: F(x) = #{v <= x} / m.
inline std::vector<StepPoint> ecdf_points(const EmpiricalSample& s) {
    require_nonempty(s, "ecdf");
    const auto& v = s.values();
    const double m = static_cast<double>(v.size());
    std::vector<StepPoint> out;
    for (std::size_t k = 0; k < v.size(); ++k)
        if (k + 1 == v.size() || v[k + 1] != v[k]) out.push_back({v[k], static_cast<double>(k + 1) / m});
    return out;
}

inline std::vector<StepPoint> ccdf_points(const EmpiricalSample& s) {
    auto pts = ecdf_points(s);
    for (auto& p : pts) p.y = 1.0 - p.y;
    return pts;
}

// ---------------------------------------------------------------------------
// Two-sample Kolmogorov-Smirnov

enum class KsMethod { automatic, asymptotic, exact_permutation };

inline std::string_view to_string(KsMethod m) {
    switch (m) {
    case KsMethod::asymptotic: return "asymptotic";
    case KsMethod::exact_permutation: return "exact-permutation";
    default: return "automatic";
    }
}

/// Pooled sizes up to this use the exact permutation distribution by default.
inline constexpr std::size_t kExactKsPooledLimit = 32;

struct KsResult {
    double d = 0.0;
    double p_value = 1.0;
    KsMethod method = KsMethod::asymptotic;
};

/// Kolmogorov distribution survival function Q(lambda) = P(K > lambda).
inline double kolmogorov_survival(double lambda) {
    if (lambda <= 0.0) return 1.0;
    constexpr double pi = std::numbers::pi;
    if (lambda < 1.18) {
        // Theta-function form converges fast for small lambda.
        const double w = std::sqrt(2.0 * pi) / lambda;
        const double r = pi * pi / (8.0 * lambda * lambda);
        double cdf = 0.0;
        for (int k = 1; k <= 9; k += 2) cdf += std::exp(-static_cast<double>(k * k) * r);
        return std::clamp(1.0 - w * cdf, 0.0, 1.0);
    }
    double q = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        q += (k % 2 == 1 ? 2.0 : -2.0) * term;
        if (term < 1e-18) break;
    }
    return std::clamp(q, 0.0, 1.0);
}

namespace detail {

/// Pooled sample in ascending order as tie blocks: (count from a, count from b).
inline std::vector<std::pair<std::size_t, std::size_t>> tie_blocks(const EmpiricalSample& a, const EmpiricalSample& b) {
    std::vector<std::pair<std::size_t, std::size_t>> blocks;
    const auto& va = a.values();
    const auto& vb = b.values();
    std::size_t i = 0, j = 0;
    while (i < va.size() || j < vb.size()) {
        const double x = (j == vb.size() || (i < va.size() && va[i] <= vb[j])) ? va[i] : vb[j];
        std::pair<std::size_t, std::size_t> blk{0, 0};
        while (i < va.size() && va[i] == x) ++i, ++blk.first;
        while (j < vb.size() && vb[j] == x) ++j, ++blk.second;
        blocks.push_back(blk);
    }
    return blocks;
}

/// KS statistic scaled by n_a * n_b, so it is an exact integer.
inline std::int64_t scaled_ks_statistic(const std::vector<std::pair<std::size_t, std::size_t>>& blocks,
                                        std::int64_t na, std::int64_t nb) {
    std::int64_t i = 0, j = 0, best = 0;
    for (const auto& [ca, cb] : blocks) {
        i += static_cast<std::int64_t>(ca);
        j += static_cast<std::int64_t>(cb);
        best = std::max(best, std::abs(i * nb - j * na));
    }
    return best;
}

/// P(D >= observed) over all C(N, n_a) equally likely splits of the pooled
/// sample, counted by a lattice-path recursion. Ties are honoured by
/// checking the statistic only at the end of each tie block.
inline double ks_permutation_p_value(const std::vector<std::pair<std::size_t, std::size_t>>& blocks,
                                     std::int64_t na, std::int64_t nb, std::int64_t observed) {
    // paths[i]: number of ways to have placed i of the first s pooled values in a
    // (and s - i in b) without reaching the observed statistic at a block end.
    std::vector<long double> paths(static_cast<std::size_t>(na) + 1, 0.0L), next(paths.size());
    paths[0] = 1.0L;
    std::int64_t placed = 0;
    for (const auto& [ca, cb] : blocks) {
        const auto width = static_cast<std::int64_t>(ca + cb);
        for (std::int64_t step = 0; step < width; ++step) {
            std::fill(next.begin(), next.end(), 0.0L);
            for (std::int64_t i = 0; i <= na; ++i) {
                const long double c = paths[static_cast<std::size_t>(i)];
                if (c == 0.0L) continue;
                const std::int64_t j = placed - i;
                if (i + 1 <= na) next[static_cast<std::size_t>(i + 1)] += c;
                if (j + 1 <= nb) next[static_cast<std::size_t>(i)] += c;
            }
            paths.swap(next);
            ++placed;
        }
        for (std::int64_t i = 0; i <= na; ++i) {
            const std::int64_t j = placed - i;
            if (j < 0 || j > nb || std::abs(i * nb - j * na) >= observed) paths[static_cast<std::size_t>(i)] = 0.0L;
        }
    }
    long double total = 1.0L; // C(N, na)
    for (std::int64_t k = 1; k <= na; ++k) total = total * static_cast<long double>(nb + k) / static_cast<long double>(k);
    const long double below = paths[static_cast<std::size_t>(na)];
    return static_cast<double>(std::clamp(1.0L - below / total, 0.0L, 1.0L));
}

} // namespace detail

/// Two-sample KS test. `automatic` uses the exact permutation distribution
/// when the pooled size is at most 32 and the Kolmogorov asymptotic with
/// effective size n_a n_b / (n_a + n_b) otherwise.
inline KsResult ks_two_sample(const EmpiricalSample& a, const EmpiricalSample& b,
                              KsMethod method = KsMethod::automatic) {
    require_nonempty(a, "ks_two_sample");
    require_nonempty(b, "ks_two_sample");
    const auto na = static_cast<std::int64_t>(a.size());
    const auto nb = static_cast<std::int64_t>(b.size());
    const auto blocks = detail::tie_blocks(a, b);
    const std::int64_t scaled = detail::scaled_ks_statistic(blocks, na, nb);

    KsResult r;
    r.d = static_cast<double>(scaled) / static_cast<double>(na * nb);
    if (method == KsMethod::automatic)
        method = a.size() + b.size() <= kExactKsPooledLimit ? KsMethod::exact_permutation : KsMethod::asymptotic;
    r.method = method;
    if (method == KsMethod::exact_permutation) {
        r.p_value = detail::ks_permutation_p_value(blocks, na, nb, scaled);
    } else {
        const double effective = static_cast<double>(na * nb) / static_cast<double>(na + nb);
        r.p_value = kolmogorov_survival(std::sqrt(effective) * r.d);
    }
    return r;
}

// ---------------------------------------------------------------------------
// Condorcet Random acceptance scan

struct ScanStep {
    double pr_b = 0.0;
    KsResult ks;
    bool accepted = false;
};

struct ScanResult {
    std::vector<ScanStep> steps;
    std::optional<double> min_accepted;
    std::optional<double> max_accepted;
    std::optional<double> average_upset; ///< of the reference data, when known
    double step = 0.01;
    double threshold = 0.05;
};

struct ScanOptions {
    double step = 0.01;
    double threshold = 0.05;
    KsMethod method = KsMethod::automatic;
    unsigned workers = 1;
};

/// Upset probabilities step, 2 step, ..., up to 0.5.
inline std::vector<double> scan_grid(double step) {
    if (!(step > 0.0 && step <= 0.5)) throw InvalidArgument("scan step must lie in (0, 0.5]");
    const auto count = static_cast<std::size_t>(std::floor(0.5 / step + 1e-9));
    std::vector<double> grid;
    grid.reserve(count);
    for (std::size_t k = 1; k <= count; ++k) grid.push_back(std::min(0.5, static_cast<double>(k) * step));
    return grid;
}

/// KS-tests the reference win probabilities against the exact uniform-draw
/// win probabilities of the CR model at every grid point; accepted iff
/// p >= threshold.
inline ScanResult scan_cr(const EmpiricalSample& reference, std::size_t n, const ScanOptions& options = {},
                          std::optional<double> average_upset = std::nullopt) {
    require_nonempty(reference, "scan_cr");
    if (!(options.threshold > 0.0 && options.threshold < 1.0)) throw InvalidArgument("threshold must lie in (0, 1)");
    const auto grid = scan_grid(options.step);
    ScanResult out;
    out.step = options.step;
    out.threshold = options.threshold;
    out.average_upset = average_upset;
    out.steps.resize(grid.size());
    detail::parallel_for(grid.size(), options.workers, [&](std::size_t begin, std::size_t end, unsigned) {
        for (std::size_t k = begin; k < end; ++k) {
            const auto model = exact_uniform_win_probs(generate_cr({n, grid[k]}));
            const EmpiricalSample cr(model.p, "CR");
            auto& st = out.steps[k];
            st.pr_b = grid[k];
            st.ks = ks_two_sample(reference, cr, options.method);
            st.accepted = st.ks.p_value >= options.threshold;
        }
    });
    for (const auto& st : out.steps) {
        if (!st.accepted) continue;
        if (!out.min_accepted) out.min_accepted = st.pr_b;
        out.max_accepted = st.pr_b;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Heavy-tail fits

enum class FitFamily { power_law, log_normal };

inline std::string_view to_string(FitFamily f) { return f == FitFamily::power_law ? "power-law" : "log-normal"; }

/// Continuous power law p(x) = (alpha-1)/xmin (x/xmin)^-alpha on x >= xmin,
/// or log-normal with log-median mu and log-scale sigma (xmin is then the
/// sample minimum and the density is not truncated).
struct FitResult {
    FitFamily family = FitFamily::log_normal;
    double alpha = 0.0;
    double xmin = 0.0;
    double mu = 0.0;
    double sigma = 0.0;
    double log_likelihood = 0.0;
    std::size_t sample_size = 0; ///< points at or above xmin
    double ks_distance = 0.0;    ///< tail KS distance of the fitted power law (scan criterion)
};

inline double log_density(const FitResult& fit, double x) {
    if (fit.family == FitFamily::power_law)
        return std::log((fit.alpha - 1.0) / fit.xmin) - fit.alpha * std::log(x / fit.xmin);
    const double z = (std::log(x) - fit.mu) / fit.sigma;
    return -std::log(x) - std::log(fit.sigma) - 0.5 * std::log(2.0 * std::numbers::pi) - 0.5 * z * z;
}

inline double cdf(const FitResult& fit, double x) {
    if (fit.family == FitFamily::power_law)
        return x < fit.xmin ? 0.0 : 1.0 - std::pow(x / fit.xmin, 1.0 - fit.alpha);
    return 0.5 * std::erfc(-(std::log(x) - fit.mu) / (fit.sigma * std::numbers::sqrt2));
}

enum class XminMode { fixed, scan };

inline constexpr std::size_t kMinPowerLawTail = 2;

namespace detail {

inline std::vector<double> tail_of(const EmpiricalSample& s, double xmin) {
    const auto& v = s.values();
    return {std::lower_bound(v.begin(), v.end(), xmin), v.end()};
}

inline FitResult fit_power_law_tail(const std::vector<double>& tail, double xmin) {
    if (tail.size() < kMinPowerLawTail)
        throw InvalidArgument("power-law fit needs at least " + std::to_string(kMinPowerLawTail) +
                              " values at or above xmin; got " + std::to_string(tail.size()));
    double log_sum = 0.0;
    for (double x : tail) log_sum += std::log(x / xmin);
    if (!(log_sum > 0.0)) throw InvalidArgument("power-law fit is degenerate: every tail value equals xmin");
    const double m = static_cast<double>(tail.size());
    FitResult f;
    f.family = FitFamily::power_law;
    f.xmin = xmin;
    f.alpha = 1.0 + m / log_sum;
    f.sample_size = tail.size();
    f.log_likelihood = m * std::log((f.alpha - 1.0) / xmin) - f.alpha * log_sum;
    double d = 0.0;
    for (std::size_t k = 0; k < tail.size(); ++k) {
        const double model = cdf(f, tail[k]);
        d = std::max({d, static_cast<double>(k + 1) / m - model, model - static_cast<double>(k) / m});
    }
    f.ks_distance = d;
    return f;
}

} // namespace detail

/// Continuous power-law MLE, alpha = 1 + m / sum ln(x_i / xmin), over the
/// values at or above xmin.
inline FitResult fit_power_law(const EmpiricalSample& s, double xmin) {
    require_nonempty(s, "fit_power_law");
    if (!(xmin > 0.0)) throw InvalidArgument("xmin must be positive");
    return detail::fit_power_law_tail(detail::tail_of(s, xmin), xmin);
}

/// Fixed mode uses the sample minimum; scan mode picks the xmin among the
/// sample values that minimizes the KS distance between the fitted law and
/// the tail it is fitted to.
inline FitResult fit_power_law(const EmpiricalSample& s, XminMode mode = XminMode::fixed) {
    require_nonempty(s, "fit_power_law");
    if (mode == XminMode::fixed) return fit_power_law(s, s.min());
    std::optional<FitResult> best;
    const auto& v = s.values();
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (k > 0 && v[k] == v[k - 1]) continue;
        const std::vector<double> tail(v.begin() + static_cast<std::ptrdiff_t>(k), v.end());
        if (tail.size() < kMinPowerLawTail || tail.back() == tail.front()) break;
        auto f = detail::fit_power_law_tail(tail, v[k]);
        if (!best || f.ks_distance < best->ks_distance) best = f;
    }
    if (!best)
        throw InvalidArgument("power-law xmin scan found no candidate with at least " +
                              std::to_string(kMinPowerLawTail) + " distinct tail values");
    return *best;
}

/// Log-normal MLE over the full sample: mu = mean ln x, sigma = population
/// standard deviation of ln x.
inline FitResult fit_lognormal(const EmpiricalSample& s) {
    if (s.size() < 2) throw InvalidArgument("log-normal fit needs at least 2 values");
    const auto& v = s.values();
    const double m = static_cast<double>(v.size());
    double mu = 0.0;
    for (double x : v) mu += std::log(x);
    mu /= m;
    double ss = 0.0;
    for (double x : v) ss += (std::log(x) - mu) * (std::log(x) - mu);
    const double sigma = std::sqrt(ss / m);
    if (!(sigma > 0.0)) throw InvalidArgument("log-normal fit is degenerate: all values are equal (sigma = 0)");
    FitResult f;
    f.family = FitFamily::log_normal;
    f.mu = mu;
    f.sigma = sigma;
    f.xmin = s.min();
    f.sample_size = v.size();
    for (double x : v) f.log_likelihood += log_density(f, x);
    return f;
}

// ---------------------------------------------------------------------------
// Vuong likelihood ratio test

inline constexpr std::string_view kLrtConvention = "R > 0 favours the first family";

struct LrtResult {
    double r = 0.0;       ///< normalized log-likelihood ratio
    double p_value = 1.0; ///< two-sided
    double raw = 0.0;     ///< unnormalized sum of per-point differences
};

/// Compares two fits over the same support. The per-point differences d_i
/// of log densities give R = sum d_i / (sqrt(m) sd(d)) and
/// p = erfc(|R| / sqrt 2). Identical models give R = 0, p = 1.
inline LrtResult likelihood_ratio_test(const EmpiricalSample& s, const FitResult& first, const FitResult& second) {
    if (first.xmin != second.xmin || first.sample_size != second.sample_size)
        throw InvalidArgument("likelihood ratio test needs both fits on the same support (xmin " +
                              std::to_string(first.xmin) + " vs " + std::to_string(second.xmin) + ")");
    const auto tail = detail::tail_of(s, first.xmin);
    if (tail.size() != first.sample_size)
        throw InvalidArgument("likelihood ratio test: fits were not computed on this sample");
    const double m = static_cast<double>(tail.size());
    std::vector<double> d;
    d.reserve(tail.size());
    for (double x : tail) d.push_back(log_density(first, x) - log_density(second, x));
    LrtResult r;
    r.raw = std::accumulate(d.begin(), d.end(), 0.0);
    if (std::all_of(d.begin(), d.end(), [](double v) { return v == 0.0; })) return r;
    const double mean = r.raw / m;
    double ss = 0.0;
    for (double v : d) ss += (v - mean) * (v - mean);
    const double sd = std::sqrt(ss / m);
    if (!(sd > 0.0))
        throw UndefinedTest("likelihood ratio test is undefined: per-point log-likelihood differences have zero variance");
    r.r = r.raw / (std::sqrt(m) * sd);
    r.p_value = std::erfc(std::abs(r.r) / std::numbers::sqrt2);
    return r;
}

} // namespace knockout

#endif // KNOCKOUT_STATS_HPP
