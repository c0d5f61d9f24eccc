#include "gn/oracles.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>

#include "gn/embed.hpp"
#include "gn/rng.hpp"

namespace gn {

double erlang_tail(std::uint32_t k, double lambda) {
    if (k == 0) throw std::invalid_argument("erlang_tail: k must be >= 1");
    if (lambda < 0.0) throw std::invalid_argument("erlang_tail: lambda must be >= 0");
    if (lambda == 0.0) return 0.0;

    // complement of the finite lower sum: 1 - e^{-l} Sum_{j<k} l^j/j!
    double term = 1.0, partial = 1.0;
    for (std::uint32_t j = 1; j < k; ++j) {
        term *= lambda / j;
        partial += term;
    }
    const double complement = 1.0 - std::exp(-lambda) * partial;
    if (complement > 1e-10) return complement;

    // cancellation zone (k >> lambda): sum the tail series directly,
    // anchored in log space
    double t = std::exp(static_cast<double>(k) * std::log(lambda) - lambda -
                        std::lgamma(static_cast<double>(k) + 1.0));
    double sum = t;
    for (std::uint32_t j = k + 1; j < k + 2000; ++j) {
        t *= lambda / j;
        sum += t;
        if (t < sum * 1e-17) break;
    }
    return sum;
}

namespace {

// Run `trials` independent tallies across a small worker pool; the merge is
// a commutative sum, so the result is independent of the thread count.
template <typename PerTrial>
std::uint64_t parallel_count(std::uint64_t trials, PerTrial per_trial) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers = static_cast<unsigned>(std::min<std::uint64_t>(hw, trials ? trials : 1));
    if (workers <= 1) {
        std::uint64_t count = 0;
        for (std::uint64_t t = 0; t < trials; ++t) count += per_trial(t) ? 1 : 0;
        return count;
    }
    std::atomic<std::uint64_t> count{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            std::uint64_t local = 0;
            for (std::uint64_t t = w; t < trials; t += workers) local += per_trial(t) ? 1 : 0;
            count += local;
        });
    }
    for (auto& th : pool) th.join();
    return count.load();
}

struct SuffixSampler {
    std::vector<double> inv_rate;  // 1/f(j) for j in [n, n_trunc)
    double tail_correction;        // tail_mean(n_trunc)
    std::uint64_t n, n_trunc;

    SuffixSampler(const Kernel& kernel, std::uint64_t n_, std::uint64_t n_trunc_)
        : n(n_), n_trunc(std::max(n_trunc_, n_ + 1)) {
        inv_rate.reserve(n_trunc - n);
        for (std::uint64_t j = n; j < n_trunc; ++j) inv_rate.push_back(1.0 / kernel.eval(j));
        tail_correction = kernel.tail_mean(n_trunc).value;
    }

    // Sum_{j>=n} X_j with the tail beyond n_trunc replaced by its mean.
    double draw(Stream& rng) const {
        double s = 0.0;
        for (double ir : inv_rate) s += -std::log(rng.next_unit()) * ir;
        return s + tail_correction;
    }

    double mean() const {
        double s = tail_correction;
        for (double ir : inv_rate) s += ir;
        return s;
    }

    bool biased() const { return tail_correction > 0.1 * (mean() - tail_correction); }
};

}  // namespace

BoundCheckResult mc_fertility_bound(std::uint64_t n, std::uint32_t k, const Kernel& kernel,
                                    std::uint64_t trials, std::uint64_t n_trunc,
                                    std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("mc_fertility_bound: n must be >= 1");
    BoundCheckResult out;
    out.n = n;
    out.trials = trials;
    out.bound_shape = std::pow(static_cast<double>(n),
                               -static_cast<double>(k) * (kernel.exponent() - 1.0));
    if (k == 0) {  // empty sum is <= any positive suffix
        out.empirical = 1.0;
        return out;
    }
    if (trials == 0) {
        out.vacuous = true;
        return out;
    }

    const SuffixSampler suffix(kernel, n, n_trunc);
    std::vector<double> y_rates(k);
    for (std::uint32_t l = 0; l < k; ++l) y_rates[l] = kernel.eval(l);

    const std::uint64_t hits = parallel_count(trials, [&](std::uint64_t t) {
        Stream rng(trial_seed(seed, t));
        double y = 0.0;
        for (double r : y_rates) y += -std::log(rng.next_unit()) / r;
        return y <= suffix.draw(rng);
    });

    out.empirical = static_cast<double>(hits) / static_cast<double>(trials);
    out.std_error = std::sqrt(out.empirical * (1.0 - out.empirical) / static_cast<double>(trials));
    out.truncation_bias = suffix.biased();
    return out;
}

BoundCheckResult lgdev_tail_check(std::uint64_t n, const Kernel& kernel, double delta,
                                  std::uint64_t trials, std::uint64_t n_trunc,
                                  std::uint64_t seed) {
    if (n < 1) throw std::invalid_argument("lgdev_tail_check: n must be >= 1");
    if (!(delta > 0.0)) throw std::invalid_argument("lgdev_tail_check: delta must be > 0");
    BoundCheckResult out;
    out.n = n;
    out.trials = trials;
    out.bound_shape =
        std::exp(-delta * std::pow(static_cast<double>(n), kernel.exponent() - 0.5));
    if (trials == 0) {
        out.vacuous = true;
        return out;
    }

    const SuffixSampler suffix(kernel, n, n_trunc);
    const double mu = kernel.tail_mean(n).value;

    const std::uint64_t hits = parallel_count(trials, [&](std::uint64_t t) {
        Stream rng(trial_seed(seed, t));
        return std::fabs(suffix.draw(rng) - mu) > delta;
    });

    out.empirical = static_cast<double>(hits) / static_cast<double>(trials);
    out.std_error = std::sqrt(out.empirical * (1.0 - out.empirical) / static_cast<double>(trials));
    out.truncation_bias = suffix.biased();
    return out;
}

std::vector<std::vector<double>> interbirth_samples(const Kernel& kernel, std::uint32_t j_max,
                                                    std::uint64_t trials, std::uint64_t seed) {
    std::vector<std::vector<double>> samples(j_max + 1);
    for (auto& s : samples) s.reserve(trials);
    for (std::uint64_t t = 0; t < trials; ++t) {
        ClockSource clocks(trial_seed(seed, t));
        EmbedState state(kernel, clocks);
        double prev = 0.0;
        for (std::uint32_t j = 0; j <= j_max; ++j) {
            const double b = state.next_birth().second;
            samples[j].push_back(b - prev);
            prev = b;
        }
    }
    return samples;
}

std::vector<InterbirthCheck> interbirth_dominance_check(const Kernel& kernel, std::uint32_t j_max,
                                                        std::uint64_t trials, std::uint64_t seed,
                                                        std::size_t grid_points) {
    const auto samples = interbirth_samples(kernel, j_max, trials, seed);

    std::vector<InterbirthCheck> out;
    for (std::uint32_t j = 0; j <= j_max; ++j) {
        InterbirthCheck c;
        c.j = j;
        c.rate = static_cast<double>(j + 1) * kernel.eval(j);
        c.trials = trials;
        if (trials == 0) {
            c.vacuous = true;
            out.push_back(std::move(c));
            continue;
        }
        std::vector<double> sorted(samples[j]);
        std::sort(sorted.begin(), sorted.end());
        c.max_excess_sigmas = -std::numeric_limits<double>::infinity();
        for (std::size_t g = 1; g <= grid_points; ++g) {
            // quantiles of the dominating exponential
            const double q = static_cast<double>(g) / static_cast<double>(grid_points + 1);
            const double t = -std::log(1.0 - q) / c.rate;
            const double bound = q;
            const auto it = std::upper_bound(sorted.begin(), sorted.end(), t);
            const double emp =
                static_cast<double>(it - sorted.begin()) / static_cast<double>(trials);
            const double se = std::sqrt(bound * (1.0 - bound) / static_cast<double>(trials));
            c.grid.push_back(t);
            c.empirical.push_back(emp);
            c.bound.push_back(bound);
            c.max_excess_sigmas = std::max(c.max_excess_sigmas, (emp - bound) / se);
        }
        c.dominated = c.max_excess_sigmas <= 3.0;
        out.push_back(std::move(c));
    }
    return out;
}

}  // namespace gn
