#pragma once

#include <cstdint>
#include <vector>

#include "gn/kernel.hpp"

namespace gn {

// Pr[Z_1 + ... + Z_k <= lambda] for k independent unit exponentials,
// = e^{-lambda} * Sum_{j>=k} lambda^j / j!; always <= lambda^k / k!.
double erlang_tail(std::uint32_t k, double lambda);

struct BoundCheckResult {
    double empirical = 0.0;    // estimated probability
    double bound_shape = 0.0;  // the lemma's shape at this n (constant-free)
    std::uint64_t n = 0;
    std::uint64_t trials = 0;
    double std_error = 0.0;    // sqrt(p(1-p)/trials)
    bool truncation_bias = false;  // tail correction above 10% of the suffix
    bool vacuous = false;          // trials == 0
};

// q_n = Pr[ Sum_{l<k} exp(f(l)) <= Sum_{j>=n} exp(f(j)) ], the chance that
// a fresh vertex gains k children before its parent (at degree n) explodes.
// The suffix is sampled up to n_trunc and completed by the deterministic
// tail mean. bound_shape = n^{-k(p-1)}.
BoundCheckResult mc_fertility_bound(std::uint64_t n, std::uint32_t k, const Kernel& kernel,
                                    std::uint64_t trials, std::uint64_t n_trunc,
                                    std::uint64_t seed);

// Pr[ |Sum_{j>=n} exp(f(j)) - tail_mean(n)| > delta ], suffix truncated as
// above. bound_shape = exp(-delta * n^{p-1/2}).
BoundCheckResult lgdev_tail_check(std::uint64_t n, const Kernel& kernel, double delta,
                                  std::uint64_t trials, std::uint64_t n_trunc,
                                  std::uint64_t seed);

// Empirical CDF of the j-th inter-birth interval of the embedded process
// against the dominating exponential 1 - e^{-(j+1) f(j) t} on a fixed
// quantile grid.
struct InterbirthCheck {
    std::uint32_t j = 0;
    double rate = 0.0;  // (j+1) f(j)
    std::vector<double> grid;       // t values
    std::vector<double> empirical;  // empirical CDF at grid
    std::vector<double> bound;      // 1 - e^{-rate t}
    double max_excess_sigmas = 0.0;  // max over grid of (emp - bound)/SE(bound)
    bool dominated = true;           // emp <= bound + 3 SE everywhere
    std::uint64_t trials = 0;
    bool vacuous = false;
};

std::vector<InterbirthCheck> interbirth_dominance_check(const Kernel& kernel, std::uint32_t j_max,
                                                        std::uint64_t trials, std::uint64_t seed,
                                                        std::size_t grid_points = 50);

// The raw inter-birth intervals T_0..T_jmax of one embedded run per trial;
// exposed for the KS test at j = 0.
std::vector<std::vector<double>> interbirth_samples(const Kernel& kernel, std::uint32_t j_max,
                                                    std::uint64_t trials, std::uint64_t seed);

}  // namespace gn
