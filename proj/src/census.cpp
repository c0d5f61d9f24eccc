#include "gn/census.hpp"

#include <algorithm>
#include <stdexcept>
#include <thread>

#include "gn/discrete.hpp"
#include "gn/embed.hpp"

namespace gn {

std::vector<std::uint64_t> fertility_census(const LabelledTree& tree, std::uint32_t k_max) {
    std::vector<std::uint64_t> counts(k_max, 0);
    const auto desc = tree.descendant_counts();
    for (std::uint32_t d : desc) {
        const std::uint32_t upto = std::min<std::uint64_t>(d, k_max);
        for (std::uint32_t k = 1; k <= upto; ++k) ++counts[k - 1];
    }
    return counts;
}

CensusReport census(const LabelledTree& tree, std::uint64_t births, std::uint32_t k_max,
                    std::uint32_t shape_cap) {
    CensusReport r;
    r.births = births;
    r.size = tree.size();
    r.height = tree.height();
    r.k_fertile = fertility_census(tree, k_max);
    r.degree_hist = tree.degree_histogram();

    const VertexId v = tree.max_degree_vertex();
    r.max_degree_label = tree.label_of(v).to_string();
    r.max_degree = tree.degree(v);

    const auto desc = tree.descendant_counts();
    for (VertexId c : tree.children(v)) {
        const std::uint32_t sz = desc[c] + 1;
        if (sz <= shape_cap) {
            ++r.child_inventory[tree.canonical_shape(c)];
            r.detached_vertices += sz;
        } else {
            ++r.children_beyond_cap;
        }
    }
    return r;
}

Trajectory census_trajectory(const Kernel& kernel, bool embedded,
                             const std::vector<std::uint64_t>& checkpoints, std::uint32_t k_max,
                             std::uint32_t shape_cap, std::uint64_t seed) {
    for (std::size_t i = 1; i < checkpoints.size(); ++i)
        if (checkpoints[i] <= checkpoints[i - 1])
            throw std::invalid_argument("census_trajectory: checkpoints must ascend");

    Trajectory out;
    out.seed = seed;
    out.mode = embedded ? "embedded" : "discrete";
    out.kernel = kernel.describe();
    if (checkpoints.empty()) return out;

    if (embedded) {
        ClockSource clocks(seed);
        EmbedState state(kernel, clocks);
        for (std::uint64_t m : checkpoints) {
            while (state.births() < m) state.next_birth();
            out.reports.push_back(census(state.tree(), m, k_max, shape_cap));
        }
    } else {
        Stream rng(seed);
        GnState state(kernel);
        for (std::uint64_t m : checkpoints) {
            while (state.births() < m) state.step(rng);
            out.reports.push_back(census(state.tree(), m, k_max, shape_cap));
        }
    }
    return out;
}

std::map<std::string, std::uint64_t> shape_ensemble(const Kernel& kernel, bool embedded,
                                                    std::uint64_t births, std::uint64_t trials,
                                                    std::uint64_t master_seed) {
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const unsigned workers =
        trials ? static_cast<unsigned>(std::min<std::uint64_t>(hw, trials)) : 1;

    std::vector<std::map<std::string, std::uint64_t>> partial(workers);
    auto work = [&](unsigned w) {
        auto& tally = partial[w];
        for (std::uint64_t t = w; t < trials; t += workers) {
            const std::uint64_t seed = trial_seed(master_seed, t);
            if (embedded) {
                ClockSource clocks(seed);
                EmbedState state(kernel, clocks);
                while (state.births() < births) state.next_birth();
                ++tally[state.tree().canonical_shape(0).code];
            } else {
                Stream rng(seed);
                GnState state(kernel);
                while (state.births() < births) state.step(rng);
                ++tally[state.tree().canonical_shape(0).code];
            }
        }
    };
    if (workers <= 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& th : pool) th.join();
    }
    std::map<std::string, std::uint64_t> out;
    for (const auto& m : partial)
        for (const auto& [code, cnt] : m) out[code] += cnt;
    return out;
}

}  // namespace gn
