#include <doctest.h>

#include <vector>

#include "gn/census.hpp"
#include "gn/discrete.hpp"
#include "gn/tree.hpp"

using namespace gn;

namespace {

// quadratic per-vertex oracle
std::vector<std::uint64_t> brute_fertility(const LabelledTree& t, std::uint32_t k_max) {
    std::vector<std::uint64_t> counts(k_max, 0);
    for (VertexId v = 0; v < t.size(); ++v) {
        const auto d = t.descendant_count(v);
        for (std::uint32_t k = 1; k <= k_max; ++k)
            if (d >= k) ++counts[k - 1];
    }
    return counts;
}

LabelledTree random_tree(std::uint64_t seed, std::size_t vertices) {
    Stream rng(seed);
    LabelledTree t;
    while (t.size() < vertices) t.add_child(static_cast<VertexId>(rng.next_u64() % t.size()));
    return t;
}

}  // namespace

TEST_CASE("fertility census on fixed trees") {
    LabelledTree single;
    for (auto c : fertility_census(single, 4)) CHECK(c == 0);

    LabelledTree path;  // e,1,1.1,1.1.1
    VertexId v = 0;
    for (int i = 0; i < 3; ++i) v = path.add_child(v);
    const auto counts = fertility_census(path, 3);
    CHECK(counts[0] == 3);
    CHECK(counts[1] == 2);
    CHECK(counts[2] == 1);
}

TEST_CASE("fertility census equals the quadratic oracle on random trees") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto t = random_tree(seed, 50);
        CHECK(fertility_census(t, 6) == brute_fertility(t, 6));
    }
}

TEST_CASE("census snapshot fields") {
    LabelledTree t;
    const auto c1 = t.add_child(0);
    t.add_child(0);
    t.add_child(c1);
    const auto r = census(t, 3, 3, 2);
    CHECK(r.births == 3);
    CHECK(r.size == 4);
    CHECK(r.height == 2);
    CHECK(r.max_degree == 2);
    CHECK(r.degree_hist.at(0) == 2);

    // inventory weighted by size equals the detached vertex count
    std::uint64_t weighted = 0;
    for (const auto& [shape, cnt] : r.child_inventory) weighted += shape.size * cnt;
    CHECK(weighted == r.detached_vertices);

    // and the census inventory matches glue_decompose on the same tree
    const auto d = glue_decompose(t, 2);
    CHECK(d.inventory == r.child_inventory);
    CHECK(d.leftover == r.detached_vertices);
}

TEST_CASE("census trajectories are deterministic with monotone counts") {
    const auto kernel = Kernel::power(1.75);
    const std::vector<std::uint64_t> checkpoints{100, 400, 1500};

    const auto a = census_trajectory(kernel, false, checkpoints, 4, 2, 99);
    const auto b = census_trajectory(kernel, false, checkpoints, 4, 2, 99);
    CHECK(a.reports.size() == 3);
    for (std::size_t i = 0; i < a.reports.size(); ++i) {
        CHECK(a.reports[i].k_fertile == b.reports[i].k_fertile);
        CHECK(a.reports[i].max_degree == b.reports[i].max_degree);
    }

    for (const auto& mode : {false, true}) {
        const auto traj = census_trajectory(kernel, mode, checkpoints, 4, 2, 7);
        for (std::size_t i = 1; i < traj.reports.size(); ++i) {
            for (std::uint32_t k = 0; k < 4; ++k)
                CHECK(traj.reports[i].k_fertile[k] >= traj.reports[i - 1].k_fertile[k]);
            // fertility is nonincreasing in k at a fixed checkpoint
            for (std::uint32_t k = 1; k < 4; ++k)
                CHECK(traj.reports[i].k_fertile[k] <= traj.reports[i].k_fertile[k - 1]);
        }
    }

    const auto trivial = census_trajectory(kernel, false, {0}, 4, 2, 1);
    CHECK(trivial.reports.size() == 1);
    CHECK(trivial.reports[0].size == 1);

    CHECK_THROWS(census_trajectory(kernel, false, {10, 10}, 4, 2, 1));
}

TEST_CASE("strongly super-linear kernels stabilize the 1-fertile count") {
    // with p=3 every k >= 1 is past its transition point, so the count of
    // vertices with any descendant freezes early
    const auto kernel = Kernel::power(3.0);
    int stable = 0;
    const int seeds = 10;
    for (int s = 0; s < seeds; ++s) {
        const auto traj = census_trajectory(kernel, false, {2000, 10000}, 1, 2,
                                            trial_seed(2718, s));
        if (traj.reports[0].k_fertile[0] == traj.reports[1].k_fertile[0]) ++stable;
    }
    CHECK(stable >= 9);
}

TEST_CASE("shape ensembles are deterministic") {
    const auto kernel = Kernel::power(2.0);
    const auto a = shape_ensemble(kernel, false, 5, 2000, 42);
    const auto b = shape_ensemble(kernel, false, 5, 2000, 42);
    CHECK(a == b);
    std::uint64_t total = 0;
    for (const auto& [code, cnt] : a) total += cnt;
    CHECK(total == 2000);
}
