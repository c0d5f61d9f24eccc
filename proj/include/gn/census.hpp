#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "gn/kernel.hpp"
#include "gn/shape.hpp"
#include "gn/tree.hpp"

namespace gn {

// Counts of k-fertile vertices for k = 1..k_max (index k-1).
std::vector<std::uint64_t> fertility_census(const LabelledTree& tree, std::uint32_t k_max);

// Snapshot of one tree at a checkpoint: fertility counts, degree
// structure, and the shape inventory of the max-degree vertex's children
// subtrees (sizes up to shape_cap; larger ones only counted).
struct CensusReport {
    std::uint64_t births = 0;
    std::uint64_t size = 1;
    std::uint32_t height = 0;
    std::vector<std::uint64_t> k_fertile;
    std::map<std::uint32_t, std::uint64_t> degree_hist;
    std::string max_degree_label;
    std::uint32_t max_degree = 0;
    std::map<Shape, std::uint64_t> child_inventory;
    std::uint64_t children_beyond_cap = 0;
    std::uint64_t detached_vertices = 0;  // vertices inside the tallied subtrees
};

CensusReport census(const LabelledTree& tree, std::uint64_t births, std::uint32_t k_max,
                    std::uint32_t shape_cap);

struct Trajectory {
    std::vector<CensusReport> reports;
    std::uint64_t seed = 0;
    std::string mode;
    std::string kernel;
};

// Single run with censuses snapshotted at each ascending checkpoint;
// deterministic given the seed.
Trajectory census_trajectory(const Kernel& kernel, bool embedded,
                             const std::vector<std::uint64_t>& checkpoints, std::uint32_t k_max,
                             std::uint32_t shape_cap, std::uint64_t seed);

// Distribution of the whole-tree canonical shape after `births` steps,
// over an ensemble of independent runs (keyed by shape code).
std::map<std::string, std::uint64_t> shape_ensemble(const Kernel& kernel, bool embedded,
                                                    std::uint64_t births, std::uint64_t trials,
                                                    std::uint64_t master_seed);

}  // namespace gn
