#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "gn/kernel.hpp"
#include "gn/rng.hpp"
#include "gn/tree.hpp"

namespace gn {

// Sampler over per-vertex attachment weights. Selection follows prefix-sum
// order over vertex ids; a linear scan serves small states and a lazily
// built sum-tree takes over past `linear_threshold` (the law is identical,
// only the lookup cost changes).
class WeightIndex {
  public:
    explicit WeightIndex(std::size_t linear_threshold = 1024)
        : threshold_(linear_threshold) {}

    void push(double w);
    void update(std::size_t i, double w);
    double weight(std::size_t i) const { return weights_[i]; }
    std::size_t size() const { return weights_.size(); }

    double total() const;
    // u in [0,1); returns the index owning u*total in prefix order.
    std::size_t sample(double u) const;

    double recompute_total() const;  // Kahan, for cache-coherence checks

  private:
    void build_tree() const;

    std::size_t threshold_;
    std::vector<double> weights_;
    mutable std::vector<double> tree_;  // flat segment tree, size 2*cap
    mutable std::size_t cap_ = 0;
};

// Attachment log: entry s (0-based) is the vertex that received the
// (s+1)-th birth. The log alone replays the tree bit-exactly.
using AttachmentLog = std::vector<VertexId>;

void write_attachment_log(std::ostream& os, const AttachmentLog& log);
AttachmentLog read_attachment_log(std::istream& is);
LabelledTree replay(const AttachmentLog& log);

// State of the discrete labelled chain.
class GnState {
  public:
    explicit GnState(const Kernel& kernel, std::size_t linear_threshold = 1024);

    const LabelledTree& tree() const { return tree_; }
    std::uint64_t births() const { return births_; }
    double total_weight() const { return total_weight_; }
    double recompute_total_weight() const { return index_.recompute_total(); }

    // One transition: samples the attachment vertex with probability
    // f(deg)/total, appends its next child. Returns (attached_to, new id).
    std::pair<VertexId, VertexId> step(Stream& rng);

  private:
    const Kernel kernel_;
    LabelledTree tree_;
    WeightIndex index_;
    double total_weight_;
    std::uint64_t births_ = 0;
};

struct RunResult {
    LabelledTree tree;
    AttachmentLog log;
};

RunResult run_discrete(const Kernel& kernel, std::uint64_t births, Stream& rng);

}  // namespace gn
