#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gn/label.hpp"
#include "gn/shape.hpp"

namespace gn {

using VertexId = std::uint32_t;
inline constexpr VertexId kNoVertex = static_cast<VertexId>(-1);

// A labelled rooted tree: a finite parent-closed set of labels with
// contiguous child ranks. Stored as flat arrays indexed by birth order
// (vertex 0 is the root, children's ids exceed their parent's), with
// explicit child lists in rank order; labels are recovered structurally.
class LabelledTree {
  public:
    LabelledTree();  // single root

    std::size_t size() const { return parent_.size(); }

    VertexId parent(VertexId v) const { return parent_[v]; }
    std::uint32_t degree(VertexId v) const { return static_cast<std::uint32_t>(children_[v].size()); }
    std::uint32_t rank(VertexId v) const { return rank_[v]; }
    std::uint32_t depth(VertexId v) const { return depth_[v]; }
    std::uint32_t height() const { return height_; }
    const std::vector<VertexId>& children(VertexId v) const { return children_[v]; }
    VertexId child(VertexId v, std::uint32_t rank) const { return children_[v][rank - 1]; }

    // Appends the next child of v (rank deg(v)+1) and returns its id.
    VertexId add_child(VertexId v);

    Label label_of(VertexId v) const;
    std::optional<VertexId> find(const Label& a) const;
    // Throws std::out_of_range("unknown vertex") if the label is absent.
    VertexId require(const Label& a) const;

    // Subtree size minus one for every vertex, one bottom-up pass.
    std::vector<std::uint32_t> descendant_counts() const;
    std::uint32_t descendant_count(VertexId v) const;
    bool is_k_fertile(VertexId v, std::uint32_t k) const;

    std::uint32_t subtree_size(VertexId v) const { return descendant_count(v) + 1; }

    // AHU canonical code of the subtree rooted at v.
    Shape canonical_shape(VertexId v) const;

    std::map<std::uint32_t, std::uint64_t> degree_histogram() const;
    VertexId max_degree_vertex() const;  // ties: lexicographically smallest label

    // Structural invariants (parent-closure, contiguity, degree sum);
    // used by tests and debug checks.
    bool validate(std::string* why = nullptr) const;

    bool operator==(const LabelledTree& o) const {
        return parent_ == o.parent_ && rank_ == o.rank_;
    }

    // "index parent_index" lines, root parent -1; round-trips exactly.
    void write_parent_array(std::ostream& os) const;
    static LabelledTree read_parent_array(std::istream& is);

  private:
    std::vector<VertexId> parent_;
    std::vector<std::uint32_t> rank_;  // position among parent's children, 1-based; 0 for root
    std::vector<std::uint32_t> depth_;
    std::vector<std::vector<VertexId>> children_;
    std::uint32_t height_ = 0;
};

// Attach the tree encoded by an AHU code under `at` (the code's root
// becomes a new child of `at`); returns the id of that new child.
VertexId attach_shape(LabelledTree& tree, VertexId at, const std::string& code);

// Result of stripping the small child subtrees off the presumed exploder.
struct GlueDecomposition {
    LabelledTree core;                      // remainder, relabelled contiguously
    Label vertex;                           // max-degree vertex of the input
    std::map<Shape, std::uint64_t> inventory;  // detached child subtrees by shape (size <= k)
    std::uint64_t leftover = 0;             // vertices detached in total
    std::uint64_t kept_children = 0;        // children of `vertex` with subtree size > k
};

// For each rooted shape of size <= k, attach copies_per_shape copies by
// their roots as new children of v (finite truncation of the countable
// construction).
void glue_construct(LabelledTree& tree, VertexId v, std::uint32_t k, std::uint32_t copies_per_shape);

GlueDecomposition glue_decompose(const LabelledTree& tree, std::uint32_t k);

}  // namespace gn
