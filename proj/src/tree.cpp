#include "gn/tree.hpp"

#include <algorithm>
#include <cassert>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace gn {

LabelledTree::LabelledTree() {
    parent_.push_back(kNoVertex);
    rank_.push_back(0);
    depth_.push_back(0);
    children_.emplace_back();
}

VertexId LabelledTree::add_child(VertexId v) {
    assert(v < size());
    const VertexId id = static_cast<VertexId>(size());
    children_[v].push_back(id);
    parent_.push_back(v);
    rank_.push_back(static_cast<std::uint32_t>(children_[v].size()));
    depth_.push_back(depth_[v] + 1);
    children_.emplace_back();
    height_ = std::max(height_, depth_.back());
    return id;
}

Label LabelledTree::label_of(VertexId v) const {
    std::vector<std::uint32_t> path;
    for (VertexId u = v; u != 0; u = parent_[u]) path.push_back(rank_[u]);
    std::reverse(path.begin(), path.end());
    return Label(std::move(path));
}

std::optional<VertexId> LabelledTree::find(const Label& a) const {
    VertexId v = 0;
    for (std::uint32_t r : a.path) {
        if (r == 0 || r > degree(v)) return std::nullopt;
        v = children_[v][r - 1];
    }
    return v;
}

VertexId LabelledTree::require(const Label& a) const {
    auto v = find(a);
    if (!v) throw std::out_of_range("unknown vertex: " + a.to_string());
    return *v;
}

std::vector<std::uint32_t> LabelledTree::descendant_counts() const {
    // children always have larger ids, so reverse id order is bottom-up
    std::vector<std::uint32_t> desc(size(), 0);
    for (std::size_t v = size(); v-- > 1;)
        desc[parent_[v]] += desc[v] + 1;
    return desc;
}

std::uint32_t LabelledTree::descendant_count(VertexId v) const {
    assert(v < size());
    std::uint32_t count = 0;
    std::vector<VertexId> stack(children_[v]);
    while (!stack.empty()) {
        const VertexId u = stack.back();
        stack.pop_back();
        ++count;
        stack.insert(stack.end(), children_[u].begin(), children_[u].end());
    }
    return count;
}

bool LabelledTree::is_k_fertile(VertexId v, std::uint32_t k) const {
    return descendant_count(v) >= k;
}

Shape LabelledTree::canonical_shape(VertexId v) const {
    // post-order, merging sorted child codes
    struct Frame {
        VertexId v;
        std::size_t next_child = 0;
        std::vector<std::string> codes;
    };
    std::vector<Frame> stack;
    stack.push_back({v, 0, {}});
    std::string result;
    while (!stack.empty()) {
        Frame& f = stack.back();
        if (f.next_child < children_[f.v].size()) {
            const VertexId c = children_[f.v][f.next_child++];
            stack.push_back({c, 0, {}});
            continue;
        }
        std::sort(f.codes.begin(), f.codes.end());
        std::string code = "(";
        for (const auto& c : f.codes) code += c;
        code += ")";
        stack.pop_back();
        if (stack.empty()) {
            result = std::move(code);
        } else {
            stack.back().codes.push_back(std::move(code));
        }
    }
    return Shape{result, static_cast<std::uint32_t>(result.size() / 2)};
}

std::map<std::uint32_t, std::uint64_t> LabelledTree::degree_histogram() const {
    std::map<std::uint32_t, std::uint64_t> h;
    for (std::size_t v = 0; v < size(); ++v) ++h[degree(static_cast<VertexId>(v))];
    return h;
}

VertexId LabelledTree::max_degree_vertex() const {
    VertexId best = 0;
    for (VertexId v = 1; v < size(); ++v) {
        if (degree(v) > degree(best)) {
            best = v;
        } else if (degree(v) == degree(best) && label_of(v) < label_of(best)) {
            best = v;
        }
    }
    return best;
}

bool LabelledTree::validate(std::string* why) const {
    auto fail = [&](const std::string& msg) {
        if (why) *why = msg;
        return false;
    };
    if (size() == 0 || parent_[0] != kNoVertex || rank_[0] != 0) return fail("bad root");
    std::uint64_t degree_sum = 0;
    for (VertexId v = 1; v < size(); ++v) {
        if (parent_[v] >= v) return fail("parent not older than child");
        const auto& sibs = children_[parent_[v]];
        if (rank_[v] == 0 || rank_[v] > sibs.size() || sibs[rank_[v] - 1] != v)
            return fail("rank/child-list mismatch");
        if (depth_[v] != depth_[parent_[v]] + 1) return fail("bad depth");
    }
    for (VertexId v = 0; v < size(); ++v) {
        degree_sum += degree(v);
        for (std::size_t i = 0; i < children_[v].size(); ++i) {
            const VertexId c = children_[v][i];
            if (c >= size() || parent_[c] != v) return fail("child list corrupt");
            if (rank_[c] != i + 1) return fail("ranks not contiguous");
        }
    }
    if (degree_sum != size() - 1) return fail("degree sum != size-1");
    return true;
}

void LabelledTree::write_parent_array(std::ostream& os) const {
    for (std::size_t v = 0; v < size(); ++v) {
        if (v == 0)
            os << "0 -1\n";
        else
            os << v << ' ' << parent_[v] << '\n';
    }
}

LabelledTree LabelledTree::read_parent_array(std::istream& is) {
    LabelledTree t;
    std::string line;
    std::size_t expect = 0;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        long long idx, par;
        if (!(ls >> idx >> par)) throw std::runtime_error("tree: malformed parent-array line");
        if (static_cast<std::size_t>(idx) != expect)
            throw std::runtime_error("tree: vertices must appear in birth order");
        if (idx == 0) {
            if (par != -1) throw std::runtime_error("tree: root must have parent -1");
        } else {
            if (par < 0 || par >= idx) throw std::runtime_error("tree: invalid parent index");
            t.add_child(static_cast<VertexId>(par));
        }
        ++expect;
    }
    if (expect == 0) throw std::runtime_error("tree: empty input");
    return t;
}

VertexId attach_shape(LabelledTree& tree, VertexId at, const std::string& code) {
    if (code.size() < 2 || code.front() != '(' || code.back() != ')')
        throw std::invalid_argument("shape: malformed code");
    const VertexId root = tree.add_child(at);
    std::vector<VertexId> stack{root};
    for (std::size_t i = 1; i + 1 < code.size(); ++i) {
        if (code[i] == '(') {
            stack.push_back(tree.add_child(stack.back()));
        } else if (code[i] == ')') {
            stack.pop_back();
            if (stack.empty()) throw std::invalid_argument("shape: unbalanced code");
        } else {
            throw std::invalid_argument("shape: unexpected character");
        }
    }
    if (stack.size() != 1) throw std::invalid_argument("shape: unbalanced code");
    return root;
}

void glue_construct(LabelledTree& tree, VertexId v, std::uint32_t k, std::uint32_t copies_per_shape) {
    if (v >= tree.size()) throw std::out_of_range("unknown vertex");
    for (const Shape& s : enumerate_shapes(k))
        for (std::uint32_t c = 0; c < copies_per_shape; ++c) attach_shape(tree, v, s.code);
}

GlueDecomposition glue_decompose(const LabelledTree& tree, std::uint32_t k) {
    GlueDecomposition out;
    const VertexId v = tree.max_degree_vertex();
    out.vertex = tree.label_of(v);

    const auto desc = tree.descendant_counts();
    std::vector<bool> detached(tree.size(), false);
    for (VertexId c : tree.children(v)) {
        const std::uint32_t sz = desc[c] + 1;
        if (sz <= k) {
            detached[c] = true;
            ++out.inventory[tree.canonical_shape(c)];
            out.leftover += sz;
        } else {
            ++out.kept_children;
        }
    }

    // rebuild the remainder in birth order; detachment is inherited downward
    std::vector<VertexId> remap(tree.size(), kNoVertex);
    remap[0] = 0;
    for (VertexId u = 1; u < tree.size(); ++u) {
        const VertexId p = tree.parent(u);
        if (detached[u] || remap[p] == kNoVertex) continue;
        remap[u] = out.core.add_child(remap[p]);
    }
    return out;
}

}  // namespace gn
