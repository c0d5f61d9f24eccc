#include "gn/discrete.hpp"

#include "gn/checks.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace gn {

void WeightIndex::push(double w) {
    const std::size_t i = weights_.size();
    weights_.push_back(w);
    if (cap_) {
        if (i >= cap_) {
            tree_.clear();
            cap_ = 0;  // rebuilt on next sample
        } else {
            update(i, w);
        }
    }
}

void WeightIndex::update(std::size_t i, double w) {
    weights_[i] = w;
    if (!cap_ || i >= cap_) return;
    std::size_t node = cap_ + i;
    tree_[node] = w;
    for (node >>= 1; node >= 1; node >>= 1) tree_[node] = tree_[2 * node] + tree_[2 * node + 1];
}

void WeightIndex::build_tree() const {
    cap_ = 1;
    while (cap_ < weights_.size()) cap_ <<= 1;
    tree_.assign(2 * cap_, 0.0);
    for (std::size_t i = 0; i < weights_.size(); ++i) tree_[cap_ + i] = weights_[i];
    for (std::size_t node = cap_ - 1; node >= 1; --node)
        tree_[node] = tree_[2 * node] + tree_[2 * node + 1];
}

double WeightIndex::total() const {
    if (weights_.size() <= threshold_) {
        double s = 0.0;
        for (double w : weights_) s += w;
        return s;
    }
    if (!cap_ || weights_.size() > cap_) build_tree();
    return tree_[1];
}

double WeightIndex::recompute_total() const {
    double s = 0.0, c = 0.0;
    for (double w : weights_) {
        const double y = w - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
    return s;
}

std::size_t WeightIndex::sample(double u) const {
    if (weights_.size() <= threshold_) {
        const double target = u * total();
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < weights_.size(); ++i) {
            acc += weights_[i];
            if (target < acc) return i;
        }
        return weights_.size() - 1;
    }
    if (!cap_ || weights_.size() > cap_) build_tree();
    double target = u * tree_[1];
    std::size_t node = 1;
    while (node < cap_) {
        const double left = tree_[2 * node];
        if (target < left) {
            node = 2 * node;
        } else {
            target -= left;
            node = 2 * node + 1;
        }
    }
    std::size_t i = node - cap_;
    if (i >= weights_.size()) i = weights_.size() - 1;  // guard rounding spill
    return i;
}

void write_attachment_log(std::ostream& os, const AttachmentLog& log) {
    for (std::size_t s = 0; s < log.size(); ++s) os << (s + 1) << ' ' << log[s] << '\n';
}

AttachmentLog read_attachment_log(std::istream& is) {
    AttachmentLog log;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        std::uint64_t step;
        std::int64_t target;
        if (!(ls >> step >> target)) throw std::runtime_error("attachment log: malformed line");
        if (step != log.size() + 1) throw std::runtime_error("attachment log: steps out of order");
        if (target < 0 || static_cast<std::uint64_t>(target) >= step)
            throw std::runtime_error("attachment log: target not yet born");
        log.push_back(static_cast<VertexId>(target));
    }
    return log;
}

LabelledTree replay(const AttachmentLog& log) {
    LabelledTree t;
    for (VertexId target : log) {
        if (target >= t.size()) throw std::runtime_error("attachment log: target not yet born");
        t.add_child(target);
    }
    return t;
}

GnState::GnState(const Kernel& kernel, std::size_t linear_threshold)
    : kernel_(kernel), index_(linear_threshold), total_weight_(kernel.eval(0)) {
    index_.push(kernel_.eval(0));
}

std::pair<VertexId, VertexId> GnState::step(Stream& rng) {
    const VertexId target = static_cast<VertexId>(index_.sample(rng.next_unit()));
    const std::uint32_t d = tree_.degree(target);
    const VertexId child = tree_.add_child(target);

    const double f_old = index_.weight(target);
    const double f_new = kernel_.eval(d + 1);
    const double f_leaf = kernel_.eval(0);
    if (!std::isfinite(f_new)) throw std::overflow_error("gn: attachment weight overflows double");
    index_.update(target, f_new);
    index_.push(f_leaf);
    total_weight_ += f_new - f_old + f_leaf;
    ++births_;

    if (gn::rate_bound_checks_enabled) {
        const double bound = static_cast<double>(births_ + 1) * kernel_.eval(births_);
        if (total_weight_ > bound)
            throw std::logic_error("gn: rate bound (n+1)f(n) violated");
    }
    return {target, child};
}

RunResult run_discrete(const Kernel& kernel, std::uint64_t births, Stream& rng) {
    GnState state(kernel);
    RunResult out;
    out.log.reserve(births);
    for (std::uint64_t i = 0; i < births; ++i) out.log.push_back(state.step(rng).first);
    out.tree = state.tree();
    return out;
}

}  // namespace gn
