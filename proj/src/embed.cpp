#include "gn/embed.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

#include "gn/checks.hpp"

namespace gn {

namespace {

// Below this truncation depth the large-deviation regime is not trusted;
// the margin is doubled and the estimate flagged.
constexpr std::uint64_t kTrustedTrunc = 16;

}  // namespace

ExplosionEstimate explosion_estimate(const ClockSource& clocks, std::uint64_t vertex_key,
                                     const Kernel& kernel, std::uint64_t n_trunc,
                                     double confidence) {
    if (!kernel.is_explosive())
        throw std::domain_error("explosion_estimate: kernel is not explosive");
    if (!(confidence > 0.0 && confidence < 1.0))
        throw std::invalid_argument("explosion_estimate: confidence must be in (0,1)");

    double partial = 0.0;
    for (std::uint64_t j = 0; j < n_trunc; ++j)
        partial += clocks.clock(vertex_key, j, kernel);

    const TailSum tail = kernel.tail_mean(n_trunc);

    // Each one-sided deviation beyond delta has bound shape
    // exp(-delta * n^{p-1/2}); choose delta so each side's shape is below
    // (1-confidence)/2. The constant in front is existential, so coverage
    // is validated empirically by the oracle suite rather than proven here.
    const double exponent = std::pow(static_cast<double>(n_trunc), kernel.exponent() - 0.5);
    ExplosionEstimate out;
    out.delta = std::log(2.0 / (1.0 - confidence)) / exponent;
    if (n_trunc < kTrustedTrunc) {
        out.delta *= 2.0;
        out.widened = true;
    }
    out.low = partial + tail.low() - out.delta;
    out.high = partial + tail.high() + out.delta;
    return out;
}

EmbedState::EmbedState(const Kernel& kernel, const ClockSource& clocks, bool track_explosion,
                       std::uint64_t n_trunc)
    : kernel_(kernel),
      clocks_(clocks),
      track_explosion_(track_explosion),
      n_trunc_(n_trunc) {
    if (track_explosion_) expl_tail_ = kernel_.tail_mean(n_trunc_);
    birth_.push_back(0.0);
    clock_accum_.push_back(0.0);
    key_.push_back(clocks_.root_key());
    total_weight_ = kernel_.eval(0);
    schedule(0);
    if (track_explosion_) consider_exploder(0);
}

EmbedState EmbedState::from_tree(const LabelledTree& tree, const Kernel& kernel,
                                 const ClockSource& clocks, bool track_explosion,
                                 std::uint64_t n_trunc) {
    EmbedState s(kernel, clocks, false, n_trunc);
    s.track_explosion_ = false;
    s.tree_ = tree;
    s.pending_ = {};
    s.birth_.assign(tree.size(), 0.0);
    s.clock_accum_.assign(tree.size(), 0.0);
    s.key_.assign(tree.size(), clocks.root_key());
    s.total_weight_ = 0.0;
    s.births_ = tree.size() - 1;

    // birth times via the parent-prefix sums; ids are in birth order
    for (VertexId v = 0; v < tree.size(); ++v) {
        if (v != 0) {
            const VertexId p = tree.parent(v);
            double prefix = 0.0;
            for (std::uint32_t j = 0; j < tree.rank(v); ++j)
                prefix += clocks.clock(s.key_[p], j, kernel);
            s.key_[v] = clocks.child_key(s.key_[p], tree.rank(v));
            s.birth_[v] = s.birth_[p] + prefix;
        }
        s.total_weight_ += kernel.eval(tree.degree(v));
    }
    s.now_ = *std::max_element(s.birth_.begin(), s.birth_.end());
    for (VertexId v = 0; v < tree.size(); ++v) {
        double accum = 0.0;
        for (std::uint32_t j = 0; j <= tree.degree(v); ++j)
            accum += clocks.clock(s.key_[v], j, kernel);
        s.clock_accum_[v] = accum;
        s.pending_.push(Event{s.birth_[v] + accum, v});
    }
    s.track_explosion_ = track_explosion;
    if (track_explosion) {
        s.expl_tail_ = kernel.tail_mean(n_trunc);
        for (VertexId v = 0; v < tree.size(); ++v) s.consider_exploder(v);
    }
    return s;
}

void EmbedState::schedule(VertexId v) {
    clock_accum_[v] += clocks_.clock(key_[v], tree_.degree(v), kernel_);
    pending_.push(Event{birth_[v] + clock_accum_[v], v});
}

void EmbedState::consider_exploder(VertexId v) {
    // Midpoint of B(v) + P_hat(v), with early abort once the partial sum
    // alone already exceeds the incumbent (later terms only add).
    const double b = birth_[v];
    double partial = 0.0;
    for (std::uint64_t j = 0; j < n_trunc_; ++j) {
        partial += clocks_.clock(key_[v], j, kernel_);
        if (b + partial > best_expl_mid_) return;
    }
    const double mid = b + partial + expl_tail_.value;
    if (mid < best_expl_mid_) {
        best_expl_mid_ = mid;
        best_expl_vertex_ = v;
    }
}

VertexId EmbedState::pop_min() {
    Event top = pending_.top();
    pending_.pop();
    if (!pending_.empty() && pending_.top().time == top.time) {
        // a.s. null event: resolve the tie toward the smallest label
        std::vector<Event> tied{top};
        while (!pending_.empty() && pending_.top().time == top.time) {
            tied.push_back(pending_.top());
            pending_.pop();
        }
        std::size_t best = 0;
        Label best_label = tree_.label_of(tied[0].vertex);
        for (std::size_t i = 1; i < tied.size(); ++i) {
            Label li = tree_.label_of(tied[i].vertex);
            if (li < best_label) {
                best = i;
                best_label = std::move(li);
            }
        }
        top = tied[best];
        for (std::size_t i = 0; i < tied.size(); ++i)
            if (i != best) pending_.push(tied[i]);
    }
    now_ = top.time;
    return top.vertex;
}

std::pair<VertexId, double> EmbedState::next_birth() {
    const VertexId a = pop_min();
    const double t = now_;
    const std::uint32_t d = tree_.degree(a);

    const VertexId child = tree_.add_child(a);
    birth_.push_back(t);
    clock_accum_.push_back(0.0);
    key_.push_back(clocks_.child_key(key_[a], d + 1));

    const double f_new = kernel_.eval(d + 1);
    if (!std::isfinite(f_new)) throw std::overflow_error("gn: attachment weight overflows double");
    total_weight_ += f_new - kernel_.eval(d) + kernel_.eval(0);
    ++births_;

    schedule(child);
    schedule(a);
    if (track_explosion_) consider_exploder(child);

    if (rate_bound_checks_enabled) {
        const double bound = static_cast<double>(births_ + 1) * kernel_.eval(births_);
        if (total_weight_ > bound) throw std::logic_error("gn: rate bound (n+1)f(n) violated");
    }
    return {child, t};
}

TreeExplosionEstimate EmbedState::tree_explosion_estimate(double confidence) const {
    if (!kernel_.is_explosive())
        throw std::domain_error("tree_explosion_estimate: kernel is not explosive");
    if (!track_explosion_) {
        // evaluate all living vertices now, with the same early-abort scan
        best_expl_mid_ = std::numeric_limits<double>::infinity();
        best_expl_vertex_ = 0;
        auto* self = const_cast<EmbedState*>(this);
        if (self->expl_tail_.value == 0.0 && self->expl_tail_.error_bound == 0.0)
            self->expl_tail_ = kernel_.tail_mean(n_trunc_);
        for (VertexId v = 0; v < tree_.size(); ++v) self->consider_exploder(v);
    }
    TreeExplosionEstimate out;
    out.v_hat_id = best_expl_vertex_;
    out.v_hat = tree_.label_of(best_expl_vertex_);
    ExplosionEstimate e =
        explosion_estimate(clocks_, key_[best_expl_vertex_], kernel_, n_trunc_, confidence);
    const double b = birth_[best_expl_vertex_];
    out.interval = e;
    out.interval.low = b + e.low;
    out.interval.high = b + e.high;
    return out;
}

EmbeddedRun run_embedded(const Kernel& kernel, const StopRule& stop, const ClockSource& clocks) {
    constexpr std::uint64_t kBirthCap = 50'000'000;
    EmbeddedRun out;
    switch (stop.kind) {
        case StopRule::Kind::births: {
            EmbedState s(kernel, clocks);
            while (s.births() < stop.births) s.next_birth();
            out.tree = s.tree();
            out.birth_times = s.birth_times();
            out.stopped_reason = "births";
            return out;
        }
        case StopRule::Kind::wall_time: {
            EmbedState s(kernel, clocks);
            while (s.next_event_time() <= stop.time) {
                s.next_birth();
                if (s.births() >= kBirthCap)
                    throw std::runtime_error("run_embedded: birth cap reached before stop time");
            }
            out.tree = s.tree();
            out.birth_times = s.birth_times();
            out.stopped_reason = "wall_time";
            return out;
        }
        case StopRule::Kind::near_explosion: {
            if (!kernel.is_explosive())
                throw std::domain_error("run_embedded: near_explosion needs an explosive kernel");
            EmbedState s(kernel, clocks, /*track_explosion=*/true, stop.n_trunc);
            for (;;) {
                const double s_hat = s.explosion_midpoint();
                if (s.now() >= s_hat - stop.delta_rel * s_hat) break;
                s.next_birth();
                if (s.births() >= kBirthCap)
                    throw std::runtime_error("run_embedded: birth cap reached near explosion");
            }
            out.tree = s.tree();
            out.birth_times = s.birth_times();
            out.stopped_reason = "near_explosion";
            return out;
        }
    }
    throw std::logic_error("run_embedded: bad stop rule");
}

void write_birth_times_csv(std::ostream& os, const LabelledTree& tree,
                           const std::vector<double>& birth_times) {
    os << "index,label,birth_time\n";
    char buf[64];
    for (VertexId v = 0; v < tree.size(); ++v) {
        std::snprintf(buf, sizeof(buf), "%.17g", birth_times[v]);
        os << v << ',' << tree.label_of(v).to_string() << ',' << buf << '\n';
    }
}

std::vector<std::uint64_t> balls_in_bins_run(const Kernel& feedback, std::uint32_t bins,
                                             std::uint64_t balls, BinMode mode,
                                             std::uint64_t seed) {
    if (bins < 2) throw std::invalid_argument("balls_in_bins: need at least 2 bins");
    std::vector<std::uint64_t> occupancy(bins, 0);
    if (mode == BinMode::discrete) {
        Stream rng(trial_seed(seed, 0));
        std::vector<double> w(bins, feedback.eval(0));
        double total = static_cast<double>(bins) * feedback.eval(0);
        for (std::uint64_t b = 0; b < balls; ++b) {
            const double target = rng.next_unit() * total;
            double acc = 0.0;
            std::uint32_t pick = bins - 1;
            for (std::uint32_t i = 0; i < bins; ++i) {
                acc += w[i];
                if (target < acc) {
                    pick = i;
                    break;
                }
            }
            ++occupancy[pick];
            total -= w[pick];
            w[pick] = feedback.eval(occupancy[pick]);
            total += w[pick];
        }
        return occupancy;
    }

    // embedded: per-bin clock chains X_i(j) ~ exp(f(j)) raced in time
    ClockSource clocks(seed);
    std::vector<std::uint64_t> keys(bins);
    std::vector<double> next_hit(bins);
    for (std::uint32_t i = 0; i < bins; ++i) {
        keys[i] = clocks.child_key(clocks.root_key(), i + 1);
        next_hit[i] = clocks.clock(keys[i], 0, feedback);
    }
    for (std::uint64_t b = 0; b < balls; ++b) {
        std::uint32_t winner = 0;
        for (std::uint32_t i = 1; i < bins; ++i)
            if (next_hit[i] < next_hit[winner]) winner = i;
        ++occupancy[winner];
        next_hit[winner] += clocks.clock(keys[winner], occupancy[winner], feedback);
    }
    return occupancy;
}

}  // namespace gn
