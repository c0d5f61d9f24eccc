#pragma once

#include <cstdint>
#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "gn/kernel.hpp"
#include "gn/rng.hpp"
#include "gn/tree.hpp"

namespace gn {

// Lazily realized clock family X(a,j) ~ exp(f(j)). Every clock is a pure
// function of (master seed, label path, j), so any clock can be queried or
// re-queried on demand — including clocks of vertices that are never born
// (the fictitious continuation).
class ClockSource {
  public:
    explicit ClockSource(std::uint64_t master_seed) : master_(master_seed) {}

    std::uint64_t master_seed() const { return master_; }

    // Per-vertex clock keys chain along the label path.
    std::uint64_t root_key() const { return mix64(master_ ^ 0x243F6A8885A308D3ull); }
    std::uint64_t child_key(std::uint64_t parent_key, std::uint32_t rank) const {
        return mix64(parent_key ^ (static_cast<std::uint64_t>(rank) * kGolden));
    }
    std::uint64_t key_of(const Label& a) const {
        std::uint64_t k = root_key();
        for (std::uint32_t r : a.path) k = child_key(k, r);
        return k;
    }

    // X(a,j) for the vertex keyed by `key`.
    double clock(std::uint64_t key, std::uint64_t j, const Kernel& kernel) const {
        return expo_from_word(counter_word(key, j), kernel.eval(j));
    }
    double clock_with_rate(std::uint64_t key, std::uint64_t j, double rate) const {
        return expo_from_word(counter_word(key, j), rate);
    }

  private:
    std::uint64_t master_;
};

// Interval estimate of the explosion time P(a) = Sum_j X(a,j): realized
// partial sum up to n_trunc, tail-mean bracket, plus a large-deviation
// margin delta sized so each one-sided tail-bound shape contributes less
// than (1-confidence)/2.
struct ExplosionEstimate {
    double low = 0.0;
    double high = 0.0;
    double delta = 0.0;
    bool widened = false;  // n_trunc below the trust threshold; delta doubled
    double mid() const { return 0.5 * (low + high); }
};

ExplosionEstimate explosion_estimate(const ClockSource& clocks, std::uint64_t vertex_key,
                                     const Kernel& kernel, std::uint64_t n_trunc,
                                     double confidence);

inline ExplosionEstimate explosion_estimate(const ClockSource& clocks, const Label& a,
                                            const Kernel& kernel, std::uint64_t n_trunc,
                                            double confidence) {
    return explosion_estimate(clocks, clocks.key_of(a), kernel, n_trunc, confidence);
}

// Stopping rules for the event loop.
struct StopRule {
    enum class Kind { births, wall_time, near_explosion };
    Kind kind = Kind::births;
    std::uint64_t births = 0;   // births(m)
    double time = 0.0;          // wall_time(t), model time
    double delta_rel = 1e-4;    // near_explosion: margin relative to S_hat
    std::uint64_t n_trunc = 10'000;

    static StopRule at_births(std::uint64_t m) {
        StopRule r;
        r.kind = Kind::births;
        r.births = m;
        return r;
    }
    static StopRule at_time(double t) {
        StopRule r;
        r.kind = Kind::wall_time;
        r.time = t;
        return r;
    }
    static StopRule near_explosion(double delta_rel = 1e-4, std::uint64_t n_trunc = 10'000) {
        StopRule r;
        r.kind = Kind::near_explosion;
        r.delta_rel = delta_rel;
        r.n_trunc = n_trunc;
        return r;
    }
};

struct TreeExplosionEstimate {
    ExplosionEstimate interval;  // S_hat = B(v_hat) + P_hat(v_hat)
    Label v_hat;
    VertexId v_hat_id = 0;
};

// Event-driven continuous-time state: one pending event per living vertex
// (the birth time of its next child), clocks realized lazily on demand.
class EmbedState {
  public:
    EmbedState(const Kernel& kernel, const ClockSource& clocks, bool track_explosion = false,
               std::uint64_t n_trunc = 10'000);

    // State for a given tree with birth times implied by the clock
    // realization; for seeding small test states that are reachable at
    // their last birth.
    static EmbedState from_tree(const LabelledTree& tree, const Kernel& kernel,
                                const ClockSource& clocks, bool track_explosion = false,
                                std::uint64_t n_trunc = 10'000);

    const LabelledTree& tree() const { return tree_; }
    double now() const { return now_; }
    std::uint64_t births() const { return births_; }
    double birth_time(VertexId v) const { return birth_[v]; }
    const std::vector<double>& birth_times() const { return birth_; }
    double total_weight() const { return total_weight_; }
    double pending_time(VertexId v) const { return birth_[v] + clock_accum_[v]; }
    double next_event_time() const { return pending_.top().time; }

    // Pops the minimum-time event (ties resolved toward the lexicographically
    // smallest label): creates the child, schedules the next events for
    // parent and newborn. Returns (new vertex, its birth time).
    std::pair<VertexId, double> next_birth();

    // argmin over living vertices of the midpoint of B(a) + P_hat(a);
    // maintained incrementally when track_explosion is on.
    TreeExplosionEstimate tree_explosion_estimate(double confidence = 0.95) const;
    double explosion_midpoint() const { return best_expl_mid_; }
    bool tracking_explosion() const { return track_explosion_; }

  private:
    struct Event {
        double time;
        VertexId vertex;
    };
    struct Later {
        bool operator()(const Event& a, const Event& b) const {
            if (a.time != b.time) return a.time > b.time;
            return a.vertex > b.vertex;
        }
    };

    void schedule(VertexId v);
    void consider_exploder(VertexId v);
    VertexId pop_min();

    Kernel kernel_;
    ClockSource clocks_;
    LabelledTree tree_;
    std::vector<double> birth_;        // B(a)
    std::vector<double> clock_accum_;  // Sum_{j=0..deg} X(a,j), grown as deg grows
    std::vector<std::uint64_t> key_;   // clock key per vertex
    std::priority_queue<Event, std::vector<Event>, Later> pending_;
    double now_ = 0.0;
    std::uint64_t births_ = 0;
    double total_weight_ = 0.0;

    bool track_explosion_;
    std::uint64_t n_trunc_;
    mutable double best_expl_mid_ = std::numeric_limits<double>::infinity();
    mutable VertexId best_expl_vertex_ = 0;
    TailSum expl_tail_;  // tail_mean(n_trunc), cached
};

struct EmbeddedRun {
    LabelledTree tree;
    std::vector<double> birth_times;
    std::string stopped_reason;
};

EmbeddedRun run_embedded(const Kernel& kernel, const StopRule& stop, const ClockSource& clocks);

// CSV trace "index,label,birth_time" with full double precision.
void write_birth_times_csv(std::ostream& os, const LabelledTree& tree,
                           const std::vector<double>& birth_times);

// Balls-in-bins with feedback: `balls` arrivals over `bins` bins, either as
// the discrete chain or raced in continuous time via per-bin clock chains.
enum class BinMode { discrete, embedded };
std::vector<std::uint64_t> balls_in_bins_run(const Kernel& feedback, std::uint32_t bins,
                                             std::uint64_t balls, BinMode mode, std::uint64_t seed);

}  // namespace gn
