#pragma once

namespace gn {

// Trajectory invariant from the transition-rate bound: after n births the
// summed attachment weights are at most (n+1) f(n). Checked on every step
// of both simulators; a violation indicates a simulator bug and throws.
inline bool rate_bound_checks_enabled = true;

}  // namespace gn
