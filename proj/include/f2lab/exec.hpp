#pragma once

namespace f2lab {

// Execution policy shared by every kernel that has a parallel variant, plus
// the resource caps the operations check before enumerating. workers <= 1
// always takes the serial reference path; workers > 1 requests that many
// OpenMP threads (silently serial when built without OpenMP). Results are
// bit-identical for any worker count.
struct ExecPolicy {
    int workers = 1;
    int enum_cap_m = 28;   // max variables for full truth-table enumeration
    int combo_cap_k = 20;  // max members for combination sweeps
    int joint_cap_n = 24;  // max coordinates for joint distributions
};

inline const ExecPolicy& serial_policy() {
    static const ExecPolicy p{};
    return p;
}

// Number of threads actually used for the given policy.
int effective_workers(const ExecPolicy& policy);

}  // namespace f2lab
