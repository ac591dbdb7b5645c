#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "f2lab/factors.hpp"
#include "f2lab/gf2.hpp"
#include "f2lab/rational.hpp"

namespace f2lab {

// Dyadic proximity certificate for the signed bias E of Gamma(Q_1..Q_r):
// |E - A/2^s| <= achieved_err <= err_bound = 2^{-t-s}, with A/2^s reduced to
// lowest terms. `path` records how the certificate was found: "interval"
// (first empty dyadic band), "exact" (E itself has precision <= s_max), or
// "rounding" (half-even rounding scan).
struct DyadicCertificate {
    Int a = 0;
    Int s = 0;
    Int t = 0;
    Int s_max = 0;  // (r+t) 2^r + r
    Rational err_bound;
    Rational achieved_err;
    Rational signed_bias;
    std::string path;
    Rational lemma_floor;   // (1/12) 2^{-s}, reported
    Rational honest_floor;  // max(0, (1/3) 2^{-(s+1)} - achieved_err/2), asserted
};

// gamma must have arity qs.size(); the exact bias is cross-checked against an
// exhaustive evaluation before the certificate search runs.
DyadicCertificate dyadic_proximity(const GammaTable& gamma, const std::vector<PolyF2>& qs,
                                   const Int& t, const ExecPolicy& policy = serial_policy());

// |Pr[P = 1] - 1/3|, exact.
Rational one_third_gap(const PolyF2& p, const ExecPolicy& policy = serial_policy());

// Lower bound (1/3) 2^{-s} on the distance from 1/3 of any dyadic rational
// with denominator 2^s.
Rational dyadic_gap_floor(const Int& s);

// (1/12) 2^{-((r+2) 2^r + r)}: the uniform gap floor for Gamma-of-r-quadratics.
Rational delta_2r_bound(int r);

struct DeltaDr {
    bool materialized = false;
    Int psi_star_value = -1;
    Rational delta;  // 0 when not materialized
};

// Degree-d analogue through the collapse bound: psi*_{d,f}(r) quadratics with
// f(k) = profile threshold at delta = 2^{-(2 + 3k/2)}, then (1/12) 2^{-psi*}.
DeltaDr delta_dr_bound(int d, const Int& r, const CklProfile& profile = CklProfile{});

struct ScanResult {
    int d = 0;
    int m = 0;
    Rational rho;
    Rational min_gap;
    PolyF2 witness;
    Rational witness_pr;
    std::uint64_t searched = 0;
    // (Pr[P = 1], count) ascending over all polynomials scanned
    std::vector<std::pair<Rational, std::uint64_t>> census;
};

// Exhaustive census of |Pr[P=1] - rho| over every polynomial of degree <= d in
// m variables (constant term included). Throws when 2^#monomials > 2^26.
ScanResult min_gap_scan(int d, int m, const Rational& rho,
                        const ExecPolicy& policy = serial_policy());

struct WalkSchedule {
    double temperature = 0.02;
    bool greedy = false;
};

struct WalkStep {
    std::uint64_t step = 0;
    Rational gap;  // gap of the current state after the step
    bool accepted = false;
};

struct WalkResult {
    PolyF2 best;
    Rational best_gap;
    Rational best_pr;
    std::uint64_t best_step = 0;
    std::uint64_t accepted = 0;
    std::vector<std::pair<PolyF2, Rational>> top;  // distinct, gap ascending
    std::vector<WalkStep> trace;
};

// Seeded Metropolis walk over coefficient vectors of degree-<= d polynomials,
// minimizing |Pr[P=1] - target|. Fully deterministic for a fixed seed: the
// generator is consumed identically on every platform (rejection sampling for
// bounded draws, 53-bit mantissa uniforms).
WalkResult random_walk_search(int d, int m, const Rational& target, std::uint64_t steps,
                              std::uint64_t seed, const WalkSchedule& schedule = WalkSchedule{},
                              int top_k = 5, const ExecPolicy& policy = serial_policy());

}  // namespace f2lab
