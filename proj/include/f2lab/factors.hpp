#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "f2lab/gf2.hpp"
#include "f2lab/quadratic.hpp"
#include "f2lab/rational.hpp"

namespace f2lab {

// Ordered tuple of nonconstant polynomials of degree <= d over F2^m.
struct Factor {
    int m = 0;
    int d = 1;
    std::vector<PolyF2> members;
};

Factor make_factor(int m, int d, std::vector<PolyF2> members);
// Entry j-1 counts the members of exact degree j; length d.
std::vector<Int> dim_vector(const Factor& f);
// Inverse-lexicographic order: compare at the largest differing index, so
// (5,0) < (0,1). Vectors must have equal length. Returns -1, 0, or 1.
int invlex_compare(const std::vector<Int>& a, const std::vector<Int>& b);

// Growth function wrapper: evaluations are clamped to max(k, raw(k)) and
// monotonicity is validated across every queried point.
struct GrowthFn {
    std::string spec;
    std::function<Int(const Int&)> raw;
    std::shared_ptr<std::map<Int, Int>> seen = std::make_shared<std::map<Int, Int>>();
};

Int growth_eval(const GrowthFn& f, const Int& k);
// Accepted specs: id | add:<c> | mul:<c> | linear:c=<c> | ckl2:delta=<p/q>.
GrowthFn parse_growth(const std::string& spec);
GrowthFn growth_from_fn(std::string name, std::function<Int(const Int&)> raw);

// ceil(2 log2(1/delta)), exact: the smallest integer j with p^2 2^j >= q^2.
Int c_kl_2(const Rational& delta);

// Bias-to-rank thresholds per degree. d=1 is free, d=2 exact, d=3 a
// configurable kappa * ceil(log2 1/delta)^4, d>=4 must be supplied.
struct CklProfile {
    Int kappa3 = 1;
    std::function<Int(int, const Rational&)> higher;  // (d, log2(1/delta)) for d >= 4
    Int threshold(int d, const Rational& delta) const;
    // Same thresholds with the exponent log2(1/delta) given exactly (handles
    // delta = 2^{-L} for rational, possibly non-integer, L).
    Int threshold_log2inv(int d, const Rational& log2_inv_delta) const;
};

// Collapse procedure behind the locality bounds (iteration-capped; throws on
// cap overflow). vec is (M_1..M_d).
Int psi(int d, const GrowthFn& f, std::vector<Int> vec, std::uint64_t iter_cap = 10000000);
Int psi_star(int d, const GrowthFn& f, const Int& k, std::uint64_t iter_cap = 10000000);
// Certify psi_star(d,f)(k) >= bound without materializing it: the running sum
// of the vector is non-decreasing along the recursion and roughly doubles per
// step, so only O(log bound) steps are simulated.
bool psi_star_at_least(int d, const GrowthFn& f, const Int& k, const Int& bound);

// Rank with the conventions: rank_0 of a nonconstant polynomial is infinite;
// constants have rank 0; nonconstant affine forms have rank_1 = 1.
struct RankValue {
    bool infinite = false;
    Int value = 0;
};

bool rank_le(const RankValue& rv, const Int& r);

enum class RankMode { exact, heuristic_bias };

// Certificate of r-regularity, or the first violation in ascending-integer
// order over nonzero combinations (lambda_1 is the least-significant bit).
// A violation is a combination whose rank_{l-1} is <= r, where l is the
// formal degree max_i deg(lambda_i P_i). Exact mode requires members of
// degree <= 2; heuristic mode certifies via bias thresholds only and is
// flagged as such.
struct RegularityCertificate {
    bool regular = true;
    Int r;
    std::uint64_t lambda = 0;
    PolyF2 combo;
    int ell = 0;
    RankValue rank;
    bool heuristic = false;
};

RegularityCertificate regularity_witness(const Factor& f, const Int& r,
                                         const ExecPolicy& policy = serial_policy(),
                                         RankMode mode = RankMode::exact);

// One refinement replay record: the removed member equals the Gamma-shaped
// combination of the added members plus the other selected members plus c:
//   P[removed] = sum_t P[added[2t]] * P[added[2t+1]]
//              (+ P[added[2*pairs]] if has_tail) + sum P[other] + c
struct ReplayEvent {
    int removed_id = 0;
    std::vector<int> added_ids;
    int pair_count = 0;
    bool has_tail = false;
    int c = 0;
    std::vector<int> other_ids;
};

struct RefineOutcome {
    Factor factor;
    std::vector<int> ids;
    ReplayEvent event;
};

// Remove the lowest-index member of maximal formal degree with lambda != 0 and
// append the Dickson witness of the violating combination. Asserts a strict
// invlex decrease of the dimension vector.
RefineOutcome refine_step(const Factor& f, const std::vector<int>& ids, int& next_id,
                          const RegularityCertificate& cert);

struct RegularizeResult {
    Factor factor;
    std::vector<int> ids;
    std::vector<ReplayEvent> events;
    int iterations = 0;
    Int final_r = 0;
    Int psi_bound = -1;  // -1 when the bound was not materialized
    bool psi_ok = false;
};

// Iterate refinement with thresholds r = f(|F|) until regular; asserts the
// final size against psi_{d,f} of the initial dimension vector when that
// bound materializes.
RegularizeResult regularize(const Factor& f0, const GrowthFn& f,
                            const ExecPolicy& policy = serial_policy(),
                            std::uint64_t iter_cap = 100000);
// Re-derive every original member from the final members by expanding the
// replay events in reverse; exact symbolic verification.
bool replay_verify(const Factor& original, const RegularizeResult& result);

// Rank-lowering reduction of a (Gamma, Q-tuple, L-tuple) presentation: while
// some combination of surviving quadratics has rank_1 <= C(C+1)^k (r+s), its
// Dickson forms join L', linear dependencies are stripped (keeping earlier
// members), and the lowest selected quadratic is dropped. The rebuilt Gamma'
// is checked pointwise against the original on every input.
struct Rank21Result {
    int k = 0;
    std::vector<int> kept;  // surviving Q indices
    std::vector<PolyF2> lp;
    GammaTable gamma_out;
    Int threshold = 0;  // final C(C+1)^k (r+s)
    bool q_empty = false;
    bool size_ok = false;
    bool rank_ok = false;
    bool functional_ok = false;
};

Rank21Result regularize_rank21(const GammaTable& gamma, const std::vector<PolyF2>& qs,
                               const std::vector<PolyF2>& ls, const Int& c,
                               const ExecPolicy& policy = serial_policy());

// Greedy prefix of indices whose dependency spaces are pairwise disjoint from
// the accumulated span; every discarded polynomial's spectrum meets the span.
std::vector<int> greedy_independent_support(const std::vector<PolyF2>& polys,
                                            const ExecPolicy& policy = serial_policy());

// Factor with set semantics: members canonically sorted and deduplicated.
struct SetFactor {
    int m = 0;
    int d = 1;
    std::vector<PolyF2> members;
};

SetFactor set_factor(int m, int d, std::vector<PolyF2> members);
bool set_factor_contains(const SetFactor& f, const PolyF2& p);

struct SunflowerRegReport {
    std::vector<int> surviving;  // original indices, ascending
    std::vector<SetFactor> factors;
    SetFactor core;
    std::vector<SetFactor> petals;
    int w = 0;
    bool met_target = false;
    int iterations = 0;
    Int k_init = 0;
    Int k_final = 0;
    bool refinement_ok = false;
    bool locality_ok = false;
    bool pairwise_ok = false;
    bool sunflower_ok = false;
    double predicted_w_bound = 0.0;  // reported only
    bool predicted_w_materialized = false;
};

// Pairwise regularization of a collection of set-factors into a regular
// sunflower: refine the common core when it is not (f(2K)+2)-regular, refine
// irregular petals when they are at least half, otherwise build the
// union-irregularity graph and either keep a large independent set or recurse
// on the densest hub bucket. A constructive set-sunflower extraction runs as a
// post-pass, followed by validation of refinement replay, locality, pairwise
// union regularity, and the sunflower property.
SunflowerRegReport pairwise_sunflower_regularize(const std::vector<SetFactor>& fs,
                                                 const GrowthFn& f, int s_target,
                                                 const ExecPolicy& policy = serial_policy(),
                                                 std::uint64_t iter_cap = 10000);

}  // namespace f2lab
