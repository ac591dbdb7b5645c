#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "f2lab/gf2.hpp"
#include "f2lab/rational.hpp"

namespace f2lab {

// Exact distribution on {0,1}^n with rational masses count/denom. Outcomes are
// bit-packed (bit i = coordinate i+1), sorted ascending, counts positive.
// denom is 2^m for unconditioned polynomial tuples and |S| for conditioned
// laws; m records the ambient variable count (0 for synthetic distributions).
struct ExactDist {
    int n = 0;
    int m = 0;
    Int denom = 1;
    std::vector<std::pair<std::uint64_t, Int>> counts;
};

ExactDist joint_distribution(const std::vector<PolyF2>& polys,
                             const ExecPolicy& policy = serial_policy());
// Law of the tuple on inputs drawn uniformly from S (distinct points < 2^m).
ExactDist joint_distribution_conditioned(const std::vector<PolyF2>& polys,
                                         const std::vector<std::uint64_t>& s_points,
                                         const ExecPolicy& policy = serial_policy());
// Law of x -> values[x] for uniform x over 2^m inputs; values < 2^n.
ExactDist dist_from_table(const std::vector<std::uint64_t>& values, int m, int n);
ExactDist dist_from_table_conditioned(const std::vector<std::uint64_t>& values, int m, int n,
                                      const std::vector<std::uint64_t>& s_points);
ExactDist point_mass(int n, std::uint64_t outcome);

Rational dist_prob(const ExactDist& d, std::uint64_t outcome);
Rational tv_between(const ExactDist& a, const ExactDist& b);
Rational tv_to_uniform(const ExactDist& d);
// TV to the product Bernoulli(rho)^n; exact via the sparse-support identity
// 2 TV = sum_supp |p_y - B_y| + (1 - sum_supp B_y).
Rational tv_to_product_bernoulli(const ExactDist& d, const Rational& rho);

// Sparse distribution with rational masses (mixtures).
struct RationalDist {
    int n = 0;
    std::vector<std::pair<std::uint64_t, Rational>> probs;
};

RationalDist mix(const std::vector<std::pair<Rational, ExactDist>>& weighted);
Rational tv_mixed(const RationalDist& a, const ExactDist& b);

// Cov[1{P=1}, 1{Q=1}] under uniform input, exact.
Rational covariance_pair(const PolyF2& p, const PolyF2& q,
                         const ExecPolicy& policy = serial_policy());

struct LemmaReport {
    Rational lhs;
    Rational rhs;
    bool holds = false;
    Rational eps;
    Rational aux;  // delta for conditioning, tau for fixing, 0 otherwise
};

// TV(D, sum_i c_i T_i) >= 1 - sum_i (1+c_i)(1 - TV(D, T_i)); weights positive,
// summing to exactly 1.
LemmaReport convex_combination_check(const ExactDist& d,
                                     const std::vector<ExactDist>& components,
                                     const std::vector<Rational>& weights);
// Conditioning on S of density delta costs at most a (1 + 1/delta) factor on
// the closeness 1 - TV.
LemmaReport conditioning_check(const std::vector<std::uint64_t>& f_values, int m, int n,
                               const std::vector<std::uint64_t>& s_points, const ExactDist& y);
// Fixing lemma: gamma_values is the table of Gamma : {0,1}^k x {0,1}^j -> {0,1}^n
// (index = qbits | sigma << k), qs the k inner polynomials, qstar the j
// selector polynomials whose image is S.
LemmaReport fixing_check(const std::vector<std::uint64_t>& gamma_values, int k, int j, int n,
                         const std::vector<PolyF2>& qs, const std::vector<PolyF2>& qstar,
                         const ExactDist& y, const ExecPolicy& policy = serial_policy());

struct VarietyReport {
    int k = 0;
    Rational density;        // common-zero density
    Rational deviation;      // |density - 2^{-K}|
    Rational budget;         // 2^{-K} sum over nonempty S of |signed_bias(P_S)|
    bool identity_ok = false;  // density == 2^{-K}(1 + sum of signed biases)
    bool within_budget = false;
};

// Exact inclusion- free identity: the common-zero density of (P_1..P_K) equals
// 2^{-K} (1 + sum_{S nonempty} E[(-1)^{P_S}]); both the identity and the
// triangle-inequality budget are asserted.
VarietyReport variety_density(const std::vector<PolyF2>& tuple,
                              const ExecPolicy& policy = serial_policy());

struct VarietyCertified {
    VarietyReport base;
    Int threshold_r;
    bool regular = false;
    Rational eta;
    bool deviation_ok = false;  // deviation <= eta (asserted when regular)
};

// Certified variant: check the tuple is c_KL(2, 2^{-K} eta)-regular, then
// assert the density deviates from 2^{-K} by at most eta.
VarietyCertified variety_density_certified(const std::vector<PolyF2>& tuple,
                                           const Rational& eta,
                                           const ExecPolicy& policy = serial_policy());

struct PairAudit {
    int i = 0, j = 0;
    bool regular = false;
    Rational eta;     // exact TV of the joint petal tuple from uniform
    Rational cov;     // Cov[1{P_i=1}, 1{P_j=1}]
    bool cov_ok = false;  // |cov| <= 4 eta
    bool eta_ok = false;  // eta <= claimed eta
};

struct ChebyshevReport {
    std::vector<PairAudit> pairs;
    bool all_regular = false;
    bool all_cov_ok = false;
    Rational delta;            // min_i |pr_one(P_i) - 1/3|
    Rational mu;               // sum of pr_one
    Rational threshold;        // (1/3 + delta/2) n
    Rational tail_prob;        // exact Pr[sum of indicators < threshold]
    Rational variance;         // exact Var of the indicator sum
    Rational chebyshev_bound;  // variance / (mu - threshold)^2 when mu > threshold
    bool bound_applicable = false;
    bool chebyshev_ok = false;
    Rational tv_from_ber_third;  // reported, not asserted
};

// Second-moment audit: pairwise union-factor regularity at r, covariance
// against 4x the exact pairwise petal TV, and the exact lower tail of the
// indicator sum against the Chebyshev bound.
ChebyshevReport chebyshev_audit(const std::vector<PolyF2>& t,
                                const std::vector<std::vector<PolyF2>>& petals,
                                const Int& r, const Rational& eta_claim,
                                const ExecPolicy& policy = serial_policy());

}  // namespace f2lab
