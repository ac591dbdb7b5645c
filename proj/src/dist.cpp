#include "f2lab/dist.hpp"

#include <algorithm>
#include <bit>
#include <map>

#include "f2lab/factors.hpp"
#include "f2lab/spectral.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace f2lab {

namespace {

void check_joint_args(const std::vector<PolyF2>& polys, const ExecPolicy& policy) {
    if (polys.empty()) throw DomainError("joint_distribution: empty tuple");
    if (static_cast<int>(polys.size()) > policy.joint_cap_n)
        throw DomainError("joint_distribution: n exceeds joint cap");
    const int m = polys[0].m;
    if (m > policy.enum_cap_m) throw DomainError("joint_distribution: m exceeds cap");
    for (const auto& p : polys)
        if (p.m != m) throw DomainError("joint_distribution: members must share m");
}

ExactDist counts_to_dist(int n, int m, Int denom, std::vector<std::uint64_t>&& dense) {
    ExactDist d;
    d.n = n;
    d.m = m;
    d.denom = std::move(denom);
    for (std::uint64_t y = 0; y < dense.size(); ++y)
        if (dense[y]) d.counts.emplace_back(y, Int(dense[y]));
    return d;
}

std::uint64_t outcome_at(const std::vector<TruthTable>& tabs, std::uint64_t x) {
    std::uint64_t y = 0;
    for (std::size_t i = 0; i < tabs.size(); ++i)
        y |= static_cast<std::uint64_t>(tt_bit(tabs[i], x)) << i;
    return y;
}

void tally_range(const std::vector<TruthTable>& tabs, std::uint64_t lo, std::uint64_t hi,
                 std::vector<std::uint64_t>& dense) {
    for (std::uint64_t x = lo; x < hi; ++x) ++dense[outcome_at(tabs, x)];
}

Rational check_weights(const std::vector<Rational>& weights) {
    Rational sum = 0;
    for (const auto& w : weights) {
        if (w <= 0) throw DomainError("mixture weights must be positive");
        sum += w;
    }
    if (sum != 1) throw DomainError("mixture weights must sum to exactly 1");
    return sum;
}

}  // namespace

ExactDist joint_distribution(const std::vector<PolyF2>& polys, const ExecPolicy& policy) {
    check_joint_args(polys, policy);
    const int n = static_cast<int>(polys.size());
    const int m = polys[0].m;
    std::vector<TruthTable> tabs;
    tabs.reserve(polys.size());
    for (const auto& p : polys) tabs.push_back(truth_table(p, policy));
    const std::uint64_t total = std::uint64_t{1} << m;
    std::vector<std::uint64_t> dense(std::uint64_t{1} << n, 0);
    const int workers = effective_workers(policy);
    if (workers <= 1 || total < 4096) {
        tally_range(tabs, 0, total, dense);
    } else {
#ifdef _OPENMP
        std::vector<std::vector<std::uint64_t>> local(
            workers, std::vector<std::uint64_t>(dense.size(), 0));
#pragma omp parallel num_threads(workers)
        {
            const int w = omp_get_thread_num();
            const std::uint64_t lo = total / workers * w;
            const std::uint64_t hi = (w == workers - 1) ? total : total / workers * (w + 1);
            tally_range(tabs, lo, hi, local[w]);
        }
        // merge in thread-index order
        for (int w = 0; w < workers; ++w)
            for (std::uint64_t y = 0; y < dense.size(); ++y) dense[y] += local[w][y];
#else
        tally_range(tabs, 0, total, dense);
#endif
    }
    return counts_to_dist(n, m, Int(pow2i(static_cast<unsigned>(m))), std::move(dense));
}

ExactDist joint_distribution_conditioned(const std::vector<PolyF2>& polys,
                                         const std::vector<std::uint64_t>& s_points,
                                         const ExecPolicy& policy) {
    check_joint_args(polys, policy);
    if (s_points.empty()) throw DomainError("conditioning set is empty");
    const int n = static_cast<int>(polys.size());
    const int m = polys[0].m;
    const std::uint64_t total = std::uint64_t{1} << m;
    std::vector<std::uint64_t> sorted = s_points;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw DomainError("conditioning set has repeated points");
    if (sorted.back() >= total) throw DomainError("conditioning point out of range");
    std::vector<TruthTable> tabs;
    for (const auto& p : polys) tabs.push_back(truth_table(p, policy));
    std::vector<std::uint64_t> dense(std::uint64_t{1} << n, 0);
    for (auto x : sorted) ++dense[outcome_at(tabs, x)];
    return counts_to_dist(n, m, Int(sorted.size()), std::move(dense));
}

ExactDist dist_from_table(const std::vector<std::uint64_t>& values, int m, int n) {
    if (m < 0 || m > 24 || n < 0 || n > 24) throw DomainError("dist_from_table: dims out of range");
    const std::uint64_t total = std::uint64_t{1} << m;
    if (values.size() != total) throw DomainError("dist_from_table: table size mismatch");
    std::vector<std::uint64_t> dense(std::uint64_t{1} << n, 0);
    for (auto v : values) {
        if (v >> n) throw DomainError("dist_from_table: value out of range");
        ++dense[v];
    }
    return counts_to_dist(n, m, Int(pow2i(static_cast<unsigned>(m))), std::move(dense));
}

ExactDist dist_from_table_conditioned(const std::vector<std::uint64_t>& values, int m, int n,
                                      const std::vector<std::uint64_t>& s_points) {
    if (m < 0 || m > 24 || n < 0 || n > 24) throw DomainError("dist_from_table: dims out of range");
    const std::uint64_t total = std::uint64_t{1} << m;
    if (values.size() != total) throw DomainError("dist_from_table: table size mismatch");
    if (s_points.empty()) throw DomainError("conditioning set is empty");
    std::vector<std::uint64_t> sorted = s_points;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw DomainError("conditioning set has repeated points");
    if (sorted.back() >= total) throw DomainError("conditioning point out of range");
    std::vector<std::uint64_t> dense(std::uint64_t{1} << n, 0);
    for (auto x : sorted) {
        if (values[x] >> n) throw DomainError("dist_from_table: value out of range");
        ++dense[values[x]];
    }
    return counts_to_dist(n, m, Int(sorted.size()), std::move(dense));
}

ExactDist point_mass(int n, std::uint64_t outcome) {
    if (n < 0 || n > 63) throw DomainError("point_mass: n out of range");
    if (n < 63 && (outcome >> n)) throw DomainError("point_mass: outcome out of range");
    ExactDist d;
    d.n = n;
    d.m = 0;
    d.denom = 1;
    d.counts.emplace_back(outcome, Int(1));
    return d;
}

Rational dist_prob(const ExactDist& d, std::uint64_t outcome) {
    auto it = std::lower_bound(
        d.counts.begin(), d.counts.end(), outcome,
        [](const auto& e, std::uint64_t y) { return e.first < y; });
    if (it == d.counts.end() || it->first != outcome) return Rational(0);
    return Rational(it->second, d.denom);
}

Rational tv_between(const ExactDist& a, const ExactDist& b) {
    if (a.n != b.n) throw DomainError("tv_between: mismatched coordinate counts");
    Rational sum = 0;
    std::size_t i = 0, j = 0;
    while (i < a.counts.size() || j < b.counts.size()) {
        if (j == b.counts.size() ||
            (i < a.counts.size() && a.counts[i].first < b.counts[j].first)) {
            sum += Rational(a.counts[i].second, a.denom);
            ++i;
        } else if (i == a.counts.size() || b.counts[j].first < a.counts[i].first) {
            sum += Rational(b.counts[j].second, b.denom);
            ++j;
        } else {
            sum += abs_r(Rational(a.counts[i].second, a.denom) -
                         Rational(b.counts[j].second, b.denom));
            ++i;
            ++j;
        }
    }
    return sum / 2;
}

Rational tv_to_uniform(const ExactDist& d) {
    const Rational u = pow2r(-d.n);
    Rational sum = 0;
    for (const auto& [y, c] : d.counts) sum += abs_r(Rational(c, d.denom) - u);
    const Int missing = pow2i(static_cast<unsigned>(d.n)) - Int(d.counts.size());
    sum += Rational(missing) * u;
    return sum / 2;
}

Rational tv_to_product_bernoulli(const ExactDist& d, const Rational& rho) {
    if (rho < 0 || rho > 1) throw DomainError("tv_to_product_bernoulli: rho outside [0,1]");
    std::vector<Rational> rp(d.n + 1), qp(d.n + 1);
    rp[0] = 1;
    qp[0] = 1;
    for (int w = 1; w <= d.n; ++w) {
        rp[w] = rp[w - 1] * rho;
        qp[w] = qp[w - 1] * (1 - rho);
    }
    Rational diff = 0, mass = 0;
    for (const auto& [y, c] : d.counts) {
        const int w = std::popcount(y);
        const Rational by = rp[w] * qp[d.n - w];
        diff += abs_r(Rational(c, d.denom) - by);
        mass += by;
    }
    return (diff + 1 - mass) / 2;
}

RationalDist mix(const std::vector<std::pair<Rational, ExactDist>>& weighted) {
    if (weighted.empty()) throw DomainError("mix: empty mixture");
    std::vector<Rational> ws;
    for (const auto& [w, d] : weighted) ws.push_back(w);
    check_weights(ws);
    const int n = weighted[0].second.n;
    std::map<std::uint64_t, Rational> acc;
    for (const auto& [w, d] : weighted) {
        if (d.n != n) throw DomainError("mix: mismatched coordinate counts");
        for (const auto& [y, c] : d.counts) acc[y] += w * Rational(c, d.denom);
    }
    RationalDist out;
    out.n = n;
    for (auto& [y, p] : acc)
        if (p != 0) out.probs.emplace_back(y, p);
    return out;
}

Rational tv_mixed(const RationalDist& a, const ExactDist& b) {
    if (a.n != b.n) throw DomainError("tv_mixed: mismatched coordinate counts");
    Rational sum = 0;
    std::size_t i = 0, j = 0;
    while (i < a.probs.size() || j < b.counts.size()) {
        if (j == b.counts.size() ||
            (i < a.probs.size() && a.probs[i].first < b.counts[j].first)) {
            sum += a.probs[i].second;
            ++i;
        } else if (i == a.probs.size() || b.counts[j].first < a.probs[i].first) {
            sum += Rational(b.counts[j].second, b.denom);
            ++j;
        } else {
            sum += abs_r(a.probs[i].second - Rational(b.counts[j].second, b.denom));
            ++i;
            ++j;
        }
    }
    return sum / 2;
}

Rational covariance_pair(const PolyF2& p, const PolyF2& q, const ExecPolicy& policy) {
    if (p.m != q.m) throw DomainError("covariance_pair: mismatched m");
    TruthTable tp = truth_table(p, policy), tq = truth_table(q, policy);
    std::uint64_t n11 = 0;
    if (p.m < 6) {
        // Sub-word tables occupy the low 2^m bits of words[0].
        const std::uint64_t mask = (1ull << (1u << p.m)) - 1;
        n11 = static_cast<unsigned>(std::popcount(tp.words[0] & tq.words[0] & mask));
    } else {
        const std::int64_t nw = static_cast<std::int64_t>(tp.words.size());
        const int workers = effective_workers(policy);
        if (workers <= 1) {
            for (std::int64_t w = 0; w < nw; ++w)
                n11 += static_cast<unsigned>(std::popcount(tp.words[w] & tq.words[w]));
        } else {
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(workers) reduction(+ : n11)
            for (std::int64_t w = 0; w < nw; ++w)
                n11 += static_cast<unsigned>(std::popcount(tp.words[w] & tq.words[w]));
#else
            for (std::int64_t w = 0; w < nw; ++w)
                n11 += static_cast<unsigned>(std::popcount(tp.words[w] & tq.words[w]));
#endif
        }
    }
    const Int total = pow2i(static_cast<unsigned>(p.m));
    const Rational e11(Int(n11), total);
    const Rational e1(Int(ones_count(tp, policy)), total);
    const Rational e2(Int(ones_count(tq, policy)), total);
    return e11 - e1 * e2;
}

LemmaReport convex_combination_check(const ExactDist& d,
                                     const std::vector<ExactDist>& components,
                                     const std::vector<Rational>& weights) {
    if (components.empty() || components.size() != weights.size())
        throw DomainError("convex_combination_check: component/weight size mismatch");
    check_weights(weights);
    LemmaReport rep;
    Rational rhs = 1;
    std::vector<std::pair<Rational, ExactDist>> weighted;
    for (std::size_t i = 0; i < components.size(); ++i) {
        const Rational eps_i = 1 - tv_between(d, components[i]);
        rhs -= (1 + weights[i]) * eps_i;
        weighted.emplace_back(weights[i], components[i]);
    }
    rep.lhs = tv_mixed(mix(weighted), d);
    rep.rhs = rhs;
    rep.holds = rep.lhs >= rep.rhs;
    rep.eps = 0;
    rep.aux = 0;
    return rep;
}

LemmaReport conditioning_check(const std::vector<std::uint64_t>& f_values, int m, int n,
                               const std::vector<std::uint64_t>& s_points, const ExactDist& y) {
    ExactDist full = dist_from_table(f_values, m, n);
    ExactDist cond = dist_from_table_conditioned(f_values, m, n, s_points);
    LemmaReport rep;
    rep.eps = 1 - tv_between(full, y);
    const Rational delta(Int(s_points.size()), pow2i(static_cast<unsigned>(m)));
    rep.aux = delta;
    rep.lhs = tv_between(cond, y);
    rep.rhs = 1 - rep.eps * (1 + 1 / delta);
    rep.holds = rep.lhs >= rep.rhs;
    return rep;
}

LemmaReport fixing_check(const std::vector<std::uint64_t>& gamma_values, int k, int j, int n,
                         const std::vector<PolyF2>& qs, const std::vector<PolyF2>& qstar,
                         const ExactDist& y, const ExecPolicy& policy) {
    if (k < 1 || j < 1 || k + j > 24) throw DomainError("fixing_check: bad dimensions");
    if (static_cast<int>(qs.size()) != k || static_cast<int>(qstar.size()) != j)
        throw DomainError("fixing_check: tuple sizes do not match k, j");
    if (gamma_values.size() != (std::uint64_t{1} << (k + j)))
        throw DomainError("fixing_check: gamma table size mismatch");
    for (auto v : gamma_values)
        if (v >> n) throw DomainError("fixing_check: gamma value out of range");
    const int m = qs[0].m;
    for (const auto& p : qs)
        if (p.m != m) throw DomainError("fixing_check: tuple members must share m");
    for (const auto& p : qstar)
        if (p.m != m) throw DomainError("fixing_check: tuple members must share m");

    std::vector<TruthTable> tq, ts;
    for (const auto& p : qs) tq.push_back(truth_table(p, policy));
    for (const auto& p : qstar) ts.push_back(truth_table(p, policy));
    const std::uint64_t total = std::uint64_t{1} << m;

    std::vector<std::uint64_t> joint_dense(std::uint64_t{1} << n, 0);
    std::vector<std::uint64_t> sigma_count(std::uint64_t{1} << j, 0);
    for (std::uint64_t x = 0; x < total; ++x) {
        const std::uint64_t qb = outcome_at(tq, x);
        const std::uint64_t sb = outcome_at(ts, x);
        ++joint_dense[gamma_values[qb | (sb << k)]];
        ++sigma_count[sb];
    }
    ExactDist joint = counts_to_dist(n, m, Int(pow2i(static_cast<unsigned>(m))),
                                     std::move(joint_dense));

    LemmaReport rep;
    Rational eps = 0, tau = 2;
    int image_size = 0;
    for (std::uint64_t sigma = 0; sigma < sigma_count.size(); ++sigma) {
        if (!sigma_count[sigma]) continue;
        ++image_size;
        std::vector<std::uint64_t> dense(std::uint64_t{1} << n, 0);
        for (std::uint64_t x = 0; x < total; ++x)
            ++dense[gamma_values[outcome_at(tq, x) | (sigma << k)]];
        ExactDist d_sigma = counts_to_dist(n, m, Int(pow2i(static_cast<unsigned>(m))),
                                           std::move(dense));
        eps = std::max(eps, Rational(1 - tv_between(d_sigma, y)));
        tau = std::min(tau, Rational(Int(sigma_count[sigma]), pow2i(static_cast<unsigned>(m))));
    }
    rep.eps = eps;
    rep.aux = tau;
    rep.lhs = tv_between(joint, y);
    rep.rhs = 1 - 4 * eps * image_size / tau;
    rep.holds = rep.lhs >= rep.rhs;
    return rep;
}

VarietyReport variety_density(const std::vector<PolyF2>& tuple, const ExecPolicy& policy) {
    if (tuple.empty()) throw DomainError("variety_density: empty tuple");
    if (tuple.size() > 20) throw DomainError("variety_density: K exceeds 20");
    const int m = tuple[0].m;
    if (m > policy.enum_cap_m) throw DomainError("variety_density: m exceeds cap");
    for (const auto& p : tuple)
        if (p.m != m) throw DomainError("variety_density: members must share m");
    const int kk = static_cast<int>(tuple.size());
    std::vector<TruthTable> tabs;
    for (const auto& p : tuple) tabs.push_back(truth_table(p, policy));

    // common zeros: AND of complemented tables
    const std::uint64_t total = std::uint64_t{1} << m;
    Int zeros = 0;
    for (std::uint64_t x = 0; x < total; ++x) {
        bool all0 = true;
        for (const auto& t : tabs)
            if (tt_bit(t, x)) {
                all0 = false;
                break;
            }
        zeros += all0 ? 1 : 0;
    }

    VarietyReport rep;
    rep.k = kk;
    const Int tot = pow2i(static_cast<unsigned>(m));
    rep.density = Rational(zeros, tot);

    // signed biases of every nonzero subset sum, gray-code sweep
    Rational bias_sum = 0, bias_abs = 0;
    TruthTable cur = tt_make(m);
    const std::uint64_t combos = std::uint64_t{1} << kk;
    for (std::uint64_t g = 0; g < combos; ++g) {
        const std::uint64_t combo = g ^ (g >> 1);
        if (combo != 0) {
            const Rational b = signed_bias_of_table(cur, policy);
            bias_sum += b;
            bias_abs += abs_r(b);
        }
        if (g + 1 < combos) tt_xor_inplace(cur, tabs[std::countr_zero(g + 1)]);
    }

    const Rational base = pow2r(-kk);
    const Rational ident = base * (1 + bias_sum);
    rep.identity_ok = (rep.density == ident);
    if (!rep.identity_ok)
        throw DomainError("variety_density: character-sum identity violated");
    rep.deviation = abs_r(rep.density - base);
    rep.budget = base * bias_abs;
    rep.within_budget = rep.deviation <= rep.budget;
    if (!rep.within_budget)
        throw DomainError("variety_density: deviation exceeds triangle budget");
    return rep;
}

VarietyCertified variety_density_certified(const std::vector<PolyF2>& tuple,
                                           const Rational& eta,
                                           const ExecPolicy& policy) {
    if (eta <= 0 || eta > 1) throw DomainError("variety_density_certified: eta outside (0,1]");
    VarietyCertified out;
    out.base = variety_density(tuple, policy);
    out.eta = eta;
    const Rational delta = pow2r(-out.base.k) * eta;
    out.threshold_r = c_kl_2(delta);
    Factor f = make_factor(tuple[0].m, 2, tuple);
    RegularityCertificate cert = regularity_witness(f, out.threshold_r, policy);
    out.regular = cert.regular;
    out.deviation_ok = out.base.deviation <= eta;
    return out;
}

ChebyshevReport chebyshev_audit(const std::vector<PolyF2>& t,
                                const std::vector<std::vector<PolyF2>>& petals,
                                const Int& r, const Rational& eta_claim,
                                const ExecPolicy& policy) {
    if (t.size() < 2) throw DomainError("chebyshev_audit: need at least two polynomials");
    if (petals.size() != t.size())
        throw DomainError("chebyshev_audit: petals must match the tuple");
    const int m = t[0].m;
    for (const auto& p : t)
        if (p.m != m) throw DomainError("chebyshev_audit: members must share m");
    const int n = static_cast<int>(t.size());

    ChebyshevReport rep;
    rep.all_regular = true;
    rep.all_cov_ok = true;
    Rational cov_sum = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            PairAudit pa;
            pa.i = i;
            pa.j = j;
            std::vector<PolyF2> members = petals[i];
            members.insert(members.end(), petals[j].begin(), petals[j].end());
            Factor uf = make_factor(m, 2, members);
            pa.regular = regularity_witness(uf, r, policy).regular;
            pa.eta = tv_to_uniform(joint_distribution(members, policy));
            pa.cov = covariance_pair(t[i], t[j], policy);
            pa.cov_ok = abs_r(pa.cov) <= 4 * pa.eta;
            pa.eta_ok = pa.eta <= eta_claim;
            rep.all_regular = rep.all_regular && pa.regular;
            rep.all_cov_ok = rep.all_cov_ok && pa.cov_ok;
            cov_sum += pa.cov;
            rep.pairs.push_back(std::move(pa));
        }

    const Rational third(1, 3);
    Rational mu = 0, var_diag = 0, delta = 2;
    for (const auto& p : t) {
        const Rational pr = pr_one(p, policy);
        mu += pr;
        var_diag += pr * (1 - pr);
        delta = std::min(delta, abs_r(pr - third));
    }
    rep.delta = delta;
    rep.mu = mu;
    rep.threshold = (third + delta / 2) * n;
    rep.variance = var_diag + 2 * cov_sum;

    ExactDist joint = joint_distribution(t, policy);
    Rational tail = 0;
    for (const auto& [y, c] : joint.counts)
        if (Rational(std::popcount(y)) < rep.threshold) tail += Rational(c, joint.denom);
    rep.tail_prob = tail;
    rep.bound_applicable = mu > rep.threshold;
    if (rep.bound_applicable) {
        const Rational lam = mu - rep.threshold;
        rep.chebyshev_bound = rep.variance / (lam * lam);
        rep.chebyshev_ok = rep.tail_prob <= rep.chebyshev_bound;
    } else {
        rep.chebyshev_bound = 1;
        rep.chebyshev_ok = true;
    }
    rep.tv_from_ber_third = tv_to_product_bernoulli(joint, third);
    return rep;
}

}  // namespace f2lab
