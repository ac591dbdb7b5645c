#include "f2lab/gap.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

#include "f2lab/quadratic.hpp"
#include "f2lab/spectral.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace f2lab {

namespace {

// smallest e >= 0 with x * 2^e integral; x must be dyadic
Int dyadic_exponent(const Rational& x) {
    Int den = boost::multiprecision::denominator(x);
    Int e = 0;
    while (den > 1) {
        if (den % 2 != 0) throw DomainError("dyadic_exponent: not a dyadic rational");
        den >>= 1;
        ++e;
    }
    return e;
}

Rational pow2_neg(const Int& e) {
    if (e < 0) throw DomainError("pow2_neg: negative exponent");
    if (e > Int(1) << 20) throw DomainError("pow2_neg: exponent too large to materialize");
    Rational r(1);
    r /= Rational(pow2i(e.convert_to<unsigned>()));
    return r;
}

}  // namespace

DyadicCertificate dyadic_proximity(const GammaTable& gamma, const std::vector<PolyF2>& qs,
                                   const Int& t, const ExecPolicy& policy) {
    const int r = static_cast<int>(qs.size());
    if (r < 1 || r > 16) throw DomainError("dyadic_proximity: need 1..16 quadratics");
    if (gamma.bits != r) throw DomainError("dyadic_proximity: gamma arity mismatch");
    if (t < 0 || t > 40) throw DomainError("dyadic_proximity: t out of range");
    const int m = qs[0].m;
    for (const auto& q : qs) {
        if (q.m != m) throw DomainError("dyadic_proximity: members must share m");
        if (poly_degree(q) > 2) throw DomainError("dyadic_proximity: members must be quadratic");
    }
    if (m > policy.enum_cap_m) throw DomainError("dyadic_proximity: m exceeds cap");

    // Fourier coefficients of (-1)^Gamma via an integer Walsh transform
    const std::size_t n = std::size_t{1} << r;
    std::vector<long long> w(n);
    for (std::size_t z = 0; z < n; ++z) w[z] = gamma_bit(gamma, z) ? -1 : 1;
    for (int i = 0; i < r; ++i) {
        const std::size_t h = std::size_t{1} << i;
        for (std::size_t b = 0; b < n; b += 2 * h)
            for (std::size_t j = b; j < b + h; ++j) {
                const long long x = w[j], y = w[j + h];
                w[j] = x + y;
                w[j + h] = x - y;
            }
    }
    const Rational scale = Rational(1) / Rational(pow2i(static_cast<unsigned>(r)));

    // exact biases of every XOR combination of the quadratics
    std::vector<Rational> eps(n);
    for (std::size_t s = 0; s < n; ++s) {
        PolyF2 comb = poly_zero(m);
        for (int i = 0; i < r; ++i)
            if ((s >> i) & 1) comb = poly_add(comb, qs[i]);
        eps[s] = bias_quadratic(comb);
    }

    Rational e_exact(0);
    for (std::size_t s = 0; s < n; ++s)
        if (w[s] != 0) e_exact += Rational(w[s]) * scale * eps[s];

    // cross-check against a direct evaluation of Gamma(Q(x))
    {
        std::vector<TruthTable> tabs;
        for (const auto& q : qs) tabs.push_back(truth_table(q, policy));
        const std::uint64_t total = std::uint64_t{1} << m;
        Int ones = 0;
        for (std::uint64_t x = 0; x < total; ++x) {
            std::uint64_t z = 0;
            for (int i = 0; i < r; ++i)
                z |= static_cast<std::uint64_t>(tt_bit(tabs[i], x)) << i;
            if (gamma_bit(gamma, z)) ++ones;
        }
        const Rational direct =
            Rational(pow2i(static_cast<unsigned>(m)) - 2 * ones) /
            Rational(pow2i(static_cast<unsigned>(m)));
        if (direct != e_exact)
            throw DomainError("dyadic_proximity: spectral bias disagrees with evaluation");
    }

    DyadicCertificate cert;
    cert.t = t;
    cert.signed_bias = e_exact;
    const Int rt = Int(r) + t;
    cert.s_max = rt * pow2i(static_cast<unsigned>(r)) + r;
    const unsigned rtu = rt.convert_to<unsigned>();

    bool found = false;
    // path 1: first empty dyadic band (2^{-(r+t)(i+1)}, 2^{-(r+t)i}]
    for (std::uint64_t i = 0; !found && Int(i) * rt + r <= cert.s_max; ++i) {
        const Rational hi = pow2_neg(Int(i) * rt);
        const Rational lo = pow2_neg(Int(i + 1) * rt);
        bool empty = true;
        for (std::size_t s = 0; s < n && empty; ++s) {
            const Rational a = abs_r(eps[s]);
            if (a > lo && a <= hi) empty = false;
        }
        if (!empty) continue;
        const Int sv = Int(i) * rt + r;
        const Int mult = pow2i(static_cast<unsigned>(i) * rtu);
        Rational acc(0);
        for (std::size_t s = 0; s < n; ++s)
            if (w[s] != 0 && abs_r(eps[s]) > hi)
                acc += Rational(w[s]) * eps[s] * Rational(mult);
        // acc is an integer by construction (|eps| > 2^{-(r+t)i} has precision
        // < (r+t)i, and w carries the 2^r)
        if (boost::multiprecision::denominator(acc) != 1)
            throw DomainError("dyadic_proximity: interval numerator not integral");
        const Int a = boost::multiprecision::numerator(acc);
        const Rational approx = Rational(a) / Rational(pow2i(sv.convert_to<unsigned>()));
        const Rational err = abs_r(e_exact - approx);
        if (err <= pow2_neg(t + sv)) {
            cert.a = a;
            cert.s = sv;
            cert.achieved_err = err;
            cert.path = "interval";
            found = true;
        }
    }
    // path 2: E itself is representable at precision s_max
    if (!found) {
        const Int e = dyadic_exponent(e_exact);
        if (e <= cert.s_max) {
            cert.s = cert.s_max;
            cert.a = boost::multiprecision::numerator(e_exact) *
                     (pow2i(cert.s_max.convert_to<unsigned>()) /
                      boost::multiprecision::denominator(e_exact));
            cert.achieved_err = 0;
            cert.path = "exact";
            found = true;
        }
    }
    // path 3: half-even rounding, widest precision first
    for (Int sv = cert.s_max; !found && sv >= 0; --sv) {
        const Int p2 = pow2i(sv.convert_to<unsigned>());
        const Rational scaled = e_exact * Rational(p2);
        const Int num = boost::multiprecision::numerator(scaled);
        const Int den = boost::multiprecision::denominator(scaled);
        Int q = num / den, rem = num % den;
        if (rem < 0) {
            q -= 1;
            rem += den;
        }
        Int a = q;
        const Int twice = 2 * rem;
        if (twice > den || (twice == den && q % 2 != 0)) a = q + 1;
        const Rational approx = Rational(a) / Rational(p2);
        const Rational err = abs_r(e_exact - approx);
        if (err <= pow2_neg(t + sv)) {
            cert.a = a;
            cert.s = sv;
            cert.achieved_err = err;
            cert.path = "rounding";
            found = true;
        }
    }
    if (!found) throw DomainError("dyadic_proximity: no certificate within the error bound");

    // reduce A / 2^s to lowest terms
    while (cert.s > 0 && cert.a % 2 == 0 && cert.a != 0) {
        cert.a /= 2;
        cert.s -= 1;
    }
    if (cert.a == 0) cert.s = 0;
    cert.err_bound = pow2_neg(t + cert.s);
    if (cert.achieved_err > cert.err_bound)
        throw DomainError("dyadic_proximity: reduction broke the error bound");

    cert.lemma_floor = Rational(1, 12) * pow2_neg(cert.s);
    Rational honest = Rational(1, 3) * pow2_neg(cert.s + 1) - cert.achieved_err / 2;
    if (honest < 0) honest = 0;
    cert.honest_floor = honest;

    // the honest floor must be met by the actual distance from 1/3
    const Rational pr = (Rational(1) - e_exact) / 2;
    if (abs_r(pr - Rational(1, 3)) < cert.honest_floor)
        throw DomainError("dyadic_proximity: honest floor violated");
    return cert;
}

Rational one_third_gap(const PolyF2& p, const ExecPolicy& policy) {
    return abs_r(pr_one(p, policy) - Rational(1, 3));
}

Rational dyadic_gap_floor(const Int& s) {
    if (s < 0) throw DomainError("dyadic_gap_floor: negative precision");
    return Rational(1, 3) * pow2_neg(s);
}

Rational delta_2r_bound(int r) {
    if (r < 0 || r > 16) throw DomainError("delta_2r_bound: r out of range");
    const Int s_max = (Int(r) + 2) * pow2i(static_cast<unsigned>(r)) + r;
    return Rational(1, 12) * pow2_neg(s_max);
}

DeltaDr delta_dr_bound(int d, const Int& r, const CklProfile& profile) {
    if (d < 1) throw DomainError("delta_dr_bound: degree must be >= 1");
    if (r < 0) throw DomainError("delta_dr_bound: negative r");
    DeltaDr out;
    GrowthFn f = growth_from_fn("delta-dr", [d, &profile](const Int& k) {
        return profile.threshold_log2inv(d, Rational(2) + Rational(3) * Rational(k) / 2);
    });
    try {
        out.psi_star_value = psi_star(d, f, r, 2000000);
    } catch (const DomainError&) {
        return out;  // collapse bound not materializable at this size
    }
    if (out.psi_star_value > Int(1) << 20) return out;
    out.delta = Rational(1, 12) * pow2_neg(out.psi_star_value);
    out.materialized = true;
    return out;
}

// ---------------------------------------------------------------------------
// exhaustive census
// ---------------------------------------------------------------------------

namespace {

std::vector<std::uint64_t> monomial_masks(int d, int m) {
    std::vector<std::uint64_t> out;
    const std::uint64_t total = m >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m);
    for (std::uint64_t mask = 0;; ++mask) {
        if (std::popcount(mask) <= d) out.push_back(mask);
        if (mask + 1 >= total && m < 64) break;
        if (mask == ~std::uint64_t{0}) break;
    }
    return out;
}

struct ScanPart {
    bool found = false;
    Rational min_gap;
    std::uint64_t witness_pos = 0;  // coefficient value (d<=2) or gray position (d>=3)
    std::uint64_t witness_ones = 0;
    std::vector<std::uint64_t> hist;  // by ones-count
};

PolyF2 poly_from_coeffs(int m, const std::vector<std::uint64_t>& mons, std::uint64_t c) {
    std::vector<std::uint64_t> terms;
    for (std::size_t i = 0; i < mons.size(); ++i)
        if ((c >> i) & 1) terms.push_back(mons[i]);
    PolyF2 p;
    p.m = m;
    p.terms = std::move(terms);  // monomials ascend, so terms are sorted
    return p;
}

ScanPart scan_quadratic_range(int m, const std::vector<std::uint64_t>& mons,
                              const Rational& rho, std::uint64_t lo, std::uint64_t hi) {
    ScanPart part;
    part.hist.assign((std::size_t{1} << m) + 1, 0);
    const Rational denom(pow2i(static_cast<unsigned>(m)));
    for (std::uint64_t c = lo; c < hi; ++c) {
        PolyF2 p = poly_from_coeffs(m, mons, c);
        const Rational eps = bias_quadratic(p);
        const Rational pr = (Rational(1) - eps) / 2;
        const Rational gap = abs_r(pr - rho);
        const std::uint64_t ones = (pr * denom).convert_to<std::uint64_t>();
        ++part.hist[ones];
        if (!part.found || gap < part.min_gap) {
            part.found = true;
            part.min_gap = gap;
            part.witness_pos = c;
            part.witness_ones = ones;
        }
    }
    return part;
}

ScanPart scan_table_range(int m, const std::vector<std::uint64_t>& mons, const Rational& rho,
                          std::uint64_t lo, std::uint64_t hi, const ExecPolicy& policy) {
    ScanPart part;
    part.hist.assign((std::size_t{1} << m) + 1, 0);
    std::vector<TruthTable> mt;
    mt.reserve(mons.size());
    for (auto mask : mons) {
        PolyF2 p;
        p.m = m;
        p.terms = {mask};
        mt.push_back(truth_table(p, policy));
    }
    TruthTable cur = tt_make(m);
    const std::uint64_t start = lo ^ (lo >> 1);
    for (std::size_t i = 0; i < mons.size(); ++i)
        if ((start >> i) & 1) tt_xor_inplace(cur, mt[i]);
    const Rational denom(pow2i(static_cast<unsigned>(m)));
    for (std::uint64_t g = lo; g < hi; ++g) {
        const Int ones_i = ones_count_serial(cur);
        const std::uint64_t ones = ones_i.convert_to<std::uint64_t>();
        const Rational pr = Rational(ones_i) / denom;
        const Rational gap = abs_r(pr - rho);
        ++part.hist[ones];
        if (!part.found || gap < part.min_gap) {
            part.found = true;
            part.min_gap = gap;
            part.witness_pos = g;
            part.witness_ones = ones;
        }
        if (g + 1 < hi) tt_xor_inplace(cur, mt[std::countr_zero(g + 1)]);
    }
    return part;
}

}  // namespace

ScanResult min_gap_scan(int d, int m, const Rational& rho, const ExecPolicy& policy) {
    if (d < 1 || m < 1) throw DomainError("min_gap_scan: need d >= 1 and m >= 1");
    if (m > policy.enum_cap_m || m > 24) throw DomainError("min_gap_scan: m exceeds cap");
    if (rho < 0 || rho > 1) throw DomainError("min_gap_scan: rho outside [0,1]");
    const std::vector<std::uint64_t> mons = monomial_masks(d, m);
    if (mons.size() > 26) throw DomainError("min_gap_scan: more than 2^26 polynomials");
    const std::uint64_t count = std::uint64_t{1} << mons.size();

    const int workers = effective_workers(policy);
    std::vector<ScanPart> parts;
    auto run = [&](std::uint64_t lo, std::uint64_t hi) {
        return d <= 2 ? scan_quadratic_range(m, mons, rho, lo, hi)
                      : scan_table_range(m, mons, rho, lo, hi, policy);
    };
    if (workers <= 1 || count < 1024) {
        parts.push_back(run(0, count));
    } else {
#ifdef _OPENMP
        parts.assign(workers, ScanPart{});
#pragma omp parallel num_threads(workers)
        {
            const int w = omp_get_thread_num();
            const std::uint64_t lo = count * w / workers;
            const std::uint64_t hi = count * (w + 1) / workers;
            if (lo < hi) parts[w] = run(lo, hi);
        }
#else
        parts.push_back(run(0, count));
#endif
    }

    ScanResult res;
    res.d = d;
    res.m = m;
    res.rho = rho;
    res.searched = count;
    std::vector<std::uint64_t> hist((std::size_t{1} << m) + 1, 0);
    ScanPart best;
    for (const auto& part : parts) {
        if (part.hist.empty()) continue;
        for (std::size_t i = 0; i < hist.size(); ++i) hist[i] += part.hist[i];
        if (part.found &&
            (!best.found || part.min_gap < best.min_gap ||
             (part.min_gap == best.min_gap && part.witness_pos < best.witness_pos)))
            best = part;
    }
    if (!best.found) throw DomainError("min_gap_scan: empty scan");
    res.min_gap = best.min_gap;
    const std::uint64_t wmask = d <= 2 ? best.witness_pos
                                       : (best.witness_pos ^ (best.witness_pos >> 1));
    res.witness = poly_from_coeffs(m, mons, wmask);
    res.witness_pr =
        Rational(best.witness_ones) / Rational(pow2i(static_cast<unsigned>(m)));
    for (std::size_t ones = 0; ones < hist.size(); ++ones)
        if (hist[ones])
            res.census.emplace_back(
                Rational(ones) / Rational(pow2i(static_cast<unsigned>(m))), hist[ones]);
    return res;
}

// ---------------------------------------------------------------------------
// seeded walk
// ---------------------------------------------------------------------------

namespace {

std::uint64_t bounded_draw(std::mt19937_64& rng, std::uint64_t n) {
    // rejection sampling; identical draw sequence on every platform
    const std::uint64_t limit = n == 0 ? 0 : (~std::uint64_t{0} - (~std::uint64_t{0} % n + 1) % n);
    while (true) {
        const std::uint64_t v = rng();
        if (v <= limit) return v % n;
    }
}

double unit_draw(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

WalkResult random_walk_search(int d, int m, const Rational& target, std::uint64_t steps,
                              std::uint64_t seed, const WalkSchedule& schedule, int top_k,
                              const ExecPolicy& policy) {
    if (d < 1 || m < 1) throw DomainError("random_walk_search: need d >= 1 and m >= 1");
    if (m > 20) throw DomainError("random_walk_search: m exceeds cap");
    if (target < 0 || target > 1) throw DomainError("random_walk_search: target outside [0,1]");
    if (top_k < 1) throw DomainError("random_walk_search: top_k must be >= 1");
    const std::vector<std::uint64_t> mons = monomial_masks(d, m);
    std::vector<TruthTable> mt;
    mt.reserve(mons.size());
    for (auto mask : mons) {
        PolyF2 p;
        p.m = m;
        p.terms = {mask};
        mt.push_back(truth_table(p, policy));
    }

    std::mt19937_64 rng(seed);
    const Rational denom(pow2i(static_cast<unsigned>(m)));
    std::vector<std::uint64_t> coeff((mons.size() + 63) / 64, 0);
    TruthTable cur = tt_make(m);
    auto current_poly = [&] {
        std::vector<std::uint64_t> terms;
        for (std::size_t i = 0; i < mons.size(); ++i)
            if ((coeff[i / 64] >> (i % 64)) & 1) terms.push_back(mons[i]);
        PolyF2 p;
        p.m = m;
        p.terms = std::move(terms);
        return p;
    };
    auto gap_of = [&] {
        return abs_r(Rational(ones_count_serial(cur)) / denom - target);
    };

    WalkResult res;
    Rational gap = gap_of();
    res.best = current_poly();
    res.best_gap = gap;
    res.best_pr = Rational(ones_count_serial(cur)) / denom;
    res.best_step = 0;
    auto offer_top = [&](const PolyF2& p, const Rational& g) {
        const std::string key = serialize_poly(p);
        for (const auto& [q, _] : res.top)
            if (serialize_poly(q) == key) return;
        res.top.emplace_back(p, g);
        std::sort(res.top.begin(), res.top.end(), [](const auto& x, const auto& y) {
            if (x.second != y.second) return x.second < y.second;
            return poly_less(x.first, y.first);
        });
        if (static_cast<int>(res.top.size()) > top_k) res.top.pop_back();
    };
    offer_top(res.best, gap);
    res.trace.reserve(steps);

    for (std::uint64_t step = 1; step <= steps; ++step) {
        const std::uint64_t pick = bounded_draw(rng, mons.size());
        tt_xor_inplace(cur, mt[pick]);
        const Rational cand = gap_of();
        bool accept;
        if (cand <= gap) {
            accept = true;
        } else if (schedule.greedy) {
            accept = false;
        } else {
            const double delta = (cand - gap).convert_to<double>();
            const double p = std::exp(-delta / schedule.temperature);
            accept = unit_draw(rng) < p;
        }
        if (accept) {
            coeff[pick / 64] ^= std::uint64_t{1} << (pick % 64);
            gap = cand;
            ++res.accepted;
            if (gap < res.best_gap) {
                res.best_gap = gap;
                res.best = current_poly();
                res.best_pr = Rational(ones_count_serial(cur)) / denom;
                res.best_step = step;
            }
            offer_top(current_poly(), gap);
        } else {
            tt_xor_inplace(cur, mt[pick]);  // revert
        }
        res.trace.push_back(WalkStep{step, gap, accept});
    }
    return res;
}

}  // namespace f2lab
