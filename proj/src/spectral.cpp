#include "f2lab/spectral.hpp"

#include <algorithm>
#include <bit>

#include "f2lab/dist.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace f2lab {

namespace {

std::vector<long long> signs_from_table(const TruthTable& t) {
    const std::uint64_t n = std::uint64_t{1} << t.m;
    std::vector<long long> f(n);
    for (std::uint64_t x = 0; x < n; ++x) f[x] = tt_bit(t, x) ? -1 : 1;
    return f;
}

void wht_serial(std::vector<long long>& f) {
    const std::size_t n = f.size();
    for (std::size_t len = 1; len < n; len <<= 1)
        for (std::size_t base = 0; base < n; base += len << 1)
            for (std::size_t j = 0; j < len; ++j) {
                const long long a = f[base + j], b = f[base + len + j];
                f[base + j] = a + b;
                f[base + len + j] = a - b;
            }
}

void wht(std::vector<long long>& f, const ExecPolicy& policy) {
    const int workers = effective_workers(policy);
    if (workers <= 1) {
        wht_serial(f);
        return;
    }
#ifdef _OPENMP
    const std::int64_t n = static_cast<std::int64_t>(f.size());
    for (std::int64_t len = 1; len < n; len <<= 1) {
        const std::int64_t pairs = n / 2;
#pragma omp parallel for schedule(static) num_threads(workers)
        for (std::int64_t p = 0; p < pairs; ++p) {
            const std::int64_t base = (p / len) * 2 * len;
            const std::int64_t j = p % len;
            const long long a = f[base + j], b = f[base + len + j];
            f[base + j] = a + b;
            f[base + len + j] = a - b;
        }
    }
#else
    wht_serial(f);
#endif
}

void check_tuple(const std::vector<PolyF2>& polys, const ExecPolicy& policy) {
    if (polys.empty()) throw DomainError("empty polynomial tuple");
    const int m = polys[0].m;
    if (m > policy.enum_cap_m) throw DomainError("m exceeds enumeration cap");
    for (const auto& p : polys)
        if (p.m != m) throw DomainError("tuple members must share m");
    if (static_cast<int>(polys.size()) > policy.combo_cap_k)
        throw DomainError("tuple size exceeds combination cap");
}

// Largest |2^m - 2*ones| over the gray-code range [lo, hi) of combination
// counters; tables are XORed incrementally from the range's starting combo.
std::uint64_t sweep_best_numerator(const std::vector<TruthTable>& tabs, int m,
                                   std::uint64_t lo, std::uint64_t hi) {
    TruthTable cur = tt_make(m);
    const std::uint64_t start_combo = lo ^ (lo >> 1);
    for (std::size_t i = 0; i < tabs.size(); ++i)
        if ((start_combo >> i) & 1) tt_xor_inplace(cur, tabs[i]);
    const std::uint64_t total = std::uint64_t{1} << m;
    std::uint64_t best = 0;
    for (std::uint64_t g = lo; g < hi; ++g) {
        const std::uint64_t combo = g ^ (g >> 1);
        if (combo != 0) {
            const std::uint64_t ones = ones_count_serial(cur);
            const std::uint64_t num = ones * 2 > total ? ones * 2 - total : total - ones * 2;
            best = std::max(best, num);
        }
        if (g + 1 < hi) {
            const std::uint64_t nxt = g + 1;
            const int flip = std::countr_zero(nxt);  // gray(g)^gray(g+1) = bit ctz(g+1)
            tt_xor_inplace(cur, tabs[flip]);
        }
    }
    return best;
}

}  // namespace

WalshSpectrum walsh_spectrum(const PolyF2& p, const ExecPolicy& policy) {
    if (p.m > policy.enum_cap_m) throw DomainError("walsh_spectrum: m exceeds cap");
    TruthTable t = truth_table(p, policy);
    std::vector<long long> f = signs_from_table(t);
    wht(f, policy);
    WalshSpectrum s;
    s.m = p.m;
    Int parseval = 0;
    for (std::uint64_t g = 0; g < f.size(); ++g) {
        if (f[g] != 0) s.entries.emplace_back(g, f[g]);
        parseval += Int(f[g]) * f[g];
    }
    if (parseval != pow2i(static_cast<unsigned>(2 * p.m)))
        throw DomainError("walsh_spectrum: Parseval identity violated");
    return s;
}

Rational spectrum_coeff(const WalshSpectrum& s, std::uint64_t gamma) {
    auto it = std::lower_bound(s.entries.begin(), s.entries.end(), gamma,
                               [](const auto& e, std::uint64_t g) { return e.first < g; });
    if (it == s.entries.end() || it->first != gamma) return Rational(0);
    return Rational(Int(it->second), pow2i(static_cast<unsigned>(s.m)));
}

Rational pr_one(const PolyF2& p, const ExecPolicy& policy) {
    TruthTable t = truth_table(p, policy);
    return Rational(Int(ones_count(t, policy)), pow2i(static_cast<unsigned>(p.m)));
}

Rational signed_bias(const PolyF2& p, const ExecPolicy& policy) {
    TruthTable t = truth_table(p, policy);
    return signed_bias_of_table(t, policy);
}

Rational signed_bias_of_table(const TruthTable& t, const ExecPolicy& policy) {
    const Int total = pow2i(static_cast<unsigned>(t.m));
    const Int ones = ones_count(t, policy);
    return Rational(total - 2 * ones, total);
}

Subspace dependency_space(const PolyF2& p, const ExecPolicy& policy) {
    WalshSpectrum s = walsh_spectrum(p, policy);
    std::vector<std::uint64_t> freqs;
    for (const auto& [g, w] : s.entries)
        if (g != 0) freqs.push_back(g);
    return subspace_from_vectors(p.m, freqs);
}

Rational max_nonzero_bias(const std::vector<PolyF2>& polys, const ExecPolicy& policy) {
    check_tuple(polys, policy);
    const int m = polys[0].m;
    std::vector<TruthTable> tabs;
    tabs.reserve(polys.size());
    for (const auto& p : polys) tabs.push_back(truth_table(p, policy));
    const std::uint64_t count = std::uint64_t{1} << polys.size();
    const int workers = effective_workers(policy);
    std::uint64_t best = 0;
    if (workers <= 1 || count < 256) {
        best = sweep_best_numerator(tabs, m, 0, count);
    } else {
#ifdef _OPENMP
        std::vector<std::uint64_t> part(workers, 0);
#pragma omp parallel num_threads(workers)
        {
            const int w = omp_get_thread_num();
            const std::uint64_t lo = count * w / workers;
            const std::uint64_t hi = count * (w + 1) / workers;
            if (lo < hi) part[w] = sweep_best_numerator(tabs, m, lo, hi);
        }
        for (auto v : part) best = std::max(best, v);
#else
        best = sweep_best_numerator(tabs, m, 0, count);
#endif
    }
    return Rational(Int(best), pow2i(static_cast<unsigned>(m)));
}

VaziraniReport vazirani_check(const std::vector<PolyF2>& polys, const ExecPolicy& policy) {
    check_tuple(polys, policy);
    if (polys.size() > 16) throw DomainError("vazirani_check: n exceeds 16");
    VaziraniReport rep;
    rep.n = static_cast<int>(polys.size());
    rep.eps = max_nonzero_bias(polys, policy);
    ExactDist joint = joint_distribution(polys, policy);
    rep.tv = tv_to_uniform(joint);
    rep.tv_sq = rep.tv * rep.tv;
    rep.bound_sq = pow2r(rep.n) * rep.eps * rep.eps;
    rep.holds = rep.tv_sq <= rep.bound_sq;
    rep.bound_exact = (rep.n % 2 == 0);
    rep.bound = pow2r((rep.n + 1) / 2) * rep.eps;
    return rep;
}

}  // namespace f2lab
