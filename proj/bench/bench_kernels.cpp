// Serial-reference vs OpenMP-parallel timing for the enumeration kernels.
// Every parallel result is checked bit-identical against the serial one; a
// mismatch is a hard failure, not a footnote.

#include <bit>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <random>
#include <string>
#include <vector>

#include "f2lab/dist.hpp"
#include "f2lab/exec.hpp"
#include "f2lab/factors.hpp"
#include "f2lab/gap.hpp"
#include "f2lab/gf2.hpp"
#include "f2lab/spectral.hpp"

using namespace f2lab;

namespace {

template <typename F>
double seconds(F&& fn) {
    auto t0 = std::chrono::steady_clock::now();
    fn();
    auto t1 = std::chrono::steady_clock::now();
    return std::chrono::duration<double>(t1 - t0).count();
}

void report(const char* name, double serial, double parallel, bool match) {
    std::printf("%-18s serial %8.3fs   parallel %8.3fs   speedup %5.2fx   %s\n", name,
                serial, parallel, parallel > 0 ? serial / parallel : 0.0,
                match ? "identical" : "MISMATCH");
    if (!match) std::exit(1);
}

PolyF2 random_poly(std::mt19937_64& rng, int d, int m) {
    std::vector<std::uint64_t> monos;
    for (std::uint64_t mask = 1; mask < (1ull << m); ++mask)
        if (std::popcount(mask) <= d) monos.push_back(mask);
    std::vector<std::uint64_t> terms;
    for (std::uint64_t mo : monos)
        if (rng() & 1) terms.push_back(mo);
    if (terms.empty()) terms.push_back(monos.front());
    return make_poly(m, terms);
}

}  // namespace

int main(int argc, char** argv) {
    int workers = 4;
    int scale = 0;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--workers") == 0 && i + 1 < argc)
            workers = std::atoi(argv[++i]);
        else if (std::strcmp(argv[i], "--heavy") == 0)
            scale = 2;
        else {
            std::fprintf(stderr, "usage: bench_kernels [--workers N] [--heavy]\n");
            return 2;
        }
    }
    ExecPolicy ser = serial_policy();
    ExecPolicy par = ser;
    par.workers = workers;
    std::printf("kernels at %d workers (threads actually used: %d)\n", workers,
                effective_workers(par));

    std::mt19937_64 rng(0x5eedf21abull);

    {  // zeta transform on a random table
        int m = 20 + scale;
        TruthTable t = tt_make(m);
        for (auto& w : t.words) w = rng();
        TruthTable a = t, b = t;
        double s = seconds([&] { zeta_transform_serial(a); });
        double p = seconds([&] { zeta_transform(b, par); });
        report("zeta", s, p, a.words == b.words);
    }

    {  // Walsh spectrum of a random cubic
        int m = 16 + scale;
        PolyF2 poly = random_poly(rng, 3, m);
        WalshSpectrum a, b;
        double s = seconds([&] { a = walsh_spectrum(poly, ser); });
        double p = seconds([&] { b = walsh_spectrum(poly, par); });
        report("walsh", s, p, a.entries == b.entries);
    }

    {  // joint tally of eight disjoint-pair quadratics
        int m = 16 + scale;
        std::vector<PolyF2> polys;
        for (int i = 0; i < m / 2; ++i) {
            PolyF2 q = poly_mul(poly_var(m, 2 * i + 1), poly_var(m, 2 * i + 2));
            polys.push_back(q);
        }
        ExactDist a, b;
        double s = seconds([&] { a = joint_distribution(polys, ser); });
        double p = seconds([&] { b = joint_distribution(polys, par); });
        report("joint", s, p, a.counts == b.counts && a.denom == b.denom);
    }

    {  // combination sweep over a 14-member quadratic factor
        int m = 14 + scale;
        std::vector<PolyF2> members;
        for (int i = 0; i < m; ++i) members.push_back(random_poly(rng, 2, m));
        Factor f = make_factor(m, 2, members);
        RegularityCertificate a, b;
        double s = seconds([&] { a = regularity_witness(f, 3, ser); });
        double p = seconds([&] { b = regularity_witness(f, 3, par); });
        report("combo sweep", s, p,
               a.regular == b.regular && a.lambda == b.lambda && a.ell == b.ell);
    }

    {  // exhaustive quadratic gap census
        int m = 5 + (scale ? 1 : 0);
        ScanResult a, b;
        double s = seconds([&] { a = min_gap_scan(2, m, Rational(1, 3), ser); });
        double p = seconds([&] { b = min_gap_scan(2, m, Rational(1, 3), par); });
        report("scan", s, p,
               a.min_gap == b.min_gap && poly_equal(a.witness, b.witness) &&
                   a.census == b.census);
    }

    return 0;
}
