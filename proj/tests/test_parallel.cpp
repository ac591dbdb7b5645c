// Bit-identity of every parallel kernel against the serial reference path.
// Worker counts are forced well above the host's core count on purpose; the
// merge order, not the scheduling, must determine every result.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <bit>
#include <random>
#include <vector>

#include "f2lab/dist.hpp"
#include "f2lab/exec.hpp"
#include "f2lab/factors.hpp"
#include "f2lab/gap.hpp"
#include "f2lab/gf2.hpp"
#include "f2lab/rational.hpp"
#include "f2lab/spectral.hpp"

using namespace f2lab;

namespace {

ExecPolicy workers(int n) {
    ExecPolicy p = serial_policy();
    p.workers = n;
    return p;
}

PolyF2 rand_poly(std::mt19937_64& rng, int d, int m) {
    std::vector<std::uint64_t> terms;
    for (std::uint64_t mask = 0; mask < (1ull << m); ++mask)
        if (std::popcount(mask) <= d && (rng() & 1)) terms.push_back(mask);
    return make_poly(m, terms);
}

}  // namespace

TEST_CASE("zeta transform") {
    std::mt19937_64 rng(71);
    for (int w : {2, 4, 7}) {
        TruthTable t = tt_make(14);
        for (auto& x : t.words) x = rng();
        TruthTable a = t, b = t;
        zeta_transform_serial(a);
        zeta_transform(b, workers(w));
        CHECK(a.words == b.words);
    }
}

TEST_CASE("truth tables, ones count, walsh spectra") {
    std::mt19937_64 rng(72);
    for (int it = 0; it < 10; ++it) {
        PolyF2 p = rand_poly(rng, 3, 12);
        TruthTable ts = truth_table(p, serial_policy());
        TruthTable tp = truth_table(p, workers(4));
        CHECK(ts.words == tp.words);
        CHECK(ones_count_serial(ts) == ones_count(ts, workers(4)));

        WalshSpectrum ws = walsh_spectrum(p, serial_policy());
        WalshSpectrum wp = walsh_spectrum(p, workers(4));
        CHECK(ws.entries == wp.entries);
        CHECK(poly_equal(anf_from_truth_table(ts, workers(3)), p));
    }
}

TEST_CASE("joint distributions and covariance") {
    std::vector<PolyF2> polys;
    for (int i = 0; i < 8; ++i)
        polys.push_back(poly_mul(poly_var(16, 2 * i + 1), poly_var(16, 2 * i + 2)));
    ExactDist a = joint_distribution(polys, serial_policy());
    ExactDist b = joint_distribution(polys, workers(4));
    CHECK(a.counts == b.counts);
    CHECK(a.denom == b.denom);

    std::mt19937_64 rng(73);
    for (int it = 0; it < 10; ++it) {
        PolyF2 p = rand_poly(rng, 2, 10), q = rand_poly(rng, 2, 10);
        CHECK(covariance_pair(p, q, serial_policy()) == covariance_pair(p, q, workers(4)));
        CHECK(pr_one(p, serial_policy()) == pr_one(p, workers(5)));
    }
}

TEST_CASE("combination sweeps") {
    std::mt19937_64 rng(74);
    for (int it = 0; it < 6; ++it) {
        std::vector<PolyF2> tuple;
        for (int i = 0; i < 11; ++i) tuple.push_back(rand_poly(rng, 2, 10));
        CHECK(max_nonzero_bias(tuple, serial_policy()) ==
              max_nonzero_bias(tuple, workers(4)));

        Factor f = make_factor(10, 2, tuple);
        RegularityCertificate cs = regularity_witness(f, 3, serial_policy());
        RegularityCertificate cp = regularity_witness(f, 3, workers(4));
        CHECK(cs.regular == cp.regular);
        CHECK(cs.lambda == cp.lambda);
        CHECK(cs.ell == cp.ell);
        CHECK(poly_equal(cs.combo, cp.combo));
    }
}

TEST_CASE("scans: census, witness, and minimum all match") {
    for (int w : {2, 4}) {
        ScanResult s = min_gap_scan(2, 4, Rational(1, 3), serial_policy());
        ScanResult p = min_gap_scan(2, 4, Rational(1, 3), workers(w));
        CHECK(s.min_gap == p.min_gap);
        CHECK(poly_equal(s.witness, p.witness));
        CHECK(s.witness_pr == p.witness_pr);
        CHECK(s.searched == p.searched);
        CHECK(s.census == p.census);
    }
    // the truth-table sweep path
    ScanResult s3 = min_gap_scan(3, 4, Rational(1, 3), serial_policy());
    ScanResult p3 = min_gap_scan(3, 4, Rational(1, 3), workers(4));
    CHECK(s3.min_gap == p3.min_gap);
    CHECK(poly_equal(s3.witness, p3.witness));
    CHECK(s3.census == p3.census);
}

TEST_CASE("variety density and vazirani reports") {
    std::vector<PolyF2> tuple = {parse_poly("x1*x2 + x3*x4", 10),
                                 parse_poly("x5*x6 + x7*x8", 10),
                                 parse_poly("x9*x10", 10)};
    VarietyReport vs = variety_density(tuple, serial_policy());
    VarietyReport vp = variety_density(tuple, workers(4));
    CHECK(vs.density == vp.density);
    CHECK(vs.budget == vp.budget);

    VaziraniReport zs = vazirani_check(tuple, serial_policy());
    VaziraniReport zp = vazirani_check(tuple, workers(4));
    CHECK(zs.tv == zp.tv);
    CHECK(zs.eps == zp.eps);
    CHECK(zs.holds == zp.holds);
}
