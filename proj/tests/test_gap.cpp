#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdint>
#include <vector>

#include "f2lab/factors.hpp"
#include "f2lab/gap.hpp"
#include "f2lab/gf2.hpp"
#include "f2lab/rational.hpp"
#include "f2lab/spectral.hpp"

using namespace f2lab;

TEST_CASE("one-third gaps of the showcase polynomials") {
    CHECK(one_third_gap(parse_poly("x1*x2")) == Rational(1, 12));
    CHECK(one_third_gap(parse_poly("x1*x2 + x3*x4*x5 + x3*x6*x7")) == Rational(1, 96));
    CHECK(one_third_gap(parse_poly("x1*x2*x3 + x1*x4 + x4*x5*x6 + x7*x8*x9")) ==
          Rational(1, 384));
    CHECK(one_third_gap(parse_poly("0")) == Rational(1, 3));
}

TEST_CASE("dyadic rationals keep their distance from one third") {
    for (long s = 0; s <= 24; ++s) {
        Rational floor = dyadic_gap_floor(s);
        CHECK(floor == Rational(1, 3) * pow2r(-s));
        Int center = pow2i(static_cast<unsigned>(s)) / 3;
        for (Int a = center - 3; a <= center + 3; ++a) {
            Rational x = Rational(a) / pow2r(s);
            CHECK(abs_r(Rational(1, 3) - x) >= floor);
        }
    }
}

TEST_CASE("closed-form gap floors") {
    CHECK(delta_2r_bound(1) == Rational(1, 1536));
    CHECK(delta_2r_bound(0) == Rational(1, 48));

    DeltaDr dd = delta_dr_bound(2, 1);
    REQUIRE(dd.materialized);
    CHECK(dd.psi_star_value == 7);
    CHECK(dd.delta == delta_2r_bound(1));

    DeltaDr d0 = delta_dr_bound(2, 0);
    REQUIRE(d0.materialized);
    CHECK(d0.delta == Rational(1, 12) * pow2r(-d0.psi_star_value.convert_to<long>()));
}

TEST_CASE("dyadic proximity: already-dyadic bias") {
    DyadicCertificate c = dyadic_proximity(gamma_identity_r1(), {parse_poly("x1*x2")}, 2);
    CHECK(c.signed_bias == Rational(1, 2));
    CHECK(c.a == 1);
    CHECK(c.s == 1);
    CHECK(c.achieved_err == 0);
    CHECK(c.path == "interval");
    CHECK(c.s_max == 7);  // (r+t) 2^r + r at r=1, t=2
    CHECK(c.err_bound == Rational(1, 8));
    CHECK(c.lemma_floor == Rational(1, 24));
    CHECK(c.honest_floor == Rational(1, 12));
}

TEST_CASE("dyadic proximity: constant outer function") {
    GammaTable one = gamma_make(1);
    gamma_set_bit(one, 0, 1);
    gamma_set_bit(one, 1, 1);
    DyadicCertificate c = dyadic_proximity(one, {parse_poly("x1*x2")}, 2);
    CHECK(c.signed_bias == -1);
    CHECK(c.achieved_err == 0);
    CHECK(Rational(c.a) / pow2r(c.s.convert_to<long>()) == -1);
}

TEST_CASE("dyadic proximity: two scales under an AND") {
    GammaTable andg = gamma_make(2);
    gamma_set_bit(andg, 3, 1);
    std::vector<PolyF2> qs = {parse_poly("x1*x2", 6), parse_poly("x3*x4 + x5*x6", 6)};
    DyadicCertificate c = dyadic_proximity(andg, qs, 2);

    PolyF2 composed = poly_mul(qs[0], qs[1]);
    CHECK(c.signed_bias == signed_bias(composed));
    CHECK(abs_r(c.signed_bias - Rational(c.a) / pow2r(c.s.convert_to<long>())) ==
          c.achieved_err);
    CHECK(c.achieved_err <= c.err_bound);
    CHECK(c.honest_floor <= abs_r(pr_one(composed) - Rational(1, 3)));

    // larger slack tightens the error bound and still certifies
    DyadicCertificate tight = dyadic_proximity(andg, qs, 6);
    CHECK(tight.achieved_err <= tight.err_bound);
    CHECK(tight.err_bound <= pow2r(-6));
}

TEST_CASE("certificates hold across a seeded family") {
    for (std::uint64_t gbits = 1; gbits < 16; ++gbits) {
        GammaTable g = gamma_make(2);
        for (int i = 0; i < 4; ++i)
            gamma_set_bit(g, static_cast<std::uint64_t>(i), (gbits >> i) & 1);
        std::vector<PolyF2> qs = {parse_poly("x1*x2 + x3", 5),
                                  parse_poly("x2*x4 + x5", 5)};
        DyadicCertificate c = dyadic_proximity(g, qs, 3);
        CHECK(c.achieved_err <= c.err_bound);
        CHECK(abs_r(c.signed_bias - Rational(c.a) / pow2r(c.s.convert_to<long>())) ==
              c.achieved_err);
        CHECK(c.s <= c.s_max);
    }
}

TEST_CASE("minimum-gap scans") {
    ScanResult d1 = min_gap_scan(1, 3, Rational(1, 3));
    CHECK(d1.min_gap == Rational(1, 6));
    CHECK(d1.searched == 16);  // 2^4 affine functions

    ScanResult d2 = min_gap_scan(2, 2, Rational(1, 3));
    CHECK(d2.min_gap == Rational(1, 12));
    CHECK(d2.searched == 16);

    ScanResult d24 = min_gap_scan(2, 4, Rational(1, 3));
    CHECK(d24.min_gap == Rational(1, 24));
    CHECK(d24.witness_pr == Rational(3, 8));
    CHECK(one_third_gap(d24.witness) == Rational(1, 24));
    CHECK(d24.searched == 2048);

    // the cubic scan on 3 variables covers every boolean function
    ScanResult d3 = min_gap_scan(3, 3, Rational(1, 3));
    CHECK(d3.min_gap == Rational(1, 24));
    CHECK(d3.searched == 256);

    // census counts cover the whole space, probabilities all dyadic
    std::uint64_t total = 0;
    for (const auto& [pr, count] : d24.census) {
        total += count;
        Int den = denominator(pr);
        CHECK((den & (den - 1)) == 0);
    }
    CHECK(total == 2048);

    // at m = 3 every degree-2 function still has even weight (the top
    // monomial is absent), so the quadratic scan cannot beat 1/12 there
    CHECK(min_gap_scan(2, 3, Rational(1, 3)).min_gap == Rational(1, 12));

    CHECK_THROWS_AS(min_gap_scan(2, 7, Rational(1, 3)), DomainError);
}

TEST_CASE("random walk: determinism and trivial cases") {
    WalkResult zero = random_walk_search(2, 4, Rational(1, 3), 0, 99);
    CHECK(poly_is_zero(zero.best));
    CHECK(zero.best_gap == Rational(1, 3));
    CHECK(zero.trace.empty());

    WalkResult a = random_walk_search(2, 4, Rational(1, 3), 400, 7);
    WalkResult b = random_walk_search(2, 4, Rational(1, 3), 400, 7);
    CHECK(poly_equal(a.best, b.best));
    CHECK(a.best_gap == b.best_gap);
    CHECK(a.accepted == b.accepted);
    REQUIRE(a.trace.size() == b.trace.size());
    for (std::size_t i = 0; i < a.trace.size(); ++i) {
        CHECK(a.trace[i].step == b.trace[i].step);
        CHECK(a.trace[i].gap == b.trace[i].gap);
        CHECK(a.trace[i].accepted == b.trace[i].accepted);
    }
    CHECK(a.trace.front().step == 1);
    CHECK(a.trace.size() == 400);

    // a different seed explores a different path
    WalkResult c = random_walk_search(2, 4, Rational(1, 3), 400, 8);
    bool same = a.accepted == c.accepted && poly_equal(a.best, c.best);
    CHECK_FALSE((same && a.trace.back().gap == c.trace.back().gap));
}

TEST_CASE("random walk: quality and the best list") {
    WalkResult g = random_walk_search(2, 4, Rational(1, 3), 600, 3,
                                      WalkSchedule{0.0, true});
    CHECK(g.best_gap >= Rational(1, 24));  // provable floor for quadratics
    CHECK(g.best_gap <= Rational(1, 12));
    CHECK(g.best_pr == pr_one(g.best));

    WalkResult w = random_walk_search(3, 5, Rational(1, 3), 800, 5);
    REQUIRE_FALSE(w.top.empty());
    CHECK(w.top.size() <= 5);
    for (std::size_t i = 0; i + 1 < w.top.size(); ++i)
        CHECK(w.top[i].second <= w.top[i + 1].second);
    for (std::size_t i = 0; i < w.top.size(); ++i)
        for (std::size_t j = i + 1; j < w.top.size(); ++j)
            CHECK_FALSE(poly_equal(w.top[i].first, w.top[j].first));
    CHECK(w.top.front().second == w.best_gap);
    CHECK(w.accepted <= 800);
}
