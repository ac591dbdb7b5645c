#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <bit>
#include <random>
#include <vector>

#include "f2lab/dist.hpp"
#include "f2lab/gf2.hpp"
#include "f2lab/rational.hpp"

using namespace f2lab;

namespace {

PolyF2 rand_poly(std::mt19937_64& rng, int d, int m) {
    std::vector<std::uint64_t> terms;
    for (std::uint64_t mask = 0; mask < (1ull << m); ++mask)
        if (std::popcount(mask) <= d && (rng() & 1)) terms.push_back(mask);
    return make_poly(m, terms);
}

ExactDist rand_dist(std::mt19937_64& rng, int n, int m) {
    std::vector<PolyF2> ps;
    for (int i = 0; i < n; ++i) ps.push_back(rand_poly(rng, 2, m));
    return joint_distribution(ps);
}

}  // namespace

TEST_CASE("joint distribution of two disjoint products") {
    ExactDist d = joint_distribution({parse_poly("x1*x2", 4), parse_poly("x3*x4", 4)});
    CHECK(d.n == 2);
    CHECK(d.m == 4);
    CHECK(d.denom == 16);
    CHECK(dist_prob(d, 0b00) == Rational(9, 16));
    CHECK(dist_prob(d, 0b01) == Rational(3, 16));
    CHECK(dist_prob(d, 0b10) == Rational(3, 16));
    CHECK(dist_prob(d, 0b11) == Rational(1, 16));

    CHECK(tv_to_uniform(d) == Rational(5, 16));
    CHECK(tv_to_product_bernoulli(d, Rational(1, 3)) == Rational(17, 144));
}

TEST_CASE("probabilities sum to one and TV lives in [0,1]") {
    std::mt19937_64 rng(51);
    for (int it = 0; it < 50; ++it) {
        ExactDist d = rand_dist(rng, 2, 5);
        Rational total = 0;
        for (std::uint64_t y = 0; y < 4; ++y) total += dist_prob(d, y);
        CHECK(total == 1);
        Rational tv = tv_to_uniform(d);
        CHECK(tv >= 0);
        CHECK(tv <= 1);
    }
}

TEST_CASE("triangle inequality on random triples") {
    std::mt19937_64 rng(52);
    for (int it = 0; it < 50; ++it) {
        ExactDist a = rand_dist(rng, 2, 5), b = rand_dist(rng, 2, 5),
                  c = rand_dist(rng, 2, 5);
        CHECK(tv_between(a, c) <= tv_between(a, b) + tv_between(b, c));
        CHECK(tv_between(a, b) == tv_between(b, a));
        CHECK(tv_between(a, a) == 0);
    }
}

TEST_CASE("point masses and bernoulli comparisons") {
    CHECK(tv_to_product_bernoulli(point_mass(1, 0), Rational(1, 3)) == Rational(1, 3));
    ExactDist coin = joint_distribution({parse_poly("x1")});
    CHECK(tv_to_product_bernoulli(coin, Rational(1, 3)) == Rational(1, 6));
    CHECK(tv_to_uniform(point_mass(3, 5)) == Rational(7, 8));
}

TEST_CASE("conditioned joints and table distributions") {
    // x1*x2 conditioned on S = {x1 = 1} becomes the coin x2
    ExactDist d = joint_distribution_conditioned({parse_poly("x1*x2")}, {1, 3});
    CHECK(d.denom == 2);
    CHECK(dist_prob(d, 1) == Rational(1, 2));

    std::vector<std::uint64_t> vals = {0, 1, 1, 0};  // XOR truth table
    ExactDist t = dist_from_table(vals, 2, 1);
    CHECK(dist_prob(t, 1) == Rational(1, 2));
    ExactDist tc = dist_from_table_conditioned(vals, 2, 1, {1, 2});
    CHECK(dist_prob(tc, 1) == 1);
}

TEST_CASE("covariance of indicator pairs") {
    CHECK(covariance_pair(parse_poly("x1*x2", 4), parse_poly("x3*x4", 4)) == 0);
    CHECK(covariance_pair(parse_poly("x1*x2"), parse_poly("x1*x2")) == Rational(3, 16));
    CHECK(covariance_pair(parse_poly("x1*x2", 3), parse_poly("x2*x3", 3)) ==
          Rational(1, 16));
}

TEST_CASE("mixtures") {
    ExactDist a = point_mass(2, 0), b = point_mass(2, 3);
    RationalDist mixed = mix({{Rational(1, 2), a}, {Rational(1, 2), b}});
    CHECK(tv_mixed(mixed, a) == Rational(1, 2));

    ExactDist u = joint_distribution({parse_poly("x1", 2), parse_poly("x2", 2)});
    RationalDist m2 = mix({{Rational(1, 4), a}, {Rational(3, 4), u}});
    CHECK(tv_mixed(m2, u) == Rational(3, 16));

    CHECK_THROWS_AS(mix({{Rational(1, 2), a}, {Rational(1, 3), b}}), DomainError);
    CHECK_THROWS_AS(mix({{Rational(3, 2), a}, {Rational(-1, 2), b}}), DomainError);
}

TEST_CASE("convex combination lemma") {
    std::mt19937_64 rng(53);
    // trivial mixture: k = 1, c1 = 1 reduces to an identity bound
    ExactDist d = rand_dist(rng, 2, 4);
    ExactDist t = rand_dist(rng, 2, 4);
    LemmaReport one = convex_combination_check(d, {t}, {Rational(1)});
    CHECK(one.holds);
    CHECK(one.lhs == tv_between(d, t));

    for (int it = 0; it < 200; ++it) {
        ExactDist y = rand_dist(rng, 2, 5);
        ExactDist t1 = rand_dist(rng, 2, 5), t2 = rand_dist(rng, 2, 5);
        Rational w(1 + static_cast<long>(rng() % 7), 8);
        LemmaReport rep = convex_combination_check(y, {t1, t2}, {w, 1 - w});
        CHECK(rep.holds);
        CHECK(rep.lhs >= rep.rhs);
    }
}

TEST_CASE("conditioning lemma") {
    // S = the full domain: delta = 1, bound collapses to 1 - 2 eps
    std::vector<std::uint64_t> vals(8);
    for (std::uint64_t x = 0; x < 8; ++x) vals[x] = x & 1;
    std::vector<std::uint64_t> all(8);
    for (std::uint64_t x = 0; x < 8; ++x) all[x] = x;
    ExactDist y = joint_distribution({parse_poly("x1", 3)});
    LemmaReport full = conditioning_check(vals, 3, 1, all, y);
    CHECK(full.holds);
    CHECK(full.aux == 1);

    std::mt19937_64 rng(54);
    for (int it = 0; it < 200; ++it) {
        std::vector<std::uint64_t> f(16);
        for (auto& v : f) v = rng() & 3;
        std::vector<std::uint64_t> s;
        for (std::uint64_t x = 0; x < 16; ++x)
            if (rng() & 1) s.push_back(x);
        if (s.empty()) s.push_back(rng() % 16);
        ExactDist target = rand_dist(rng, 2, 4);
        LemmaReport rep = conditioning_check(f, 4, 2, s, target);
        CHECK(rep.holds);
    }
}

TEST_CASE("fixing lemma") {
    std::mt19937_64 rng(55);
    for (int it = 0; it < 100; ++it) {
        const int k = 2, j = 1, n = 2, m = 5;
        std::vector<std::uint64_t> gamma(1ull << (k + j));
        for (auto& v : gamma) v = rng() & ((1ull << n) - 1);
        std::vector<PolyF2> qs = {rand_poly(rng, 2, m), rand_poly(rng, 2, m)};
        std::vector<PolyF2> qstar = {rand_poly(rng, 2, m)};
        ExactDist y = rand_dist(rng, n, 4);
        LemmaReport rep = fixing_check(gamma, k, j, n, qs, qstar, y);
        CHECK(rep.holds);
    }
}

TEST_CASE("variety density identity and budget") {
    VarietyReport rep =
        variety_density({parse_poly("x1*x2 + x3*x4", 8), parse_poly("x5*x6 + x7*x8", 8)});
    CHECK(rep.k == 2);
    CHECK(rep.density == Rational(25, 64));
    CHECK(rep.deviation == Rational(9, 64));
    CHECK(rep.budget == Rational(9, 64));
    CHECK(rep.identity_ok);
    CHECK(rep.within_budget);

    std::mt19937_64 rng(56);
    for (int it = 0; it < 60; ++it) {
        std::vector<PolyF2> tuple = {rand_poly(rng, 2, 5), rand_poly(rng, 2, 5)};
        VarietyReport r = variety_density(tuple);
        CHECK(r.identity_ok);
        CHECK(r.within_budget);
    }
}

TEST_CASE("certified variety density for a regular tuple") {
    // rank-8 members: the worst combination has rank 8, comfortably above
    // the threshold c_kl_2(eta / 2^k) = c_kl_2(1/8) = 6
    std::vector<PolyF2> tuple = {
        parse_poly("x1*x2 + x3*x4 + x5*x6 + x7*x8", 16),
        parse_poly("x9*x10 + x11*x12 + x13*x14 + x15*x16", 16)};
    VarietyCertified c = variety_density_certified(tuple, Rational(1, 2));
    CHECK(c.base.identity_ok);
    CHECK(c.threshold_r == 6);
    CHECK(c.regular);
    CHECK(c.base.density == Rational(289, 1024));   // (17/32)^2
    CHECK(c.base.deviation == Rational(33, 1024));  // |289/1024 - 1/4|
    CHECK(c.deviation_ok);
    CHECK(c.eta == Rational(1, 2));

    // a low-rank tuple cannot clear its own threshold
    VarietyCertified lo = variety_density_certified(
        {parse_poly("x1*x2 + x3*x4", 8), parse_poly("x5*x6 + x7*x8", 8)},
        Rational(9, 16));
    CHECK(lo.threshold_r == 6);
    CHECK_FALSE(lo.regular);
    CHECK(lo.deviation_ok);
}

TEST_CASE("chebyshev audit on three disjoint products") {
    std::vector<PolyF2> t = {parse_poly("x1*x2", 6), parse_poly("x3*x4", 6),
                             parse_poly("x5*x6", 6)};
    std::vector<std::vector<PolyF2>> petals = {
        {parse_poly("x1", 6), parse_poly("x2", 6)},
        {parse_poly("x3", 6), parse_poly("x4", 6)},
        {parse_poly("x5", 6), parse_poly("x6", 6)}};
    ChebyshevReport rep = chebyshev_audit(t, petals, 1, Rational(1));
    CHECK(rep.all_regular);
    CHECK(rep.all_cov_ok);
    REQUIRE(rep.pairs.size() == 3);
    for (const auto& pa : rep.pairs) {
        CHECK(pa.eta == 0);  // independent petal tuples are exactly uniform
        CHECK(pa.cov == 0);
    }
    CHECK(rep.delta == Rational(1, 12));
    CHECK(rep.mu == Rational(3, 4));
    CHECK(rep.threshold == Rational(9, 8));
    CHECK(rep.tail_prob == Rational(27, 32));
    CHECK(rep.variance == Rational(9, 16));
    CHECK_FALSE(rep.bound_applicable);  // mean below the threshold at n = 3
}
