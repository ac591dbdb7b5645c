#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <bit>
#include <random>
#include <vector>

#include "f2lab/gf2.hpp"
#include "f2lab/quadratic.hpp"
#include "f2lab/rational.hpp"
#include "f2lab/spectral.hpp"
#include "f2lab/subspaces.hpp"

using namespace f2lab;

namespace {

PolyF2 rand_quadratic(std::mt19937_64& rng, int m) {
    std::vector<std::uint64_t> terms;
    for (std::uint64_t mask = 0; mask < (1ull << m); ++mask)
        if (std::popcount(mask) <= 2 && (rng() & 1)) terms.push_back(mask);
    return make_poly(m, terms);
}

}  // namespace

TEST_CASE("dickson normal forms of the basic quadratics") {
    DicksonForm a = dickson_decompose(parse_poly("x1*x2"));
    REQUIRE(a.pairs.size() == 1);
    CHECK_FALSE(a.has_tail);
    CHECK(a.c == 0);
    CHECK(poly_equal(linform_poly(2, a.pairs[0].first), parse_poly("x1", 2)));
    CHECK(poly_equal(linform_poly(2, a.pairs[0].second), parse_poly("x2", 2)));
    CHECK(bias_quadratic(parse_poly("x1*x2")) == Rational(1, 2));

    DicksonForm b = dickson_decompose(parse_poly("x1*x2 + 1"));
    CHECK(b.c == 1);
    CHECK(bias_quadratic(parse_poly("x1*x2 + 1")) == Rational(-1, 2));

    DicksonForm c = dickson_decompose(parse_poly("x1*x2 + x3"));
    REQUIRE(c.pairs.size() == 1);
    CHECK(c.has_tail);
    CHECK(c.tail == 0b100);
    CHECK(rank1_quadratic(parse_poly("x1*x2 + x3")) == 3);
    CHECK(bias_quadratic(parse_poly("x1*x2 + x3")) == 0);

    // completing the product absorbs the affine part
    DicksonForm d = dickson_decompose(parse_poly("x1*x2 + x1 + x2"));
    REQUIRE(d.pairs.size() == 1);
    CHECK_FALSE(d.has_tail);
    CHECK(d.c == 1);
    CHECK(poly_equal(linform_poly(2, d.pairs[0].first), parse_poly("x1 + 1", 2)));
    CHECK(poly_equal(linform_poly(2, d.pairs[0].second), parse_poly("x2 + 1")));
    CHECK(bias_quadratic(parse_poly("x1*x2 + x1 + x2")) == Rational(-1, 2));

    CHECK(rank1_quadratic(parse_poly("x1*x2 + x3*x4")) == 4);
    CHECK(bias_quadratic(parse_poly("x1*x2 + x3*x4")) == Rational(1, 4));
}

TEST_CASE("degenerate inputs") {
    CHECK(rank1_quadratic(parse_poly("0")) == 0);
    CHECK(rank1_quadratic(parse_poly("1")) == 0);
    CHECK(rank1_quadratic(parse_poly("x1")) == 1);
    CHECK(rank1_quadratic(parse_poly("x1 + x2 + 1")) == 1);
    CHECK(bias_quadratic(parse_poly("0")) == 1);
    CHECK(bias_quadratic(parse_poly("1")) == -1);
    CHECK(bias_quadratic(parse_poly("x1")) == 0);
    CHECK(dickson_decompose(parse_poly("x3", 3)).has_tail);
    CHECK_THROWS_AS(dickson_decompose(parse_poly("x1*x2*x3")), DomainError);
}

TEST_CASE("reconstruction and witness inventory on a random corpus") {
    std::mt19937_64 rng(41);
    for (int it = 0; it < 300; ++it) {
        PolyF2 p = rand_quadratic(rng, 6);
        DicksonForm f = dickson_decompose(p);
        CHECK(poly_equal(dickson_reconstruct(f), p));

        std::vector<PolyF2> wits = dickson_witness_polys(f);
        CHECK(static_cast<int>(wits.size()) == rank1_quadratic(p));
        for (const auto& w : wits) CHECK(poly_degree(w) <= 1);
    }
}

TEST_CASE("closed-form bias and rank agree with the spectral oracles") {
    std::mt19937_64 rng(42);
    for (int it = 0; it < 300; ++it) {
        PolyF2 p = rand_quadratic(rng, 6);
        CHECK(bias_quadratic(p) == signed_bias(p));
        CHECK(rank1_quadratic(p) == subspace_dim(dependency_space(p)));
    }
}

TEST_CASE("bias magnitude is determined by the pair count") {
    std::mt19937_64 rng(43);
    for (int it = 0; it < 200; ++it) {
        PolyF2 p = rand_quadratic(rng, 5);
        DicksonForm f = dickson_decompose(p);
        Rational b = bias_quadratic(p);
        if (f.has_tail) {
            CHECK(b == 0);
        } else {
            Rational mag = pow2r(-static_cast<long>(f.pairs.size()));
            CHECK(abs_r(b) == mag);
            CHECK(b == (f.c ? -mag : mag));
        }
    }
}
