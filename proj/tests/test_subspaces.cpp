#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <vector>

#include "f2lab/rational.hpp"
#include "f2lab/subspaces.hpp"

using namespace f2lab;

namespace {

Subspace span_of(int m, std::initializer_list<std::uint64_t> vecs) {
    return subspace_from_vectors(m, std::vector<std::uint64_t>(vecs));
}

Subspace rand_space(std::mt19937_64& rng, int m, int gens) {
    std::vector<std::uint64_t> vecs;
    for (int i = 0; i < gens; ++i) vecs.push_back(rng() & ((1ull << m) - 1));
    return subspace_from_vectors(m, vecs);
}

}  // namespace

TEST_CASE("canonical basis is generator-independent") {
    Subspace a = span_of(4, {0b0011, 0b0110});
    Subspace b = span_of(4, {0b0101, 0b0110});  // same span, different generators
    CHECK(subspace_equal(a, b));
    CHECK(subspace_dim(a) == 2);
    CHECK(a.basis == b.basis);

    Subspace zero = span_of(4, {});
    CHECK(subspace_dim(zero) == 0);
    CHECK(subspace_contains(zero, 0));
    CHECK_FALSE(subspace_contains(zero, 1));
}

TEST_CASE("membership, sum, intersection") {
    Subspace a = span_of(3, {0b001, 0b010});
    Subspace b = span_of(3, {0b010, 0b100});
    CHECK(subspace_contains(a, 0b011));
    CHECK_FALSE(subspace_contains(a, 0b100));

    Subspace s = subspace_sum(a, b);
    CHECK(subspace_dim(s) == 3);

    Subspace i = subspace_intersect(a, b);
    CHECK(subspace_dim(i) == 1);
    CHECK(subspace_contains(i, 0b010));

    // dim(a) + dim(b) = dim(a+b) + dim(a∩b) on random pairs
    std::mt19937_64 rng(21);
    for (int it = 0; it < 200; ++it) {
        Subspace x = rand_space(rng, 8, 3), y = rand_space(rng, 8, 3);
        CHECK(subspace_dim(x) + subspace_dim(y) ==
              subspace_dim(subspace_sum(x, y)) + subspace_dim(subspace_intersect(x, y)));
    }
}

TEST_CASE("nonzero vector enumeration") {
    Subspace a = span_of(5, {0b00011, 0b01100});
    std::vector<std::uint64_t> nz = subspace_nonzero_vectors(a);
    CHECK(nz.size() == 3);
    for (std::uint64_t v : nz) {
        CHECK(v != 0);
        CHECK(subspace_contains(a, v));
    }
}

TEST_CASE("sunflower bound values") {
    CHECK(sunflower_bound(1, 2) == 4);
    CHECK(sunflower_bound(1, 3) == 9);
    CHECK(sunflower_bound(2, 2) == 32);
    CHECK(sunflower_bound(2, 3) == 108);
    CHECK(sunflower_bound(3, 2) == 512);
    CHECK(sunflower_bound(3, 3) == 2592);
}

TEST_CASE("sunflowers in hand-built collections") {
    // pairwise-trivial petals: four coordinate lines
    std::vector<Subspace> lines;
    for (int i = 0; i < 4; ++i) lines.push_back(span_of(4, {1ull << i}));
    SunflowerResult r = find_sunflower(lines, 3);
    REQUIRE(r.found);
    CHECK(subspace_dim(r.core) == 0);
    CHECK(r.indices.size() == 3);

    // identical spaces: the core is the space itself
    std::vector<Subspace> same(3, span_of(4, {0b0011, 0b0101}));
    SunflowerResult q = find_sunflower(same, 3);
    REQUIRE(q.found);
    CHECK(subspace_equal(q.core, same[0]));

    // too few members
    std::vector<Subspace> two(2, span_of(3, {0b001}));
    CHECK_FALSE(find_sunflower(two, 3).found);
}

TEST_CASE("collections at the size bound always contain a sunflower") {
    std::mt19937_64 rng(22);
    for (int k = 1; k <= 2; ++k)
        for (int s = 2; s <= 3; ++s) {
            const int need = static_cast<int>(sunflower_bound(k, s).convert_to<long>());
            for (int rep = 0; rep < 10; ++rep) {
                std::vector<Subspace> coll;
                while (static_cast<int>(coll.size()) < need) {
                    Subspace v = rand_space(rng, 6, k);
                    if (subspace_dim(v) == k) coll.push_back(v);
                }
                SunflowerResult r = find_sunflower(coll, s);
                REQUIRE(r.found);
                REQUIRE(r.indices.size() == static_cast<std::size_t>(s));
                // re-verify every pairwise intersection against the core
                for (std::size_t i = 0; i < r.indices.size(); ++i)
                    for (std::size_t j = i + 1; j < r.indices.size(); ++j) {
                        Subspace inter = subspace_intersect(coll[r.indices[i]],
                                                           coll[r.indices[j]]);
                        CHECK(subspace_equal(inter, r.core));
                    }
                for (int idx : r.indices) CHECK(subspace_dim(coll[idx]) == k);
            }
        }
}
