#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <bit>
#include <random>
#include <vector>

#include "f2lab/factors.hpp"
#include "f2lab/gf2.hpp"
#include "f2lab/quadratic.hpp"
#include "f2lab/rational.hpp"

using namespace f2lab;

namespace {

Factor quad_factor(int m, std::initializer_list<const char*> exprs) {
    std::vector<PolyF2> ps;
    for (const char* e : exprs) ps.push_back(parse_poly(e, m));
    return make_factor(m, 2, ps);
}

}  // namespace

TEST_CASE("dimension vectors and invlex order") {
    Factor f = quad_factor(4, {"x1*x2", "x3", "x1*x4 + x2"});
    CHECK(dim_vector(f) == std::vector<Int>{1, 2});

    CHECK(invlex_compare({0, 2}, {2, 1}) > 0);  // top coordinate dominates
    CHECK(invlex_compare({5, 1}, {0, 2}) < 0);
    CHECK(invlex_compare({3, 3}, {3, 3}) == 0);
    CHECK(invlex_compare({1, 0}, {2, 0}) < 0);
}

TEST_CASE("growth function parsing and evaluation") {
    CHECK(growth_eval(parse_growth("id"), 3) == 3);
    CHECK(growth_eval(parse_growth("add:3"), 4) == 7);
    CHECK(growth_eval(parse_growth("mul:2"), 4) == 8);
    CHECK(growth_eval(parse_growth("linear:c=2"), 10) == 20);

    // the c_KL threshold spec is clamped below by k itself
    GrowthFn ckl = parse_growth("ckl2:delta=1/8");
    Int at1 = growth_eval(ckl, 1);
    CHECK(at1 >= 1);
    CHECK(growth_eval(ckl, at1 + 5) == at1 + 5);

    CHECK_THROWS_AS(parse_growth("mystery"), DomainError);
    CHECK_THROWS_AS(parse_growth("mul:x"), DomainError);

    // a decreasing raw function is rejected at evaluation time
    GrowthFn bad = growth_from_fn("bad", [](const Int& k) { return Int(100) - 10 * k; });
    growth_eval(bad, 1);
    CHECK_THROWS_AS(growth_eval(bad, 2), DomainError);
}

TEST_CASE("psi base cases and unrollings") {
    GrowthFn id = parse_growth("id");
    CHECK(psi(2, id, {3, 0}) == 3);
    CHECK(psi(2, id, {0, 1}) == 1);
    CHECK(psi(2, id, {0, 2}) == 5);
    CHECK(psi(2, parse_growth("mul:2"), {0, 2}) == 14);
    CHECK(psi_star(2, id, 2) == 5);
    CHECK(psi_star(2, parse_growth("mul:2"), 2) == 14);

    CHECK(psi_star_at_least(2, id, 2, 5));
    CHECK_FALSE(psi_star_at_least(2, id, 2, 6));
    CHECK(psi_star_at_least(2, id, 2, 0));

    CHECK_THROWS_AS(psi(2, id, {0}), DomainError);  // wrong arity
}

TEST_CASE("psi monotonicity on seeded pairs") {
    std::mt19937_64 rng(61);
    GrowthFn id = parse_growth("id");
    for (int it = 0; it < 300; ++it) {
        Int a1 = static_cast<long>(rng() % 12), a2 = static_cast<long>(rng() % 6);
        Int b1 = static_cast<long>(rng() % 12), b2 = static_cast<long>(rng() % 6);
        std::vector<Int> n = {a1, a2}, m = {b1, b2};
        // arrange N <= M in both the invlex and total-mass orders
        if (invlex_compare(n, m) > 0) std::swap(n, m);
        if (n[0] + n[1] > m[0] + m[1]) continue;
        CHECK(psi(2, id, n) <= psi(2, id, m));
    }
}

TEST_CASE("regularity witnesses for quadratic factors") {
    Factor f = quad_factor(4, {"x1*x2", "x3*x4"});
    CHECK(regularity_witness(f, 1).regular);
    RegularityCertificate c2 = regularity_witness(f, 2);
    CHECK_FALSE(c2.regular);
    CHECK(c2.lambda == 1);  // lowest violating combination
    CHECK(c2.ell == 2);
    CHECK(c2.rank.value == 2);
    RegularityCertificate c3 = regularity_witness(f, 3);
    CHECK_FALSE(c3.regular);
    CHECK(c3.lambda == 1);

    // a cancelling linear family: only the full combination degenerates
    Factor lin = make_factor(2, 1,
                             {parse_poly("x1", 2), parse_poly("x2", 2),
                              parse_poly("x1 + x2", 2)});
    RegularityCertificate cl = regularity_witness(lin, 1);
    CHECK_FALSE(cl.regular);
    CHECK(cl.lambda == 7);
    CHECK(poly_is_zero(cl.combo));
    CHECK(cl.rank.value == 0);

    // nonzero nonconstant linear combinations have infinite rank0
    Factor ind = make_factor(2, 1, {parse_poly("x1", 2), parse_poly("x2", 2)});
    CHECK(regularity_witness(ind, 1000000).regular);

    // exact mode refuses degree >= 3 members; heuristic mode flags itself
    Factor cub = make_factor(3, 3, {parse_poly("x1*x2*x3")});
    CHECK_THROWS_AS(regularity_witness(cub, 2), DomainError);
    RegularityCertificate h = regularity_witness(cub, 2, serial_policy(),
                                                 RankMode::heuristic_bias);
    CHECK(h.heuristic);
}

TEST_CASE("refine step replaces a violation by its witnesses") {
    Factor f = quad_factor(4, {"x1*x2 + x3*x4", "x1*x2"});
    RegularityCertificate cert = regularity_witness(f, 3);
    REQUIRE_FALSE(cert.regular);
    CHECK(cert.lambda == 2);

    std::vector<int> ids = {0, 1};
    int next_id = 2;
    RefineOutcome out = refine_step(f, ids, next_id, cert);
    CHECK(out.event.removed_id == 1);
    CHECK(out.event.pair_count == 1);
    CHECK_FALSE(out.event.has_tail);
    CHECK(out.event.c == 0);
    REQUIRE(out.factor.members.size() == 3);
    CHECK(poly_equal(out.factor.members[1], parse_poly("x1", 4)));
    CHECK(poly_equal(out.factor.members[2], parse_poly("x2", 4)));
    CHECK(out.ids == std::vector<int>{0, 2, 3});
    CHECK(next_id == 4);

    // dimension vector strictly decreased in invlex order
    CHECK(invlex_compare(dim_vector(out.factor), dim_vector(f)) < 0);
}

TEST_CASE("regularize runs to a regular factor and replays") {
    Factor f0 = quad_factor(4, {"x1*x2 + x3*x4"});
    RegularizeResult res = regularize(f0, parse_growth("add:3"));
    CHECK(res.iterations == 1);
    CHECK(res.factor.members.size() == 4);  // the four split linear forms
    CHECK(res.final_r == 7);
    CHECK(res.psi_bound == 4);
    CHECK(res.psi_ok);
    CHECK(replay_verify(f0, res));

    // already regular: nothing to do
    RegularizeResult noop = regularize(f0, parse_growth("id"));
    CHECK(noop.events.empty());
    CHECK(noop.factor.members.size() == 1);
    CHECK(replay_verify(f0, noop));

    std::mt19937_64 rng(62);
    for (int it = 0; it < 20; ++it) {
        std::vector<PolyF2> ps;
        for (int i = 0; i < 3; ++i) {
            std::vector<std::uint64_t> terms;
            for (std::uint64_t mask = 0; mask < 64; ++mask)
                if (std::popcount(mask) <= 2 && (rng() & 1)) terms.push_back(mask);
            ps.push_back(make_poly(6, terms));
        }
        Factor f = make_factor(6, 2, ps);
        RegularizeResult r = regularize(f, parse_growth("id"));
        CHECK(regularity_witness(r.factor, growth_eval(parse_growth("id"),
                                                       Int(static_cast<long>(
                                                           r.factor.members.size()))))
                  .regular);
        CHECK(replay_verify(f, r));
    }
}

TEST_CASE("rank-lowering reduction of presentations") {
    // a single rank-2 quadratic collapses to its two linear factors
    Rank21Result a = regularize_rank21(gamma_identity_r1(), {parse_poly("x1*x2")}, {}, 2);
    CHECK(a.k == 1);
    CHECK(a.q_empty);
    CHECK(a.kept.empty());
    REQUIRE(a.lp.size() == 2);
    CHECK(poly_equal(a.lp[0], parse_poly("x1", 2)));
    CHECK(poly_equal(a.lp[1], parse_poly("x2", 2)));
    CHECK(a.gamma_out.bits == 2);
    GammaTable andg = gamma_make(2);
    gamma_set_bit(andg, 3, 1);
    CHECK(gamma_equal(a.gamma_out, andg));
    CHECK(a.size_ok);
    CHECK(a.rank_ok);
    CHECK(a.functional_ok);

    // a rank-8 quadratic survives untouched at C = 2
    PolyF2 q8 = parse_poly("x1*x2 + x3*x4 + x5*x6 + x7*x8");
    Rank21Result b = regularize_rank21(gamma_identity_r1(), {q8}, {}, 2);
    CHECK(b.k == 0);
    CHECK(b.kept == std::vector<int>{0});
    CHECK(b.lp.empty());
    CHECK(b.size_ok);
    CHECK(b.rank_ok);
    CHECK(b.functional_ok);

    // a low-rank difference gets peeled first, then the survivor collapses
    PolyF2 q8b = parse_poly("x1*x2 + x3*x4 + x5*x6 + x7*x8 + x9", 9);
    GammaTable xor2 = gamma_make(2);
    gamma_set_bit(xor2, 1, 1);
    gamma_set_bit(xor2, 2, 1);
    Rank21Result c = regularize_rank21(xor2, {parse_poly("x1*x2 + x3*x4 + x5*x6 + x7*x8", 9), q8b},
                                       {}, 2);
    CHECK(c.k == 2);
    CHECK(c.q_empty);
    CHECK(c.lp.size() == 9);
    CHECK(poly_equal(c.lp[0], parse_poly("x9", 9)));
    CHECK(c.size_ok);
    CHECK(c.rank_ok);
    CHECK(c.functional_ok);
}

TEST_CASE("greedy independent support") {
    std::vector<PolyF2> ps = {parse_poly("x1*x2", 5), parse_poly("x1*x3", 5),
                              parse_poly("x4*x5", 5)};
    CHECK(greedy_independent_support(ps) == std::vector<int>{0, 2});

    std::vector<PolyF2> same(3, parse_poly("x1*x2", 4));
    CHECK(greedy_independent_support(same) == std::vector<int>{0});

    std::vector<PolyF2> disjoint = {parse_poly("x1*x2", 6), parse_poly("x3*x4", 6),
                                    parse_poly("x5*x6", 6)};
    CHECK(greedy_independent_support(disjoint) == std::vector<int>{0, 1, 2});
}

TEST_CASE("set factors deduplicate") {
    SetFactor f = set_factor(3, 2, {parse_poly("x1", 3), parse_poly("x1", 3),
                                    parse_poly("x2*x3", 3)});
    CHECK(f.members.size() == 2);
    CHECK(set_factor_contains(f, parse_poly("x1", 3)));
    CHECK(set_factor_contains(f, parse_poly("x2*x3", 3)));
    CHECK_FALSE(set_factor_contains(f, parse_poly("x2", 3)));
}

TEST_CASE("pairwise sunflower regularization: shared-core family") {
    // four factors sharing x1*x2, with disjoint private products
    std::vector<SetFactor> fs;
    for (int i = 0; i < 4; ++i) {
        int a = 3 + 2 * i, b = 4 + 2 * i;
        fs.push_back(set_factor(
            12, 2,
            {parse_poly("x1*x2", 12),
             poly_mul(poly_var(12, a), poly_var(12, b))}));
    }
    SunflowerRegReport rep = pairwise_sunflower_regularize(fs, parse_growth("id"), 3);
    CHECK(rep.met_target);
    CHECK(rep.w >= 3);
    CHECK(rep.refinement_ok);
    CHECK(rep.locality_ok);
    CHECK(rep.pairwise_ok);
    CHECK(rep.sunflower_ok);
    CHECK(rep.petals.size() == static_cast<std::size_t>(rep.w));
}

TEST_CASE("pairwise sunflower regularization: already disjoint") {
    std::vector<SetFactor> fs;
    for (int i = 0; i < 4; ++i) {
        int base = 4 * i;
        fs.push_back(set_factor(16, 2,
                                {poly_mul(poly_var(16, base + 1), poly_var(16, base + 2)),
                                 poly_mul(poly_var(16, base + 3), poly_var(16, base + 4))}));
    }
    SunflowerRegReport rep = pairwise_sunflower_regularize(fs, parse_growth("id"), 2);
    CHECK(rep.met_target);
    CHECK(rep.iterations <= 3);
    CHECK(rep.core.members.empty());
    CHECK(rep.w == 4);
    CHECK(rep.refinement_ok);
    CHECK(rep.locality_ok);
    CHECK(rep.pairwise_ok);
    CHECK(rep.sunflower_ok);
}
