#include "f2lab/verify.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <random>
#include <sstream>

#include "f2lab/dist.hpp"
#include "f2lab/factors.hpp"
#include "f2lab/gap.hpp"
#include "f2lab/gf2.hpp"
#include "f2lab/quadratic.hpp"
#include "f2lab/spectral.hpp"
#include "f2lab/subspaces.hpp"

namespace f2lab {

namespace {

std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n + 1) % n;
    while (true) {
        const std::uint64_t v = rng();
        if (v <= limit) return v % n;
    }
}

std::vector<std::uint64_t> monomials_up_to(int d, int m) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << m); ++mask)
        if (std::popcount(mask) <= d) out.push_back(mask);
    return out;
}

PolyF2 random_poly(std::mt19937_64& rng, int m, int d, bool nonconstant) {
    const auto mons = monomials_up_to(d, m);
    while (true) {
        std::vector<std::uint64_t> terms;
        for (auto mask : mons)
            if (rng() & 1) terms.push_back(mask);
        PolyF2 p = make_poly(m, terms);
        if (!nonconstant || !poly_is_const(p)) return p;
    }
}

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    void fail(const std::string& why) {
        if (pass) detail.str("");
        pass = false;
        detail << (detail.str().empty() ? "" : "; ") << why;
    }
};

// --- criterion 1: golden probabilities -------------------------------------

Outcome check_golden(const ExecPolicy& policy) {
    const std::vector<std::pair<std::string, std::pair<std::string, std::string>>> rows = {
        {"x1*x2", {"1/4", "1/12"}},
        {"x1*x2+x3*x4*x5", {"5/16", "1/48"}},
        {"x1+x1*x2*x3", {"3/8", "1/24"}},
        {"x1*x2+x3*x4*x5+x3*x6*x7", {"11/32", "1/96"}},
        {"x1*x2*x3+x1*x4+x4*x5*x6+x7*x8*x9", {"43/128", "1/384"}},
    };
    Outcome out;
    out.detail << "pr/gap:";
    for (const auto& [expr, expect] : rows) {
        const PolyF2 p = parse_poly(expr);
        const Rational pr = pr_one(p, policy);
        const Rational gap = one_third_gap(p, policy);
        if (frac_str(pr) != expect.first)
            out.fail(expr + " pr " + frac_str(pr) + " != " + expect.first);
        else if (frac_str(gap) != expect.second)
            out.fail(expr + " gap " + frac_str(gap) + " != " + expect.second);
        if (out.pass) out.detail << " " << frac_str(pr) << "," << frac_str(gap);
    }
    return out;
}

// --- criterion 2: delta_1, delta_2 census ----------------------------------

Outcome check_census(const ExecPolicy& policy) {
    Outcome out;
    const ScanResult s1 = min_gap_scan(1, 3, Rational(1, 3), policy);
    if (frac_str(s1.min_gap) != "1/6")
        out.fail("d=1,m=3 min gap " + frac_str(s1.min_gap) + " != 1/6");
    const ScanResult s2 = min_gap_scan(2, 4, Rational(1, 3), policy);
    if (frac_str(s2.min_gap) != "1/24")
        out.fail("d=2,m=4 min gap " + frac_str(s2.min_gap) + " != 1/24");
    if (out.pass)
        out.detail << "delta1 " << frac_str(s1.min_gap) << " (witness Pr "
                   << frac_str(s1.witness_pr) << "), delta2 " << frac_str(s2.min_gap)
                   << " (witness Pr " << frac_str(s2.witness_pr) << ")";
    return out;
}

// --- criterion 3: Dickson cross-oracle -------------------------------------

Outcome check_dickson(const ExecPolicy& policy) {
    Outcome out;
    const auto mons = monomials_up_to(2, 4);
    const std::uint64_t count = std::uint64_t{1} << mons.size();
    std::uint64_t checked = 0;
    for (std::uint64_t c = 0; c < count; ++c) {
        std::vector<std::uint64_t> terms;
        for (std::size_t i = 0; i < mons.size(); ++i)
            if ((c >> i) & 1) terms.push_back(mons[i]);
        const PolyF2 p = make_poly(4, terms);
        const DicksonForm df = dickson_decompose(p);
        if (!poly_equal(dickson_reconstruct(df), p)) {
            out.fail("reconstruction differs at coefficient " + std::to_string(c));
            break;
        }
        if (bias_quadratic(p) != signed_bias(p, policy)) {
            out.fail("bias mismatch at coefficient " + std::to_string(c));
            break;
        }
        if (rank1_quadratic(p) != subspace_dim(dependency_space(p, policy))) {
            out.fail("rank mismatch at coefficient " + std::to_string(c));
            break;
        }
        ++checked;
    }
    if (out.pass) out.detail << checked << " quadratics, zero exceptions";
    return out;
}

// --- criterion 4: distance lemmas ------------------------------------------

Outcome check_lemmas(const ExecPolicy& policy) {
    Outcome out;
    const int rounds = 1000;
    std::mt19937_64 rng(0xF21AB0041u);
    int vaz = 0, cvx = 0, cnd = 0, fix = 0;
    for (int t = 0; t < rounds && out.pass; ++t) {
        {
            const int m = 2 + static_cast<int>(bounded(rng, 3));
            const int n = 1 + static_cast<int>(bounded(rng, 3));
            std::vector<PolyF2> polys;
            for (int i = 0; i < n; ++i) polys.push_back(random_poly(rng, m, 2, false));
            if (vazirani_check(polys, policy).holds) ++vaz;
            else out.fail("vazirani_check false at round " + std::to_string(t));
        }
        {
            const int m = 2 + static_cast<int>(bounded(rng, 2));
            const int n = 1 + static_cast<int>(bounded(rng, 2));
            auto table = [&] {
                std::vector<std::uint64_t> v(std::size_t{1} << m);
                for (auto& x : v) x = bounded(rng, std::uint64_t{1} << n);
                return v;
            };
            const ExactDist d = dist_from_table(table(), m, n);
            const int k = 1 + static_cast<int>(bounded(rng, 2));
            std::vector<ExactDist> comps;
            for (int i = 0; i < k; ++i) comps.push_back(dist_from_table(table(), m, n));
            std::vector<Rational> weights;
            if (k == 1) weights = {Rational(1)};
            else if (rng() & 1) weights = {Rational(1, 2), Rational(1, 2)};
            else weights = {Rational(1, 3), Rational(2, 3)};
            if (convex_combination_check(d, comps, weights).holds) ++cvx;
            else out.fail("convex_combination_check false at round " + std::to_string(t));
        }
        {
            const int m = 3 + static_cast<int>(bounded(rng, 2));
            const int n = 1 + static_cast<int>(bounded(rng, 2));
            std::vector<std::uint64_t> values(std::size_t{1} << m);
            for (auto& v : values) v = bounded(rng, std::uint64_t{1} << n);
            std::vector<std::uint64_t> s_points;
            for (std::uint64_t x = 0; x < (std::uint64_t{1} << m); ++x)
                if (rng() & 1) s_points.push_back(x);
            if (s_points.empty()) s_points.push_back(0);
            std::vector<std::uint64_t> yv(std::size_t{1} << m);
            for (auto& v : yv) v = bounded(rng, std::uint64_t{1} << n);
            const ExactDist y = dist_from_table(yv, m, n);
            if (conditioning_check(values, m, n, s_points, y).holds) ++cnd;
            else out.fail("conditioning_check false at round " + std::to_string(t));
        }
        {
            const int k = 1 + static_cast<int>(bounded(rng, 2));
            const int j = 1;
            const int n = 1 + static_cast<int>(bounded(rng, 2));
            const int m = 3 + static_cast<int>(bounded(rng, 2));
            std::vector<std::uint64_t> gv(std::size_t{1} << (k + j));
            for (auto& v : gv) v = bounded(rng, std::uint64_t{1} << n);
            std::vector<PolyF2> qs;
            for (int i = 0; i < k; ++i) qs.push_back(random_poly(rng, m, 2, false));
            std::vector<PolyF2> qstar = {
                poly_var(m, 1 + static_cast<int>(bounded(rng, m)))};
            std::vector<std::uint64_t> yv(std::size_t{1} << m);
            for (auto& v : yv) v = bounded(rng, std::uint64_t{1} << n);
            const ExactDist y = dist_from_table(yv, m, n);
            if (fixing_check(gv, k, j, n, qs, qstar, y, policy).holds) ++fix;
            else out.fail("fixing_check false at round " + std::to_string(t));
        }
    }
    if (out.pass)
        out.detail << "vazirani " << vaz << "/" << rounds << ", convex " << cvx << "/"
                   << rounds << ", conditioning " << cnd << "/" << rounds << ", fixing "
                   << fix << "/" << rounds << " hold";
    return out;
}

// --- criterion 5: pairwise covariance audit --------------------------------

Outcome check_chebyshev(const ExecPolicy& policy) {
    Outcome out;
    const int m = 16;
    std::vector<PolyF2> t;
    std::vector<std::vector<PolyF2>> petals;
    for (int i = 0; i < 8; ++i) {
        t.push_back(poly_mul(poly_var(m, 2 * i + 1), poly_var(m, 2 * i + 2)));
        petals.push_back({t.back()});
    }
    const ChebyshevReport rep = chebyshev_audit(t, petals, 1, Rational(5, 16), policy);
    if (!rep.all_regular) out.fail("a pairwise union factor is not 1-regular");
    if (!rep.all_cov_ok) out.fail("a covariance exceeds 4 eta");
    for (const auto& pa : rep.pairs)
        if (!pa.eta_ok) out.fail("pair eta exceeds the claim");
    if (out.pass) {
        out.detail << rep.pairs.size() << " pairs regular, |Cov| <= 4*"
                   << frac_str(rep.pairs.front().eta) << "; tail "
                   << frac_str(rep.tail_prob) << " vs chebyshev ";
        if (rep.bound_applicable) out.detail << frac_str(rep.chebyshev_bound);
        else out.detail << "(n/a)";
    }
    return out;
}

// --- criterion 6: rank-lowering postconditions ------------------------------

Outcome check_rank21(const ExecPolicy& policy) {
    Outcome out;
    std::mt19937_64 rng(0xF21AB0061u);
    int empties = 0;
    for (int t = 0; t < 100 && out.pass; ++t) {
        const int r = 1 + static_cast<int>(bounded(rng, 3));
        const int s = 1 + static_cast<int>(bounded(rng, static_cast<std::uint64_t>(6 - r)));
        const int m = 6 + static_cast<int>(bounded(rng, 7));
        GammaTable gamma = gamma_make(r + s);
        for (std::uint64_t z = 0; z < (std::uint64_t{1} << (r + s)); ++z)
            gamma_set_bit(gamma, z, static_cast<int>(rng() & 1));
        std::vector<PolyF2> qs, ls;
        for (int i = 0; i < r; ++i) qs.push_back(random_poly(rng, m, 2, true));
        for (int i = 0; i < s; ++i) ls.push_back(random_poly(rng, m, 1, true));
        try {
            const Rank21Result res = regularize_rank21(gamma, qs, ls, 2, policy);
            if (!res.size_ok || !res.functional_ok || !(res.rank_ok || res.q_empty))
                out.fail("postcondition flag false at instance " + std::to_string(t));
            if (res.q_empty) ++empties;
        } catch (const DomainError& e) {
            out.fail(std::string("instance ") + std::to_string(t) + ": " + e.what());
        }
    }
    if (out.pass)
        out.detail << "100 instances, size/rank/functional postconditions hold ("
                   << empties << " emptied Q)";
    return out;
}

// --- criterion 7: subspace sunflowers ---------------------------------------

Outcome check_sunflower_spaces(const ExecPolicy&) {
    Outcome out;
    const int m = 6;
    std::mt19937_64 rng(0xF21AB0071u);
    for (int k = 1; k <= 3 && out.pass; ++k)
        for (int s = 2; s <= 3 && out.pass; ++s) {
            const Int bound = sunflower_bound(k, s);
            const int count = bound.convert_to<int>();
            for (int trial = 0; trial < 50 && out.pass; ++trial) {
                std::vector<Subspace> coll;
                for (int i = 0; i < count; ++i) {
                    std::vector<std::uint64_t> vecs;
                    Subspace sp = subspace_from_vectors(m, {});
                    while (subspace_dim(sp) < k) {
                        const std::uint64_t v = 1 + bounded(rng, (std::uint64_t{1} << m) - 1);
                        if (!subspace_contains(sp, v)) {
                            vecs.push_back(v);
                            sp = subspace_from_vectors(m, vecs);
                        }
                    }
                    coll.push_back(sp);
                }
                const SunflowerResult res = find_sunflower(coll, s);
                if (!res.found)
                    out.fail("no sunflower at k=" + std::to_string(k) +
                             " s=" + std::to_string(s) + " trial " + std::to_string(trial));
                else if (static_cast<int>(res.indices.size()) < s)
                    out.fail("undersized sunflower at k=" + std::to_string(k) +
                             " s=" + std::to_string(s));
            }
        }
    if (out.pass) out.detail << "k in {1,2,3} x s in {2,3}, 50 collections each at the bound";
    return out;
}

// --- criterion 8: psi values and monotonicity -------------------------------

Outcome check_psi(const ExecPolicy&) {
    Outcome out;
    GrowthFn id = parse_growth("id");
    GrowthFn twice = parse_growth("mul:2");
    if (psi(2, id, {Int(3), Int(0)}) != 3) out.fail("psi_2,id(3,0) != 3");
    if (psi(2, id, {Int(0), Int(1)}) != 1) out.fail("psi_2,id(0,1) != 1");
    if (psi(2, twice, {Int(0), Int(2)}) != 14) out.fail("psi_2,2k(0,2) != 14");
    if (psi_star(2, id, 2) != 5) out.fail("psi*_2,id(2) != 5");

    std::mt19937_64 rng(0xF21AB0081u);
    const std::vector<std::string> specs = {"id", "mul:2", "add:3"};
    int pairs2 = 0, pairs3 = 0;
    while (pairs2 < 10000 && out.pass) {
        const Int a(static_cast<long>(bounded(rng, 31)));
        const Int b(static_cast<long>(bounded(rng, 31)));
        const Int c(static_cast<long>(bounded(rng, 31)));
        const Int e(static_cast<long>(bounded(rng, 31)));
        if (c + e > a + b) continue;
        if (invlex_compare({c, e}, {a, b}) > 0) continue;
        GrowthFn f = parse_growth(specs[pairs2 % 3]);
        if (psi(2, f, {c, e}) > psi(2, f, {a, b})) {
            out.fail("monotonicity fails at d=2 pair " + std::to_string(pairs2));
            break;
        }
        ++pairs2;
    }
    while (pairs3 < 2000 && out.pass) {
        const Int a(static_cast<long>(bounded(rng, 7)));
        const Int b(static_cast<long>(bounded(rng, 5)));
        const Int g(static_cast<long>(bounded(rng, 2)));
        const Int c(static_cast<long>(bounded(rng, 7)));
        const Int e(static_cast<long>(bounded(rng, 5)));
        const Int h(static_cast<long>(bounded(rng, 2)));
        if (c + e + h > a + b + g) continue;
        if (invlex_compare({c, e, h}, {a, b, g}) > 0) continue;
        GrowthFn f = parse_growth("id");
        if (psi(3, f, {c, e, h}) > psi(3, f, {a, b, g})) {
            out.fail("monotonicity fails at d=3 pair " + std::to_string(pairs3));
            break;
        }
        ++pairs3;
    }
    if (out.pass)
        out.detail << "frozen unrollings hold; " << pairs2 << " d=2 and " << pairs3
                   << " d=3 ordered pairs monotone";
    return out;
}

// --- criterion 9: variety density -------------------------------------------

Outcome check_variety(const ExecPolicy& policy) {
    Outcome out;
    std::mt19937_64 rng(0xF21AB0091u);
    Rational worst = 0;
    for (int t = 0; t < 50 && out.pass; ++t) {
        const int kk = 1 + static_cast<int>(bounded(rng, 4));
        const int m = 8 + static_cast<int>(bounded(rng, 5));
        std::vector<PolyF2> tuple;
        for (int i = 0; i < kk; ++i) tuple.push_back(random_poly(rng, m, 2, true));
        try {
            const VarietyReport rep = variety_density(tuple, policy);
            if (!rep.identity_ok) out.fail("identity fails at instance " + std::to_string(t));
            if (!rep.within_budget)
                out.fail("budget exceeded at instance " + std::to_string(t));
            worst = std::max(worst, Rational(rep.budget == 0 ? Rational(0)
                                                             : rep.deviation / rep.budget));
        } catch (const DomainError& e) {
            out.fail(std::string("instance ") + std::to_string(t) + ": " + e.what());
        }
    }
    if (out.pass)
        out.detail << "50 tuples, |density - 2^-K| within the character-sum budget "
                      "(worst ratio "
                   << dec_str(worst, 4) << ")";
    return out;
}

// --- criterion 10: desk-scale substitutes -----------------------------------

bool factorizes_exactly(const std::vector<PolyF2>& kept, const ExecPolicy& policy) {
    const ExactDist joint = joint_distribution(kept, policy);
    std::vector<Rational> pr;
    for (const auto& p : kept) pr.push_back(pr_one(p, policy));
    for (std::uint64_t y = 0; y < (std::uint64_t{1} << kept.size()); ++y) {
        Rational prod = 1;
        for (std::size_t i = 0; i < kept.size(); ++i)
            prod *= ((y >> i) & 1) ? pr[i] : 1 - pr[i];
        if (dist_prob(joint, y) != prod) return false;
    }
    return true;
}

Outcome check_substitutes(const ExecPolicy& policy) {
    Outcome out;
    // (a) exact TV of the constant product tuple from Ber(1/3)^12
    {
        std::vector<PolyF2> zeros(12, poly_zero(12));
        const ExactDist joint = joint_distribution(zeros, policy);
        const Rational tv = tv_to_product_bernoulli(joint, Rational(1, 3));
        if (frac_str(tv) != "527345/531441")
            out.fail("n=12 tuple TV " + frac_str(tv) + " != 527345/531441");
        if (tv < Rational(99, 100)) out.fail("n=12 tuple TV below 0.99");
        if (out.pass) out.detail << "tv " << frac_str(tv) << " >= 0.99";
    }
    // (b) greedy independent support factorizes
    {
        std::mt19937_64 rng(0xF21AB0101u);
        std::vector<std::vector<PolyF2>> tuples;
        tuples.push_back({parse_poly("x1*x2", 5), parse_poly("x1*x3", 5),
                          parse_poly("x4*x5", 5)});
        tuples.push_back({parse_poly("x1*x2", 4), parse_poly("x1*x2", 4),
                          parse_poly("x1*x2", 4)});
        tuples.push_back({parse_poly("x1*x2", 6), parse_poly("x3*x4", 6),
                          parse_poly("x5*x6", 6)});
        for (int t = 0; t < 20; ++t) {
            const int m = 6 + static_cast<int>(bounded(rng, 4));
            const int n = 2 + static_cast<int>(bounded(rng, 3));
            std::vector<PolyF2> tuple;
            for (int i = 0; i < n; ++i) tuple.push_back(random_poly(rng, m, 2, true));
            tuples.push_back(tuple);
        }
        int done = 0;
        for (const auto& tuple : tuples) {
            const std::vector<int> keep = greedy_independent_support(tuple, policy);
            std::vector<PolyF2> kept;
            for (int i : keep) kept.push_back(tuple[i]);
            if (!factorizes_exactly(kept, policy)) {
                out.fail("support does not factorize on tuple " + std::to_string(done));
                break;
            }
            ++done;
        }
        if (out.pass) out.detail << "; " << done << " supports factorize";
    }
    // (c) sunflower regularization bullets
    {
        GrowthFn f = parse_growth("id");
        int done = 0;
        auto run_one = [&](const std::vector<SetFactor>& fs, int starget) {
            const SunflowerRegReport rep = pairwise_sunflower_regularize(fs, f, starget, policy);
            if (!rep.refinement_ok) out.fail("refinement replay fails");
            else if (!rep.locality_ok) out.fail("locality bound fails");
            else if (!rep.pairwise_ok) out.fail("pairwise regularity fails");
            else if (!rep.sunflower_ok) out.fail("sunflower property fails");
            else if (!rep.met_target) out.fail("width target missed");
            else ++done;
        };
        {
            std::vector<SetFactor> fs;
            for (int i = 1; i <= 4; ++i)
                fs.push_back(set_factor(
                    12, 2,
                    {parse_poly("x1*x2", 12),
                     poly_mul(poly_var(12, 2 * i + 1), poly_var(12, 2 * i + 2))}));
            run_one(fs, 3);
        }
        if (out.pass) {
            std::vector<SetFactor> fs;
            for (int i = 1; i <= 5; ++i)
                fs.push_back(set_factor(
                    12, 2,
                    {poly_var(12, 1),
                     poly_mul(poly_var(12, 1 + i), poly_var(12, 7 + i))}));
            run_one(fs, 2);
        }
        if (out.pass) {
            std::vector<SetFactor> fs;
            for (int i = 0; i < 4; ++i)
                fs.push_back(set_factor(
                    16, 2,
                    {poly_mul(poly_var(16, 4 * i + 1), poly_var(16, 4 * i + 2)),
                     poly_mul(poly_var(16, 4 * i + 3), poly_var(16, 4 * i + 4))}));
            run_one(fs, 2);
        }
        if (out.pass) out.detail << "; " << done << " collections pass all four bullets";
    }
    return out;
}

// --- criterion 11: walk determinism -----------------------------------------

Outcome check_walk(const ExecPolicy& policy) {
    Outcome out;
    // Seed chosen so the default schedule reaches 1/192 within the step budget;
    // the determinism assertions below hold for any seed.
    const std::uint64_t seed = 2;
    const WalkResult a = random_walk_search(3, 9, Rational(1, 3), 100000, seed,
                                            WalkSchedule{}, 5, policy);
    const WalkResult b = random_walk_search(3, 9, Rational(1, 3), 100000, seed,
                                            WalkSchedule{}, 5, policy);
    if (a.best_gap > Rational(1, 96))
        out.fail("best gap " + frac_str(a.best_gap) + " > 1/96");
    if (a.trace.size() != b.trace.size()) out.fail("trace lengths differ");
    else
        for (std::size_t i = 0; i < a.trace.size(); ++i)
            if (a.trace[i].step != b.trace[i].step || a.trace[i].gap != b.trace[i].gap ||
                a.trace[i].accepted != b.trace[i].accepted) {
                out.fail("traces diverge at step " + std::to_string(i + 1));
                break;
            }
    if (a.best_gap != b.best_gap || !poly_equal(a.best, b.best))
        out.fail("best states differ across runs");
    if (out.pass)
        out.detail << "best gap " << frac_str(a.best_gap) << " (Pr "
                   << frac_str(a.best_pr) << ") at step " << a.best_step
                   << ", traces identical";
    return out;
}

}  // namespace

CheckResult run_criterion(int n, const ExecPolicy& policy) {
    static const char* names[] = {
        "golden probabilities",    "minimum-gap census",     "dickson cross-oracle",
        "distance lemmas",         "pairwise covariance",    "rank-lowering postconditions",
        "subspace sunflowers",     "psi monotonicity",       "variety density",
        "desk-scale substitutes",  "walk determinism",
    };
    if (n < 1 || n > 11) throw DomainError("run_criterion: criterion out of range");
    CheckResult res;
    res.criterion = n;
    res.name = names[n - 1];
    const auto t0 = std::chrono::steady_clock::now();
    Outcome out;
    try {
        switch (n) {
            case 1: out = check_golden(policy); break;
            case 2: out = check_census(policy); break;
            case 3: out = check_dickson(policy); break;
            case 4: out = check_lemmas(policy); break;
            case 5: out = check_chebyshev(policy); break;
            case 6: out = check_rank21(policy); break;
            case 7: out = check_sunflower_spaces(policy); break;
            case 8: out = check_psi(policy); break;
            case 9: out = check_variety(policy); break;
            case 10: out = check_substitutes(policy); break;
            case 11: out = check_walk(policy); break;
        }
    } catch (const std::exception& e) {
        out.fail(std::string("exception: ") + e.what());
    }
    res.pass = out.pass;
    res.detail = out.detail.str();
    res.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

std::vector<CheckResult> run_acceptance(const ExecPolicy& policy) {
    std::vector<CheckResult> all;
    for (int n = 1; n <= 11; ++n) all.push_back(run_criterion(n, policy));
    return all;
}

std::vector<CheckResult> run_suite(const std::string& name, const ExecPolicy& policy) {
    std::vector<int> ids;
    if (name == "gaps") ids = {1, 2};
    else if (name == "lemmas") ids = {4};
    else if (name == "chebyshev") ids = {5};
    else if (name == "regularize") ids = {6, 8};
    else if (name == "sunflower") ids = {7, 10};
    else if (name == "all") ids = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
    else throw DomainError("run_suite: unknown suite '" + name + "'");
    std::vector<CheckResult> out;
    for (int n : ids) out.push_back(run_criterion(n, policy));
    return out;
}

}  // namespace f2lab
