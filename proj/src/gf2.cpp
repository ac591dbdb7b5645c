#include "f2lab/gf2.hpp"

#include <algorithm>
#include <bit>
#include <cctype>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace f2lab {

namespace {

constexpr std::uint64_t kZetaMask[6] = {
    0x5555555555555555ull,  // index bit 0 clear
    0x3333333333333333ull,
    0x0F0F0F0F0F0F0F0Full,
    0x00FF00FF00FF00FFull,
    0x0000FFFF0000FFFFull,
    0x00000000FFFFFFFFull,
};

void check_m(int m) {
    if (m < 0 || m > 64) throw DomainError("variable count m out of range [0,64]");
}

std::uint64_t mask_for(int m) {
    return m >= 64 ? ~0ull : ((1ull << m) - 1);
}

}  // namespace

int effective_workers(const ExecPolicy& policy) {
#ifdef _OPENMP
    return policy.workers > 1 ? policy.workers : 1;
#else
    (void)policy;
    return 1;
#endif
}

PolyF2 poly_zero(int m) {
    check_m(m);
    return PolyF2{m, {}};
}

PolyF2 poly_one(int m) {
    check_m(m);
    return PolyF2{m, {0}};
}

PolyF2 poly_var(int m, int i) {
    check_m(m);
    if (i < 1 || i > m) throw DomainError("variable index out of range");
    return PolyF2{m, {1ull << (i - 1)}};
}

PolyF2 make_poly(int m, std::vector<std::uint64_t> terms) {
    check_m(m);
    const std::uint64_t fit = mask_for(m);
    for (auto t : terms)
        if (t & ~fit) throw DomainError("monomial references a variable beyond m");
    std::sort(terms.begin(), terms.end());
    std::vector<std::uint64_t> out;
    out.reserve(terms.size());
    for (std::size_t i = 0; i < terms.size();) {
        std::size_t j = i;
        while (j < terms.size() && terms[j] == terms[i]) ++j;
        if ((j - i) & 1) out.push_back(terms[i]);
        i = j;
    }
    return PolyF2{m, std::move(out)};
}

bool poly_is_zero(const PolyF2& p) { return p.terms.empty(); }

bool poly_is_const(const PolyF2& p) {
    return p.terms.empty() || (p.terms.size() == 1 && p.terms[0] == 0);
}

int poly_degree(const PolyF2& p) {
    int d = 0;
    for (auto t : p.terms) d = std::max(d, std::popcount(t));
    return d;
}

bool poly_equal(const PolyF2& a, const PolyF2& b) {
    return a.m == b.m && a.terms == b.terms;
}

bool poly_less(const PolyF2& a, const PolyF2& b) {
    if (a.m != b.m) return a.m < b.m;
    return a.terms < b.terms;
}

PolyF2 poly_add(const PolyF2& a, const PolyF2& b) {
    if (a.m != b.m) throw DomainError("poly_add: mismatched variable counts");
    // merge two sorted term lists mod 2
    std::vector<std::uint64_t> out;
    out.reserve(a.terms.size() + b.terms.size());
    std::size_t i = 0, j = 0;
    while (i < a.terms.size() && j < b.terms.size()) {
        if (a.terms[i] < b.terms[j]) out.push_back(a.terms[i++]);
        else if (b.terms[j] < a.terms[i]) out.push_back(b.terms[j++]);
        else { ++i; ++j; }
    }
    while (i < a.terms.size()) out.push_back(a.terms[i++]);
    while (j < b.terms.size()) out.push_back(b.terms[j++]);
    return PolyF2{a.m, std::move(out)};
}

PolyF2 poly_mul(const PolyF2& a, const PolyF2& b) {
    if (a.m != b.m) throw DomainError("poly_mul: mismatched variable counts");
    std::vector<std::uint64_t> prods;
    prods.reserve(a.terms.size() * b.terms.size());
    for (auto s : a.terms)
        for (auto t : b.terms) prods.push_back(s | t);
    return make_poly(a.m, std::move(prods));
}

PolyF2 poly_add_const(PolyF2 p, int bit) {
    if (bit & 1) return poly_add(p, poly_one(p.m));
    return p;
}

std::pair<std::uint64_t, int> poly_affine_parts(const PolyF2& p) {
    std::uint64_t mask = 0;
    int c = 0;
    for (auto t : p.terms) {
        if (t == 0) c = 1;
        else if (std::popcount(t) == 1) mask |= t;
        else throw DomainError("poly_affine_parts: degree exceeds 1");
    }
    return {mask, c};
}

PolyF2 poly_from_affine(int m, std::uint64_t mask, int c) {
    std::vector<std::uint64_t> terms;
    if (c & 1) terms.push_back(0);
    std::uint64_t rest = mask;
    while (rest) {
        std::uint64_t bit = rest & (~rest + 1);
        terms.push_back(bit);
        rest ^= bit;
    }
    return make_poly(m, std::move(terms));
}

int poly_eval(const PolyF2& p, std::uint64_t x) {
    int acc = 0;
    for (auto t : p.terms) acc ^= ((x & t) == t) ? 1 : 0;
    return acc;
}

TruthTable tt_make(int m) {
    check_m(m);
    TruthTable t;
    t.m = m;
    t.words.assign(m <= 6 ? 1 : (std::size_t{1} << (m - 6)), 0);
    return t;
}

int tt_bit(const TruthTable& t, std::uint64_t x) {
    return static_cast<int>((t.words[x >> 6] >> (x & 63)) & 1);
}

void tt_set_bit(TruthTable& t, std::uint64_t x, int v) {
    std::uint64_t bit = 1ull << (x & 63);
    if (v & 1) t.words[x >> 6] |= bit;
    else t.words[x >> 6] &= ~bit;
}

void zeta_transform_serial(TruthTable& t) {
    const int m = t.m;
    const std::size_t nw = t.words.size();
    for (int i = 0; i < std::min(m, 6); ++i) {
        const std::uint64_t a = kZetaMask[i];
        const int sh = 1 << i;
        for (std::size_t w = 0; w < nw; ++w) t.words[w] ^= (t.words[w] & a) << sh;
    }
    for (int i = 6; i < m; ++i) {
        const std::size_t stride = std::size_t{1} << (i - 6);
        for (std::size_t base = 0; base < nw; base += 2 * stride)
            for (std::size_t j = 0; j < stride; ++j)
                t.words[base + stride + j] ^= t.words[base + j];
    }
}

void zeta_transform(TruthTable& t, const ExecPolicy& policy) {
    const int nw_threads = effective_workers(policy);
    if (nw_threads <= 1) {
        zeta_transform_serial(t);
        return;
    }
#ifdef _OPENMP
    const int m = t.m;
    const std::int64_t nw = static_cast<std::int64_t>(t.words.size());
    for (int i = 0; i < std::min(m, 6); ++i) {
        const std::uint64_t a = kZetaMask[i];
        const int sh = 1 << i;
#pragma omp parallel for schedule(static) num_threads(nw_threads)
        for (std::int64_t w = 0; w < nw; ++w) t.words[w] ^= (t.words[w] & a) << sh;
    }
    for (int i = 6; i < m; ++i) {
        const std::int64_t stride = std::int64_t{1} << (i - 6);
        const std::int64_t pairs = nw / 2;
#pragma omp parallel for schedule(static) num_threads(nw_threads)
        for (std::int64_t p = 0; p < pairs; ++p) {
            const std::int64_t base = (p / stride) * 2 * stride;
            const std::int64_t j = p % stride;
            t.words[base + stride + j] ^= t.words[base + j];
        }
    }
#else
    zeta_transform_serial(t);
#endif
}

TruthTable truth_table(const PolyF2& p, const ExecPolicy& policy) {
    if (p.m > policy.enum_cap_m)
        throw DomainError("truth_table: m exceeds enumeration cap");
    TruthTable t = tt_make(p.m);
    for (auto term : p.terms) tt_set_bit(t, term, 1);
    zeta_transform(t, policy);
    return t;
}

PolyF2 anf_from_truth_table(const TruthTable& tin, const ExecPolicy& policy) {
    TruthTable t = tin;
    zeta_transform(t, policy);
    std::vector<std::uint64_t> terms;
    const std::uint64_t limit = t.m >= 64 ? ~0ull : ((std::uint64_t{1} << t.m) - 1);
    for (std::size_t w = 0; w < t.words.size(); ++w) {
        std::uint64_t bits = t.words[w];
        while (bits) {
            const int b = std::countr_zero(bits);
            bits &= bits - 1;
            const std::uint64_t idx = (std::uint64_t{w} << 6) | static_cast<unsigned>(b);
            if (idx <= limit) terms.push_back(idx);
        }
    }
    return make_poly(t.m, std::move(terms));
}

std::uint64_t ones_count_serial(const TruthTable& t) {
    std::uint64_t n = 0;
    // Sub-word tables occupy the low 2^m bits of words[0].
    if (t.m < 6)
        return static_cast<std::uint64_t>(
            std::popcount(t.words[0] & ((1ull << (1u << t.m)) - 1)));
    for (auto w : t.words) n += static_cast<unsigned>(std::popcount(w));
    return n;
}

std::uint64_t ones_count(const TruthTable& t, const ExecPolicy& policy) {
    const int workers = effective_workers(policy);
    if (workers <= 1 || t.m < 6) return ones_count_serial(t);
#ifdef _OPENMP
    const std::int64_t nw = static_cast<std::int64_t>(t.words.size());
    std::uint64_t n = 0;
#pragma omp parallel for schedule(static) num_threads(workers) reduction(+ : n)
    for (std::int64_t w = 0; w < nw; ++w)
        n += static_cast<unsigned>(std::popcount(t.words[w]));
    return n;
#else
    return ones_count_serial(t);
#endif
}

void tt_xor_inplace(TruthTable& dst, const TruthTable& src) {
    if (dst.m != src.m) throw DomainError("tt_xor_inplace: mismatched tables");
    for (std::size_t i = 0; i < dst.words.size(); ++i) dst.words[i] ^= src.words[i];
}

PolyF2 parse_poly(const std::string& text, std::optional<int> m_opt) {
    std::size_t i = 0;
    auto skip = [&] {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
    };
    std::vector<std::uint64_t> terms;
    int max_idx = 0;
    skip();
    if (i == text.size()) throw ParseError("empty expression", i);
    bool first = true;
    while (true) {
        if (!first) {
            skip();
            if (i == text.size()) break;
            if (text[i] != '+') throw ParseError("expected '+'", i);
            ++i;
        }
        first = false;
        skip();
        if (i == text.size()) throw ParseError("expected term", i);
        if (text[i] == '1') {
            ++i;
            terms.push_back(0);
            continue;
        }
        if (text[i] == '0') {
            ++i;
            continue;
        }
        std::uint64_t mask = 0;
        while (true) {
            skip();
            if (i == text.size() || text[i] != 'x')
                throw ParseError("expected variable", i);
            ++i;
            if (i == text.size() || !std::isdigit(static_cast<unsigned char>(text[i])) ||
                text[i] == '0')
                throw ParseError("expected variable index", i);
            int idx = 0;
            while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
                idx = idx * 10 + (text[i] - '0');
                if (idx > 64) throw ParseError("variable index exceeds 64", i);
                ++i;
            }
            mask |= 1ull << (idx - 1);
            max_idx = std::max(max_idx, idx);
            skip();
            if (i < text.size() && text[i] == '*') {
                ++i;
                continue;
            }
            break;
        }
        terms.push_back(mask);
    }
    const int m = m_opt ? *m_opt : std::max(1, max_idx);
    if (m < 1 || m > 64) throw DomainError("parse_poly: m out of range [1,64]");
    if (max_idx > m) throw DomainError("parse_poly: variable index exceeds m");
    return make_poly(m, std::move(terms));
}

std::string serialize_poly(const PolyF2& p) {
    if (p.terms.empty()) return "0";
    std::string out;
    for (std::size_t t = 0; t < p.terms.size(); ++t) {
        if (t) out += " + ";
        std::uint64_t mask = p.terms[t];
        if (mask == 0) {
            out += "1";
            continue;
        }
        bool firstv = true;
        while (mask) {
            const int b = std::countr_zero(mask);
            mask &= mask - 1;
            if (!firstv) out += "*";
            firstv = false;
            out += "x" + std::to_string(b + 1);
        }
    }
    return out;
}

RrefResult rref(const BitMatrix& m) {
    if (m.ncols < 0 || m.ncols > 64) throw DomainError("rref: ncols out of range");
    std::vector<std::uint64_t> rows = m.rows;
    RrefResult res;
    res.mat.ncols = m.ncols;
    std::size_t rank = 0;
    for (int c = 0; c < m.ncols && rank < rows.size(); ++c) {
        const std::uint64_t bit = 1ull << c;
        std::size_t piv = rank;
        while (piv < rows.size() && !(rows[piv] & bit)) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[rank], rows[piv]);
        for (std::size_t r = 0; r < rows.size(); ++r)
            if (r != rank && (rows[r] & bit)) rows[r] ^= rows[rank];
        res.pivots.push_back(c);
        ++rank;
    }
    rows.resize(rank);
    res.mat.rows = std::move(rows);
    res.rank = static_cast<int>(rank);
    return res;
}

bool span_contains(const BitMatrix& rref_mat, std::uint64_t v) {
    for (auto row : rref_mat.rows) {
        if (row == 0) continue;
        const std::uint64_t pivot = row & (~row + 1);
        if (v & pivot) v ^= row;
    }
    return v == 0;
}

std::optional<std::uint64_t> solve_linear(const BitMatrix& a, std::uint64_t b) {
    if (a.rows.size() > 64) throw DomainError("solve_linear: more than 64 equations");
    std::vector<std::uint64_t> rows = a.rows;
    std::vector<int> rhs(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) rhs[r] = static_cast<int>((b >> r) & 1);
    std::size_t rank = 0;
    std::vector<int> pivots;
    for (int c = 0; c < a.ncols && rank < rows.size(); ++c) {
        const std::uint64_t bit = 1ull << c;
        std::size_t piv = rank;
        while (piv < rows.size() && !(rows[piv] & bit)) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[rank], rows[piv]);
        std::swap(rhs[rank], rhs[piv]);
        for (std::size_t r = 0; r < rows.size(); ++r)
            if (r != rank && (rows[r] & bit)) {
                rows[r] ^= rows[rank];
                rhs[r] ^= rhs[rank];
            }
        pivots.push_back(c);
        ++rank;
    }
    for (std::size_t r = rank; r < rows.size(); ++r)
        if (rhs[r]) return std::nullopt;
    std::uint64_t x = 0;
    for (std::size_t r = 0; r < rank; ++r)
        if (rhs[r]) x |= 1ull << pivots[r];
    return x;
}

std::optional<std::uint64_t> combo_of_rows(const std::vector<std::uint64_t>& rows,
                                           std::uint64_t v) {
    if (rows.size() > 64) throw DomainError("combo_of_rows: more than 64 rows");
    // basis entries: (vector, row combination), reduced so pivots are distinct
    std::vector<std::pair<std::uint64_t, std::uint64_t>> basis;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        std::uint64_t cur = rows[i], combo = 1ull << i;
        for (const auto& [bv, bc] : basis) {
            const std::uint64_t pivot = bv & (~bv + 1);
            if (cur & pivot) {
                cur ^= bv;
                combo ^= bc;
            }
        }
        if (cur) basis.emplace_back(cur, combo);
    }
    std::uint64_t combo = 0;
    for (const auto& [bv, bc] : basis) {
        const std::uint64_t pivot = bv & (~bv + 1);
        if (v & pivot) {
            v ^= bv;
            combo ^= bc;
        }
    }
    if (v) return std::nullopt;
    return combo;
}

std::vector<std::uint64_t> nullspace_basis(const BitMatrix& a) {
    RrefResult r = rref(a);
    std::vector<bool> is_pivot(a.ncols, false);
    for (int p : r.pivots) is_pivot[p] = true;
    std::vector<std::uint64_t> basis;
    for (int f = 0; f < a.ncols; ++f) {
        if (is_pivot[f]) continue;
        std::uint64_t v = 1ull << f;
        for (std::size_t row = 0; row < r.mat.rows.size(); ++row)
            if (r.mat.rows[row] & (1ull << f)) v |= 1ull << r.pivots[row];
        basis.push_back(v);
    }
    BitMatrix b{a.ncols, basis};
    return rref(b).mat.rows;
}

RestrictResult restrict_affine(const PolyF2& p,
                               const std::vector<std::pair<PolyF2, int>>& constraints,
                               const ExecPolicy& policy) {
    if (p.m > policy.enum_cap_m)
        throw DomainError("restrict_affine: m exceeds enumeration cap");
    std::vector<std::uint64_t> rows;
    std::vector<int> rhs;
    for (const auto& [lin, b] : constraints) {
        if (lin.m != p.m) throw DomainError("restrict_affine: constraint over wrong m");
        auto [mask, c] = poly_affine_parts(lin);
        const int want = (b ^ c) & 1;
        if (mask == 0) {
            if (want) throw DomainError("restrict_affine: inconsistent constraints");
            continue;
        }
        rows.push_back(mask);
        rhs.push_back(want);
    }
    // eliminate to RREF with the rhs carried along
    std::size_t rank = 0;
    std::vector<int> pivots;
    for (int c = 0; c < p.m && rank < rows.size(); ++c) {
        const std::uint64_t bit = 1ull << c;
        std::size_t piv = rank;
        while (piv < rows.size() && !(rows[piv] & bit)) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[rank], rows[piv]);
        std::swap(rhs[rank], rhs[piv]);
        for (std::size_t r = 0; r < rows.size(); ++r)
            if (r != rank && (rows[r] & bit)) {
                rows[r] ^= rows[rank];
                rhs[r] ^= rhs[rank];
            }
        pivots.push_back(c);
        ++rank;
    }
    for (std::size_t r = rank; r < rows.size(); ++r)
        if (rhs[r]) throw DomainError("restrict_affine: inconsistent constraints");
    rows.resize(rank);
    rhs.resize(rank);

    std::vector<bool> is_pivot(p.m, false);
    for (int c : pivots) is_pivot[c] = true;
    std::vector<int> free_vars;
    for (int c = 0; c < p.m; ++c)
        if (!is_pivot[c]) free_vars.push_back(c + 1);
    const int mp = static_cast<int>(free_vars.size());

    TruthTable full = truth_table(p, policy);
    TruthTable out = tt_make(mp);
    const std::uint64_t total = std::uint64_t{1} << mp;
    for (std::uint64_t y = 0; y < total; ++y) {
        std::uint64_t x = 0;
        for (int f = 0; f < mp; ++f)
            if ((y >> f) & 1) x |= 1ull << (free_vars[f] - 1);
        for (std::size_t r = 0; r < rank; ++r) {
            const int par = std::popcount(rows[r] & x) & 1;
            if ((rhs[r] ^ par) & 1) x |= 1ull << pivots[r];
        }
        tt_set_bit(out, y, tt_bit(full, x));
    }
    return RestrictResult{anf_from_truth_table(out, policy), std::move(free_vars)};
}

GammaTable gamma_make(int bits) {
    if (bits < 0 || bits > 24) throw DomainError("gamma table bits out of range [0,24]");
    GammaTable g;
    g.bits = bits;
    g.words.assign(bits <= 6 ? 1 : (std::size_t{1} << (bits - 6)), 0);
    return g;
}

int gamma_bit(const GammaTable& g, std::uint64_t x) {
    return static_cast<int>((g.words[x >> 6] >> (x & 63)) & 1);
}

void gamma_set_bit(GammaTable& g, std::uint64_t x, int v) {
    std::uint64_t bit = 1ull << (x & 63);
    if (v & 1) g.words[x >> 6] |= bit;
    else g.words[x >> 6] &= ~bit;
}

GammaTable gamma_identity_r1() {
    GammaTable g = gamma_make(1);
    gamma_set_bit(g, 1, 1);
    return g;
}

bool gamma_equal(const GammaTable& a, const GammaTable& b) {
    return a.bits == b.bits && a.words == b.words;
}

}  // namespace f2lab
