#include "f2lab/quadratic.hpp"

#include <bit>

namespace f2lab {

PolyF2 linform_poly(int m, const LinForm& f) { return poly_from_affine(m, f.mask, f.c); }

DicksonForm dickson_decompose(const PolyF2& p) {
    if (poly_degree(p) > 2) throw DomainError("dickson_decompose: degree exceeds 2");
    const int m = p.m;
    DicksonForm form;
    form.m = m;

    // neighbor masks of the symmetric bilinear form, plus linear/constant parts
    std::vector<std::uint64_t> b(m, 0);
    std::uint64_t lin = 0;
    int c = 0;
    for (auto t : p.terms) {
        const int pc = std::popcount(t);
        if (pc == 0) c = 1;
        else if (pc == 1) lin |= t;
        else {
            const int i = std::countr_zero(t);
            const int j = 63 - std::countl_zero(t);
            b[i] |= 1ull << j;
            b[j] |= 1ull << i;
        }
    }

    // peel symplectic pairs at the lowest-index pivots
    std::vector<std::uint64_t> flat;  // pair form masks in emission order
    while (true) {
        int i = -1;
        for (int a = 0; a < m; ++a)
            if (b[a]) {
                i = a;
                break;
            }
        if (i < 0) break;
        const int j = std::countr_zero(b[i]);
        const std::uint64_t u = b[i], v = b[j];
        for (int a = 0; a < m; ++a) {
            if ((u >> a) & 1) b[a] ^= v;
            if ((v >> a) & 1) b[a] ^= u;
        }
        lin ^= u & v;  // multilinear diagonal correction
        form.pairs.push_back({LinForm{v, 0}, LinForm{u, 0}});
        flat.push_back(v);
        flat.push_back(u);
    }

    if (lin != 0) {
        auto combo = combo_of_rows(flat, lin);
        if (!combo) {
            form.has_tail = true;
            form.tail = lin;
        } else {
            // absorb: L1 L2 + a L1 + b L2 = (L1 + b)(L2 + a) + ab
            for (std::size_t t = 0; t < form.pairs.size(); ++t) {
                const int a = static_cast<int>((*combo >> (2 * t)) & 1);
                const int bb = static_cast<int>((*combo >> (2 * t + 1)) & 1);
                form.pairs[t].first.c ^= bb;
                form.pairs[t].second.c ^= a;
                c ^= a & bb;
            }
        }
    }
    form.c = c;

    if (!poly_equal(dickson_reconstruct(form), p))
        throw DomainError("dickson_decompose: reconstruction mismatch");
    return form;
}

PolyF2 dickson_reconstruct(const DicksonForm& f) {
    PolyF2 acc = poly_zero(f.m);
    for (const auto& [a, b] : f.pairs)
        acc = poly_add(acc, poly_mul(linform_poly(f.m, a), linform_poly(f.m, b)));
    if (f.has_tail) acc = poly_add(acc, poly_from_affine(f.m, f.tail, 0));
    return poly_add_const(acc, f.c);
}

std::vector<PolyF2> dickson_witness_polys(const DicksonForm& f) {
    std::vector<PolyF2> out;
    for (const auto& [a, b] : f.pairs) {
        out.push_back(linform_poly(f.m, a));
        out.push_back(linform_poly(f.m, b));
    }
    if (f.has_tail) out.push_back(poly_from_affine(f.m, f.tail, 0));
    return out;
}

int rank1_quadratic(const PolyF2& p) {
    DicksonForm f = dickson_decompose(p);
    return 2 * static_cast<int>(f.pairs.size()) + (f.has_tail ? 1 : 0);
}

Rational bias_quadratic(const PolyF2& p) {
    DicksonForm f = dickson_decompose(p);
    if (f.has_tail) return Rational(0);
    Rational mag = pow2r(-static_cast<long>(f.pairs.size()));
    return f.c ? -mag : mag;
}

}  // namespace f2lab
