#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "f2lab/gf2.hpp"

namespace f2lab {

// Affine form x.mask + c over F2^m.
struct LinForm {
    std::uint64_t mask = 0;
    int c = 0;
};

// Dickson normal form of a degree-<=2 polynomial:
//   Q = sum_t pairs[t].first * pairs[t].second  (+ tail)  (+ c)
// with the pair forms' linear parts plus the tail linearly independent, and
// the tail (when present) a pure linear form. rank1 = 2*|pairs| + has_tail.
struct DicksonForm {
    int m = 0;
    std::vector<std::pair<LinForm, LinForm>> pairs;
    bool has_tail = false;
    std::uint64_t tail = 0;
    int c = 0;
};

// Symplectic peel of the quadratic part, lowest-index pivots, then tail
// absorption into affine shifts when the leftover linear form lies in the span
// of the pair forms. The symbolic reconstruction is verified before returning.
DicksonForm dickson_decompose(const PolyF2& p);

PolyF2 dickson_reconstruct(const DicksonForm& f);
// Pair forms (affine) followed by the tail (linear) as polynomials; the number
// of entries equals rank1 of the decomposed polynomial.
std::vector<PolyF2> dickson_witness_polys(const DicksonForm& f);

// deg 0 -> 0, nonconstant deg <= 1 -> 1, deg 2 per Dickson. DomainError above
// degree 2.
int rank1_quadratic(const PolyF2& p);

// Exact signed bias E[(-1)^Q]: 0 with a tail, otherwise (-1)^c 2^{-r/2}.
Rational bias_quadratic(const PolyF2& p);

PolyF2 linform_poly(int m, const LinForm& f);

}  // namespace f2lab
