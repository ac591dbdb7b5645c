#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "f2lab/exec.hpp"
#include "f2lab/rational.hpp"

namespace f2lab {

// Multilinear polynomial over F2 in algebraic normal form. Each monomial is a
// variable mask: bit i-1 set means x_i is a factor; mask 0 is the constant 1.
// `terms` is sorted ascending and duplicate-free (the canonical form). m is
// the ambient variable count, 0 <= m <= 64; parsing never yields m = 0 but
// restrictions may.
struct PolyF2 {
    int m = 1;
    std::vector<std::uint64_t> terms;
};

PolyF2 poly_zero(int m);
PolyF2 poly_one(int m);
PolyF2 poly_var(int m, int i);  // x_i, 1-based
// Canonicalize: sort, drop duplicate pairs (mod-2 cancellation), check masks fit m.
PolyF2 make_poly(int m, std::vector<std::uint64_t> terms);

bool poly_is_zero(const PolyF2& p);
bool poly_is_const(const PolyF2& p);  // 0 or 1
int poly_degree(const PolyF2& p);     // max popcount over terms; 0 for constants
bool poly_equal(const PolyF2& a, const PolyF2& b);
// Strict total order on (m, terms); used wherever sets of polynomials need a
// canonical ordering.
bool poly_less(const PolyF2& a, const PolyF2& b);

PolyF2 poly_add(const PolyF2& a, const PolyF2& b);
PolyF2 poly_mul(const PolyF2& a, const PolyF2& b);
PolyF2 poly_add_const(PolyF2 p, int bit);
// Degree-<=1 accessors: linear mask and constant bit. DomainError if deg > 1.
std::pair<std::uint64_t, int> poly_affine_parts(const PolyF2& p);
PolyF2 poly_from_affine(int m, std::uint64_t mask, int c);

int poly_eval(const PolyF2& p, std::uint64_t x);

// Truth table of an m-variable function, bit-packed little-endian: bit x of
// the table (bit x%64 of words[x/64]) is f(x), where bit i-1 of x is x_i.
struct TruthTable {
    int m = 0;
    std::vector<std::uint64_t> words;
};

int tt_bit(const TruthTable& t, std::uint64_t x);
void tt_set_bit(TruthTable& t, std::uint64_t x, int v);
TruthTable tt_make(int m);

// In-place subset-sum (zeta) transform over F2; self-inverse, so it maps ANF
// indicator tables to truth tables and back with the same kernel.
void zeta_transform_serial(TruthTable& t);
void zeta_transform(TruthTable& t, const ExecPolicy& policy);

TruthTable truth_table(const PolyF2& p, const ExecPolicy& policy = serial_policy());
PolyF2 anf_from_truth_table(const TruthTable& t, const ExecPolicy& policy = serial_policy());

std::uint64_t ones_count_serial(const TruthTable& t);
std::uint64_t ones_count(const TruthTable& t, const ExecPolicy& policy);
void tt_xor_inplace(TruthTable& dst, const TruthTable& src);

// Expression grammar (whitespace insignificant, no parentheses):
//   expr   := term ('+' term)*
//   term   := '0' | '1' | factor ('*' factor)*
//   factor := 'x' [1-9][0-9]*
// m, when supplied, must cover every referenced index; otherwise m is the
// highest referenced index (1 when none).
PolyF2 parse_poly(const std::string& text, std::optional<int> m = std::nullopt);
std::string serialize_poly(const PolyF2& p);

// Dense F2 matrix with up to 64 columns; one word per row, column j is bit j.
struct BitMatrix {
    int ncols = 0;
    std::vector<std::uint64_t> rows;
};

struct RrefResult {
    BitMatrix mat;               // zero rows removed
    std::vector<int> pivots;     // ascending pivot columns
    int rank = 0;
};

RrefResult rref(const BitMatrix& m);
bool span_contains(const BitMatrix& rref_mat, std::uint64_t v);

// Solve A x = b treating each row as one equation (row . x = b_i). Returns the
// solution with all free variables 0, or nullopt if inconsistent.
std::optional<std::uint64_t> solve_linear(const BitMatrix& a, std::uint64_t b);
// Express v as an F2 combination of the given rows; returns the coefficient
// mask (bit i selects rows[i]) or nullopt.
std::optional<std::uint64_t> combo_of_rows(const std::vector<std::uint64_t>& rows, std::uint64_t v);
// RREF-canonical basis of the right kernel {x : A x = 0}.
std::vector<std::uint64_t> nullspace_basis(const BitMatrix& a);

// Restriction of P to the affine subspace cut out by L_i(x) = b_i (each L_i of
// degree <= 1). free_vars maps the new variables 1..m' to the original indices,
// ascending. DomainError if the system is inconsistent.
struct RestrictResult {
    PolyF2 poly;
    std::vector<int> free_vars;
};

RestrictResult restrict_affine(const PolyF2& p,
                               const std::vector<std::pair<PolyF2, int>>& constraints,
                               const ExecPolicy& policy = serial_policy());

// Function table on `bits` input bits, values bit-packed like TruthTable.
// Used for the Gamma tables of composition/refinement operations.
struct GammaTable {
    int bits = 0;
    std::vector<std::uint64_t> words;
};

GammaTable gamma_make(int bits);
int gamma_bit(const GammaTable& g, std::uint64_t x);
void gamma_set_bit(GammaTable& g, std::uint64_t x, int v);
GammaTable gamma_identity_r1();  // 1-bit identity
bool gamma_equal(const GammaTable& a, const GammaTable& b);

}  // namespace f2lab
