#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "f2lab/gf2.hpp"
#include "f2lab/subspaces.hpp"

namespace f2lab {

// Sparse Walsh spectrum of (-1)^P: entries (gamma, W[gamma]) with W nonzero,
// gamma ascending. The Fourier coefficient at gamma is W[gamma] / 2^m.
// Parseval (sum of W^2 == 4^m) is asserted at construction.
struct WalshSpectrum {
    int m = 0;
    std::vector<std::pair<std::uint64_t, long long>> entries;
};

WalshSpectrum walsh_spectrum(const PolyF2& p, const ExecPolicy& policy = serial_policy());
Rational spectrum_coeff(const WalshSpectrum& s, std::uint64_t gamma);

Rational pr_one(const PolyF2& p, const ExecPolicy& policy = serial_policy());
// E[(-1)^P] = (#zeros - #ones) / 2^m.
Rational signed_bias(const PolyF2& p, const ExecPolicy& policy = serial_policy());
Rational signed_bias_of_table(const TruthTable& t, const ExecPolicy& policy = serial_policy());

// Span of the frequencies carrying nonzero spectral mass; the Fourier support
// of (-1)^P lies inside it, which is what justifies factoring products over
// disjoint dependency spaces.
Subspace dependency_space(const PolyF2& p, const ExecPolicy& policy = serial_policy());

// max over nonzero lambda of |signed_bias(sum lambda_i P_i)|, swept in
// gray-code order over XORed truth tables.
Rational max_nonzero_bias(const std::vector<PolyF2>& polys,
                          const ExecPolicy& policy = serial_policy());

struct VaziraniReport {
    int n = 0;
    Rational tv;         // exact TV of the joint tuple from uniform on {0,1}^n
    Rational eps;        // max nonzero-combination bias
    Rational bound;      // 2^{n/2} eps, exact for even n; 2^{ceil(n/2)} eps otherwise
    bool bound_exact = true;
    Rational tv_sq;      // exact squared quantities backing `holds`
    Rational bound_sq;   // 2^n eps^2
    bool holds = false;  // tv^2 <= 2^n eps^2
};

// XOR-lemma check: small bias for every nonzero combination forces closeness
// to uniform. `holds` is decided exactly on the squared inequality.
VaziraniReport vazirani_check(const std::vector<PolyF2>& polys,
                              const ExecPolicy& policy = serial_policy());

}  // namespace f2lab
