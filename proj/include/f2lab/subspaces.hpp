#pragma once

#include <cstdint>
#include <vector>

#include "f2lab/gf2.hpp"

namespace f2lab {

// Linear subspace of F2^m given by its canonical basis: the RREF rows of any
// spanning set, ordered by ascending pivot (pivot = lowest set bit). Equal
// subspaces therefore have identical representations.
struct Subspace {
    int m = 0;
    std::vector<std::uint64_t> basis;
};

Subspace subspace_from_vectors(int m, const std::vector<std::uint64_t>& vecs);
int subspace_dim(const Subspace& v);
bool subspace_contains(const Subspace& v, std::uint64_t x);
bool subspace_equal(const Subspace& a, const Subspace& b);
Subspace subspace_sum(const Subspace& a, const Subspace& b);
// Computed as the orthogonal complement of (A-perp + B-perp); exact over F2.
Subspace subspace_intersect(const Subspace& a, const Subspace& b);
// All nonzero vectors, ascending numeric order.
std::vector<std::uint64_t> subspace_nonzero_vectors(const Subspace& v);

struct SunflowerResult {
    bool found = false;
    Subspace core;
    std::vector<int> indices;  // positions into the input collection
};

// Deterministic sunflower search over a collection of equal-dimension
// subspaces: greedy pairwise-trivial family first, otherwise recurse on the
// most popular vector's complement slice and lift the core. Always validates
// pairwise intersections against the core before reporting success; guaranteed
// to succeed when the collection size reaches sunflower_bound(k, s).
SunflowerResult find_sunflower(const std::vector<Subspace>& collection, int s);

// s^(k+1) * 2^((k^2+k-2)/2)
Int sunflower_bound(int k, int s);

}  // namespace f2lab
