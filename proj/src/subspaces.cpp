#include "f2lab/subspaces.hpp"

#include <algorithm>
#include <bit>
#include <map>

namespace f2lab {

namespace {

BitMatrix as_matrix(const Subspace& v) { return BitMatrix{v.m, v.basis}; }

// Sunflower recursion state: subspaces plus their original indices.
struct Slice {
    std::vector<Subspace> spaces;
    std::vector<int> indices;
};

SunflowerResult search(const Slice& sl, int k, int s);

SunflowerResult search_lines(const Slice& sl, int s) {
    // k = 1: enough distinct lines give a trivial-core sunflower; otherwise a
    // repeated line is its own core.
    std::vector<std::uint64_t> seen;
    std::vector<int> firsts;
    for (std::size_t i = 0; i < sl.spaces.size(); ++i) {
        const std::uint64_t line = sl.spaces[i].basis[0];
        if (std::find(seen.begin(), seen.end(), line) == seen.end()) {
            seen.push_back(line);
            firsts.push_back(static_cast<int>(i));
        }
    }
    SunflowerResult res;
    const int m = sl.spaces.empty() ? 0 : sl.spaces[0].m;
    if (static_cast<int>(seen.size()) >= s) {
        res.found = true;
        res.core = subspace_from_vectors(m, {});
        for (int t = 0; t < s; ++t) res.indices.push_back(sl.indices[firsts[t]]);
        return res;
    }
    std::uint64_t best_line = 0;
    int best_count = 0;
    for (auto line : seen) {
        int cnt = 0;
        for (const auto& v : sl.spaces) cnt += (v.basis[0] == line) ? 1 : 0;
        if (cnt > best_count) {
            best_count = cnt;
            best_line = line;
        }
    }
    if (best_count >= s) {
        res.found = true;
        res.core = subspace_from_vectors(m, {best_line});
        for (std::size_t i = 0; i < sl.spaces.size() && static_cast<int>(res.indices.size()) < s; ++i)
            if (sl.spaces[i].basis[0] == best_line) res.indices.push_back(sl.indices[i]);
        return res;
    }
    return res;
}

SunflowerResult search(const Slice& sl, int k, int s) {
    SunflowerResult res;
    if (static_cast<int>(sl.spaces.size()) < s) return res;
    if (k == 1) return search_lines(sl, s);
    const int m = sl.spaces[0].m;

    // greedy maximal family with pairwise trivial intersections, input order
    std::vector<std::size_t> fam;
    for (std::size_t i = 0; i < sl.spaces.size(); ++i) {
        bool ok = true;
        for (auto j : fam)
            if (subspace_dim(subspace_intersect(sl.spaces[i], sl.spaces[j])) != 0) {
                ok = false;
                break;
            }
        if (ok) fam.push_back(i);
    }
    if (static_cast<int>(fam.size()) >= s) {
        res.found = true;
        res.core = subspace_from_vectors(m, {});
        for (int t = 0; t < s; ++t) res.indices.push_back(sl.indices[fam[t]]);
        return res;
    }

    // popular vector among the family's nonzero vectors, counted over all
    // members; ties to the numerically lowest vector
    std::map<std::uint64_t, int> counts;
    for (auto j : fam)
        for (auto x : subspace_nonzero_vectors(sl.spaces[j])) counts[x];  // candidates
    for (auto& [x, cnt] : counts)
        for (const auto& v : sl.spaces) cnt += subspace_contains(v, x) ? 1 : 0;
    std::uint64_t star = 0;
    int best = 0;
    for (const auto& [x, cnt] : counts)
        if (cnt > best) {
            best = cnt;
            star = x;
        }
    if (best == 0) return res;

    // slice: members containing star, with star quotiented out via the pivot row
    const int p = std::countr_zero(star);
    Slice next;
    for (std::size_t i = 0; i < sl.spaces.size(); ++i) {
        if (!subspace_contains(sl.spaces[i], star)) continue;
        std::vector<std::uint64_t> rows;
        for (auto rrow : sl.spaces[i].basis)
            if (std::countr_zero(rrow) != p) rows.push_back(rrow);
        // the pivot-p row is unique in an RREF basis, so exactly one was dropped
        next.spaces.push_back(subspace_from_vectors(m, rows));
        next.indices.push_back(sl.indices[i]);
    }
    SunflowerResult sub = search(next, k - 1, s);
    if (!sub.found) return res;
    std::vector<std::uint64_t> core_rows = sub.core.basis;
    core_rows.push_back(star);
    res.found = true;
    res.core = subspace_from_vectors(m, core_rows);
    res.indices = sub.indices;
    return res;
}

}  // namespace

Subspace subspace_from_vectors(int m, const std::vector<std::uint64_t>& vecs) {
    if (m < 0 || m > 64) throw DomainError("subspace: m out of range [0,64]");
    const std::uint64_t fit = m >= 64 ? ~0ull : ((1ull << m) - 1);
    for (auto v : vecs)
        if (v & ~fit) throw DomainError("subspace: vector beyond m bits");
    BitMatrix mat{m, vecs};
    return Subspace{m, rref(mat).mat.rows};
}

int subspace_dim(const Subspace& v) { return static_cast<int>(v.basis.size()); }

bool subspace_contains(const Subspace& v, std::uint64_t x) {
    return span_contains(BitMatrix{v.m, v.basis}, x);
}

bool subspace_equal(const Subspace& a, const Subspace& b) {
    return a.m == b.m && a.basis == b.basis;
}

Subspace subspace_sum(const Subspace& a, const Subspace& b) {
    if (a.m != b.m) throw DomainError("subspace_sum: mismatched m");
    std::vector<std::uint64_t> rows = a.basis;
    rows.insert(rows.end(), b.basis.begin(), b.basis.end());
    return subspace_from_vectors(a.m, rows);
}

Subspace subspace_intersect(const Subspace& a, const Subspace& b) {
    if (a.m != b.m) throw DomainError("subspace_intersect: mismatched m");
    std::vector<std::uint64_t> perp = nullspace_basis(as_matrix(a));
    std::vector<std::uint64_t> perp_b = nullspace_basis(as_matrix(b));
    perp.insert(perp.end(), perp_b.begin(), perp_b.end());
    Subspace inter{a.m, nullspace_basis(BitMatrix{a.m, perp})};
    // dimension formula as a safety net on the complement construction
    const int want = subspace_dim(a) + subspace_dim(b) -
                     subspace_dim(subspace_sum(a, b));
    if (subspace_dim(inter) != want)
        throw DomainError("subspace_intersect: dimension formula violated");
    return inter;
}

std::vector<std::uint64_t> subspace_nonzero_vectors(const Subspace& v) {
    const int k = subspace_dim(v);
    if (k > 24) throw DomainError("subspace_nonzero_vectors: dimension too large");
    std::vector<std::uint64_t> out;
    out.reserve((std::size_t{1} << k) - 1);
    for (std::uint64_t c = 1; c < (std::uint64_t{1} << k); ++c) {
        std::uint64_t x = 0;
        for (int i = 0; i < k; ++i)
            if ((c >> i) & 1) x ^= v.basis[i];
        out.push_back(x);
    }
    std::sort(out.begin(), out.end());
    return out;
}

SunflowerResult find_sunflower(const std::vector<Subspace>& collection, int s) {
    if (s < 1) throw DomainError("find_sunflower: s must be >= 1");
    if (collection.empty()) return SunflowerResult{};
    const int m = collection[0].m;
    const int k = subspace_dim(collection[0]);
    if (k < 1) throw DomainError("find_sunflower: members must have dimension >= 1");
    for (const auto& v : collection)
        if (v.m != m || subspace_dim(v) != k)
            throw DomainError("find_sunflower: members must share m and dimension");
    Slice sl;
    sl.spaces = collection;
    for (std::size_t i = 0; i < collection.size(); ++i)
        sl.indices.push_back(static_cast<int>(i));
    SunflowerResult res = search(sl, k, s);
    if (res.found) {
        // post-hoc validation: every pairwise intersection equals the core
        for (std::size_t i = 0; i < res.indices.size(); ++i)
            for (std::size_t j = i + 1; j < res.indices.size(); ++j) {
                Subspace inter = subspace_intersect(collection[res.indices[i]],
                                                    collection[res.indices[j]]);
                if (!subspace_equal(inter, res.core))
                    throw DomainError("find_sunflower: validation failed");
            }
    }
    return res;
}

Int sunflower_bound(int k, int s) {
    if (k < 1 || s < 1) throw DomainError("sunflower_bound: k,s must be >= 1");
    Int b = 1;
    for (int i = 0; i < k + 1; ++i) b *= s;
    return b * pow2i(static_cast<unsigned>((k * k + k - 2) / 2));
}

}  // namespace f2lab
