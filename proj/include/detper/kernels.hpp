#pragma once

// Construction of the inverse-difference ("Cauchy type") and ratio
// ("Cayley type") matrix families over Z/p^K, together with their node sets.
//
// Node lists are stored explicitly as integer lifts even when they are just
// 1..n, so the generic-node builders share all downstream code.  For the
// quadratic families the nodes are the integers i^2 (not reduced mod p):
// at K >= 2 the entry (i^2 - j^2)^{-1} mod p^K depends on the actual integers.

#include <gmpxx.h>

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "detper/errors.hpp"
#include "detper/fp64.hpp"
#include "detper/residue.hpp"

namespace detper {

// Dense square matrix over Z/p^K with canonical entries in [0, p^K).
struct ModMat {
    int64_t p = 0;
    int K = 0;
    int n = 0;
    mpz_class q;  // p^K
    std::vector<mpz_class> a;

    ModMat() = default;
    ModMat(int64_t p_, int K_, int n_)
        : p(p_), K(K_), n(n_), q(mpz_pow_pk(p_, K_)), a(static_cast<size_t>(n_) * n_) {}

    mpz_class& at(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
    const mpz_class& at(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }

    void set(int i, int j, const mpz_class& v) { at(i, j) = mpz_mod_canonical(v, q); }

    // Entrywise reduction to a coarser precision k <= K.
    ModMat reduced(int k) const {
        if (k > K) throw PrecisionUnderflow("ModMat::reduced: cannot increase precision");
        ModMat r(p, k, n);
        for (size_t t = 0; t < a.size(); ++t) r.a[t] = mpz_mod_canonical(a[t], r.q);
        return r;
    }
};

// I*scale0 + M*scale1 (pencil helper).
inline ModMat pencil(const ModMat& m, const mpz_class& scale0, const mpz_class& scale1) {
    ModMat r(m.p, m.K, m.n);
    for (int i = 0; i < m.n; ++i)
        for (int j = 0; j < m.n; ++j)
            r.set(i, j, m.at(i, j) * scale1 + (i == j ? scale0 : mpz_class(0)));
    return r;
}

inline ModMat identity_plus(const ModMat& m) { return pencil(m, 1, 1); }

enum class KernelKind {
    CAUCHY,
    CAYLEY,
    CAYLEY_FULL,
    QUAD_CAUCHY,
    QUAD_CAYLEY,
    DPAB,
    GENERIC_CAUCHY,
    GENERIC_CAYLEY,
};

inline std::string kind_name(KernelKind k) {
    switch (k) {
        case KernelKind::CAUCHY: return "cauchy";
        case KernelKind::CAYLEY: return "cayley";
        case KernelKind::CAYLEY_FULL: return "cayley_full";
        case KernelKind::QUAD_CAUCHY: return "quad_cauchy";
        case KernelKind::QUAD_CAYLEY: return "quad_cayley";
        case KernelKind::DPAB: return "dpab";
        case KernelKind::GENERIC_CAUCHY: return "generic_cauchy";
        case KernelKind::GENERIC_CAYLEY: return "generic_cayley";
    }
    return "?";
}

// A kernel matrix: the dense grid plus its construction metadata.
struct KernelMatrix {
    KernelKind kind = KernelKind::CAUCHY;
    int64_t dp_a = 0, dp_b = 0;  // DPAB coefficients
    std::vector<int64_t> nodes;  // integer lifts indexing rows/columns
    ModMat mat;

    int64_t p() const { return mat.p; }
    int K() const { return mat.K; }
    int n() const { return mat.n; }
    PadicResidue entry(int i, int j) const { return PadicResidue(mat.at(i, j), mat.p, mat.K); }
};

namespace detail {

// Shared Cauchy/Cayley constructor over explicit integer nodes:
// entry(i,j) = numerator(i,j) * (x_i - x_j)^{-1}, zero diagonal.
// with_sum selects the (x_i + x_j) numerator (Cayley), else 1 (Cauchy).
inline KernelMatrix build_difference_kernel(KernelKind kind, int64_t p, int K,
                                            const std::vector<int64_t>& nodes, bool with_sum) {
    const int n = static_cast<int>(nodes.size());
    std::set<int64_t> classes;
    for (int64_t x : nodes) {
        int64_t r = x % p;
        if (r < 0) r += p;
        classes.insert(r);
    }
    if (static_cast<int>(classes.size()) != n)
        throw Error("build_kernel: nodes must be distinct mod p");

    KernelMatrix m;
    m.kind = kind;
    m.nodes = nodes;
    m.mat = ModMat(p, K, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < i; ++j) {
            mpz_class diff(static_cast<long>(nodes[i] - nodes[j]));
            mpz_class inv = mpz_invert_checked(mpz_mod_canonical(diff, m.mat.q), m.mat.q);
            mpz_class num = with_sum ? mpz_class(static_cast<long>(nodes[i] + nodes[j]))
                                     : mpz_class(1);
            mpz_class v = mpz_mod_canonical(num * inv, m.mat.q);
            m.mat.at(i, j) = v;
            m.mat.at(j, i) = mpz_mod_canonical(-v, m.mat.q);  // skew by construction
        }
    }
    return m;
}

inline std::vector<int64_t> range_nodes(int64_t lo, int64_t hi) {
    std::vector<int64_t> v;
    for (int64_t x = lo; x <= hi; ++x) v.push_back(x);
    return v;
}

inline std::vector<int64_t> square_nodes(int64_t p) {
    std::vector<int64_t> v;
    for (int64_t i = 1; i <= (p - 1) / 2; ++i) v.push_back(i * i);
    return v;
}

}  // namespace detail

// CAUCHY:   (p-1) x (p-1), entries (i-j)^{-1}.
// CAYLEY:   (p-1) x (p-1), entries (i+j)(i-j)^{-1}.
// CAYLEY_FULL: p x p over 1..p; i-j is never divisible by p for i != j, and
//              the numerator i+j may be (entry (2,3) at p=5 is 0).
// QUAD_CAUCHY / QUAD_CAYLEY: m x m over the integer nodes i^2, m = (p-1)/2,
//              only for p == 3 (mod 4) (squares are then distinct mod p).
inline KernelMatrix build_kernel(KernelKind kind, int64_t p, int K) {
    switch (kind) {
        case KernelKind::CAUCHY:
            return detail::build_difference_kernel(kind, p, K, detail::range_nodes(1, p - 1),
                                                   false);
        case KernelKind::CAYLEY:
            return detail::build_difference_kernel(kind, p, K, detail::range_nodes(1, p - 1),
                                                   true);
        case KernelKind::CAYLEY_FULL:
            return detail::build_difference_kernel(kind, p, K, detail::range_nodes(1, p), true);
        case KernelKind::QUAD_CAUCHY:
        case KernelKind::QUAD_CAYLEY:
            if (p % 4 != 3)
                throw BadCongruenceClass(
                    "build_kernel: quadratic families need p == 3 (mod 4)");
            return detail::build_difference_kernel(kind, p, K, detail::square_nodes(p),
                                                   kind == KernelKind::QUAD_CAYLEY);
        default:
            throw Error("build_kernel: kind requires explicit nodes or coefficients");
    }
}

inline KernelMatrix build_generic(KernelKind kind, int64_t p, int K,
                                  const std::vector<int64_t>& nodes) {
    if (kind != KernelKind::GENERIC_CAUCHY && kind != KernelKind::GENERIC_CAYLEY)
        throw Error("build_generic: only the generic kinds take explicit nodes");
    return detail::build_difference_kernel(kind, p, K, nodes,
                                           kind == KernelKind::GENERIC_CAYLEY);
}

// (p-1) x (p-1) matrix with entry (i^2 + a i j + b j^2)^(p-2) mod p.
// Fixed at K = 1: x^(p-2) inverts units and kills multiples of p.
inline KernelMatrix build_dpab(int64_t p, int64_t a, int64_t b) {
    KernelMatrix m;
    m.kind = KernelKind::DPAB;
    m.dp_a = ((a % p) + p) % p;
    m.dp_b = ((b % p) + p) % p;
    m.nodes = detail::range_nodes(1, p - 1);
    m.mat = ModMat(p, 1, static_cast<int>(p - 1));
    const uint64_t up = static_cast<uint64_t>(p);
    for (int64_t i = 1; i <= p - 1; ++i) {
        for (int64_t j = 1; j <= p - 1; ++j) {
            uint64_t q = static_cast<uint64_t>(
                ((i * i + m.dp_a * i * j + m.dp_b * j * j) % p + p) % p);
            uint64_t v = powmod64(q, up - 2, up);
            m.mat.at(static_cast<int>(i - 1), static_cast<int>(j - 1)) =
                mpz_class(static_cast<unsigned long>(v));
        }
    }
    return m;
}

// The list (1^2, 2^2, ..., m^2) mod p for p == 3 (mod 4); asserts it is
// exactly the group of m-th roots of unity.
inline std::vector<int64_t> mu_m_nodes(int64_t p) {
    if (p % 4 != 3) throw BadCongruenceClass("mu_m_nodes: need p == 3 (mod 4)");
    int64_t m = (p - 1) / 2;
    std::vector<int64_t> out;
    std::set<int64_t> seen;
    for (int64_t i = 1; i <= m; ++i) {
        int64_t s = (i * i) % p;
        out.push_back(s);
        seen.insert(s);
    }
    std::set<int64_t> roots;
    for (int64_t x = 1; x < p; ++x)
        if (powmod64(static_cast<uint64_t>(x), static_cast<uint64_t>(m),
                     static_cast<uint64_t>(p)) == 1)
            roots.insert(x);
    if (seen != roots || static_cast<int64_t>(seen.size()) != m)
        throw Error("mu_m_nodes: squares do not enumerate the m-th roots of unity");
    return out;
}

// Expand Phi(X) = prod_i (X - a_i) over the mu_m nodes with coefficients kept
// mod p^2, and confirm Phi is monic and == X^m - 1 mod p.
inline bool phi_check(int64_t p) {
    if (p % 4 != 3) throw BadCongruenceClass("phi_check: need p == 3 (mod 4)");
    std::vector<int64_t> a = mu_m_nodes(p);
    const int m = static_cast<int>(a.size());
    mpz_class q2 = mpz_pow_pk(p, 2);
    std::vector<mpz_class> coef(static_cast<size_t>(m) + 1, 0);
    coef[0] = 1;  // running product, degree grows one node at a time
    int deg = 0;
    for (int t = 0; t < m; ++t) {
        for (int d = deg + 1; d >= 1; --d)
            coef[d] = mpz_mod_canonical(coef[d - 1] - a[t] * coef[d], q2);
        coef[0] = mpz_mod_canonical(-a[t] * coef[0], q2);
        ++deg;
    }
    if (coef[m] != 1) return false;
    for (int d = 1; d < m; ++d)
        if (mpz_mod_canonical(coef[d], mpz_class(static_cast<long>(p))) != 0) return false;
    return mpz_mod_canonical(coef[0] + 1, mpz_class(static_cast<long>(p))) == 0;
}

}  // namespace detper
