#pragma once

// Exact linear algebra over Z/p^K and F_p:
//   - determinant by minimal-valuation-pivot elimination with precision
//     bookkeeping (uint64 fast path when p^K < 2^63, GMP otherwise),
//   - exact integer determinant oracle (fraction-free Bareiss),
//   - permanents (signed inclusion-exclusion with Gray-code updates, and
//     brute-force enumeration),
//   - Pfaffian of skew matrices by symmetric elimination,
//   - Vandermonde conjugation via Newton interpolation,
//   - characteristic pencil det(I + tM) over F_p and the permanent transfer
//     per(I + uA) = det(I + alpha uA) with alpha^2 = -1.

#include <gmpxx.h>

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "detper/errors.hpp"
#include "detper/fp64.hpp"
#include "detper/kernels.hpp"
#include "detper/quadext.hpp"
#include "detper/residue.hpp"

namespace detper {

// ---------------------------------------------------------------------------
// Elimination engine over Z/p^K.
//
// Invariants maintained per step (working precision W, initially K):
//   - pivot = entry of minimal valuation v in the remaining block (ties:
//     lowest row, then lowest column); row and column swaps each flip sign;
//   - the pivot's unit part is trusted mod p^(W-v), so the accumulated unit
//     is trusted to min over steps of (W - v);
//   - eliminating below the pivot divides by p^v, so W shrinks to W - v and
//     every remaining entry is only meaningful mod p^(W-v).
// If the remaining block vanishes at working precision the determinant is
// certified == 0 mod p^(v_acc + rem*W) and nothing more is known.
// ---------------------------------------------------------------------------

struct EngineOut {
    bool zero = false;     // remaining block vanished (or precision fully consumed)
    long zero_cert = 0;    // certified exponent in the zero case
    long val = 0;
    mpz_class unit;        // sign folded in, canonical mod p^known
    int known = 0;
};

namespace detail {

struct U64Ring {
    using V = uint64_t;
    uint64_t p;
    std::vector<uint64_t> pw;
    U64Ring(int64_t p_, int K) : p(static_cast<uint64_t>(p_)), pw(K + 1) {
        pw[0] = 1;
        for (int i = 1; i <= K; ++i) pw[i] = pw[i - 1] * p;
    }
    V red(const V& x, int k) const { return x % pw[k]; }
    bool is_zero(const V& x) const { return x == 0; }
    int val(V x) const {  // x != 0
        int v = 0;
        while (x % p == 0) { x /= p; ++v; }
        return v;
    }
    V divp(const V& x, int v) const { return x / pw[v]; }
    V mul(const V& x, const V& y, int k) const { return mulmod64(x, y, pw[k]); }
    V sub(const V& x, const V& y, int k) const { return submod64(x % pw[k], y % pw[k], pw[k]); }
    V inv(const V& x, int k) const { return invmod64(x % pw[k], pw[k]); }
    V neg(const V& x, int k) const { return x % pw[k] == 0 ? 0 : pw[k] - x % pw[k]; }
    mpz_class to_mpz(const V& x) const { return mpz_class(static_cast<unsigned long>(x)); }
};

struct MpzRing {
    using V = mpz_class;
    uint64_t p;
    std::vector<mpz_class> pw;
    MpzRing(int64_t p_, int K) : p(static_cast<uint64_t>(p_)), pw(K + 1) {
        pw[0] = 1;
        for (int i = 1; i <= K; ++i) pw[i] = pw[i - 1] * static_cast<unsigned long>(p);
    }
    V red(const V& x, int k) const { return mpz_mod_canonical(x, pw[k]); }
    bool is_zero(const V& x) const { return x == 0; }
    int val(const V& x) const {
        mpz_class tmp;
        return static_cast<int>(
            mpz_remove(tmp.get_mpz_t(), x.get_mpz_t(), mpz_class(p).get_mpz_t()));
    }
    V divp(const V& x, int v) const {
        mpz_class r;
        mpz_divexact(r.get_mpz_t(), x.get_mpz_t(), pw[v].get_mpz_t());
        return r;
    }
    V mul(const V& x, const V& y, int k) const { return mpz_mod_canonical(x * y, pw[k]); }
    V sub(const V& x, const V& y, int k) const { return mpz_mod_canonical(x - y, pw[k]); }
    V inv(const V& x, int k) const { return mpz_invert_checked(red(x, k), pw[k]); }
    V neg(const V& x, int k) const { return mpz_mod_canonical(-x, pw[k]); }
    mpz_class to_mpz(const V& x) const { return x; }
};

template <class Ring>
EngineOut det_eliminate(std::vector<typename Ring::V> A, int n, const Ring& R, int K) {
    using V = typename Ring::V;
    auto at = [&](int r, int c) -> V& { return A[static_cast<size_t>(r) * n + c]; };
    int W = K;
    long v_acc = 0;
    int known = K, sign = 1;
    V unit = R.red(V(1), K);
    for (int step = 0; step < n; ++step) {
        if (W == 0) {
            EngineOut o;
            o.zero = true;
            o.zero_cert = v_acc;
            return o;
        }
        int bv = W, br = -1, bc = -1;
        for (int r = step; r < n && bv > 0; ++r) {
            for (int c = step; c < n; ++c) {
                V x = R.red(at(r, c), W);
                if (R.is_zero(x)) continue;
                int v = R.val(x);
                if (v < bv) {
                    bv = v;
                    br = r;
                    bc = c;
                    if (v == 0) break;
                }
            }
        }
        if (br < 0) {
            EngineOut o;
            o.zero = true;
            o.zero_cert = v_acc + static_cast<long>(n - step) * W;
            return o;
        }
        if (br != step) {
            for (int c = 0; c < n; ++c) std::swap(at(step, c), at(br, c));
            sign = -sign;
        }
        if (bc != step) {
            for (int r = 0; r < n; ++r) std::swap(at(r, step), at(r, bc));
            sign = -sign;
        }
        const int v = bv;
        V piv = R.red(at(step, step), W);
        V pu = R.divp(piv, v);
        v_acc += v;
        known = std::min(known, W - v);
        unit = R.mul(unit, pu, K);
        const int Wn = W - v;
        if (Wn == 0) {
            W = 0;
            continue;
        }
        V ipu = R.inv(pu, Wn);
        for (int r = step + 1; r < n; ++r) {
            V ars = R.red(at(r, step), W);
            if (R.is_zero(ars)) continue;
            V m = R.mul(R.divp(ars, v), ipu, Wn);
            if (R.is_zero(m)) continue;
            for (int c = step + 1; c < n; ++c)
                at(r, c) = R.sub(at(r, c), R.mul(m, R.red(at(step, c), Wn), Wn), Wn);
        }
        W = Wn;
    }
    if (known <= 0) {
        EngineOut o;
        o.zero = true;
        o.zero_cert = v_acc;
        return o;
    }
    EngineOut o;
    o.val = v_acc;
    o.known = known;
    V u = R.red(unit, known);
    if (sign < 0) u = R.neg(u, known);
    o.unit = R.to_mpz(u);
    return o;
}

inline std::vector<uint64_t> to_u64_grid(const ModMat& M) {
    std::vector<uint64_t> g(M.a.size());
    for (size_t i = 0; i < g.size(); ++i) g[i] = mpz_get_ui(M.a[i].get_mpz_t());
    return g;
}

inline EngineOut run_det_engine(const ModMat& M) {
    if (fits_u63(static_cast<uint64_t>(M.p), M.K))
        return det_eliminate(to_u64_grid(M), M.n, U64Ring(M.p, M.K), M.K);
    return det_eliminate(M.a, M.n, MpzRing(M.p, M.K), M.K);
}

inline ValUnit engine_to_valunit(const EngineOut& out, int64_t p, int target_k) {
    if (out.zero) {
        if (out.zero_cert >= target_k) return ValUnit::zero_cert(p, out.zero_cert);
        throw PrecisionExhausted("det_mod: certified only mod p^" +
                                 std::to_string(out.zero_cert) + ", wanted p^" +
                                 std::to_string(target_k));
    }
    ValUnit vu = ValUnit::make_unit(p, out.val, out.unit, out.known);
    if (!vu.resolves(target_k))
        throw PrecisionExhausted("det_mod: resolved " + vu.describe() + ", wanted mod p^" +
                                 std::to_string(target_k));
    return vu;
}

}  // namespace detail

// Determinant mod p^target_k computed at the matrix's own precision.
inline ValUnit det_mod(const ModMat& M, int target_k) {
    if (target_k > M.K)
        throw PrecisionUnderflow("det_mod: target exceeds the matrix precision");
    return detail::engine_to_valunit(detail::run_det_engine(M), M.p, target_k);
}

// Adaptive wrapper: build at K = target_k + expected_val + guard; on
// PrecisionExhausted rebuild once with the guard doubled.
inline ValUnit det_mod_adaptive(const std::function<ModMat(int)>& builder, int target_k,
                                int expected_val, int guard) {
    const int K1 = target_k + expected_val + guard;
    try {
        return det_mod(builder(K1), target_k);
    } catch (const PrecisionExhausted&) {
        const int K2 = target_k + expected_val + 2 * guard;
        return det_mod(builder(K2), target_k);
    }
}

// Exact integer determinant of the lifted matrix (entries read as integers in
// [0, p^K)) by fraction-free Bareiss elimination, then reduced mod p^K.
inline ValUnit det_exact_oracle(const ModMat& M) {
    const int n = M.n;
    std::vector<mpz_class> B = M.a;
    auto at = [&](int r, int c) -> mpz_class& { return B[static_cast<size_t>(r) * n + c]; };
    int sign = 1;
    mpz_class prev = 1;
    for (int k = 0; k + 1 < n; ++k) {
        int pr = -1;
        for (int r = k; r < n; ++r)
            if (at(r, k) != 0) {
                pr = r;
                break;
            }
        if (pr < 0) return ValUnit::exact_zero(M.p);
        if (pr != k) {
            for (int c = 0; c < n; ++c) std::swap(at(k, c), at(pr, c));
            sign = -sign;
        }
        for (int r = k + 1; r < n; ++r) {
            for (int c = k + 1; c < n; ++c) {
                mpz_class num = at(r, c) * at(k, k) - at(r, k) * at(k, c);
                mpz_divexact(at(r, c).get_mpz_t(), num.get_mpz_t(), prev.get_mpz_t());
            }
            at(r, k) = 0;
        }
        prev = at(k, k);
    }
    mpz_class det = n == 0 ? mpz_class(1) : at(n - 1, n - 1);
    if (sign < 0) det = -det;
    if (det == 0) return ValUnit::exact_zero(M.p);
    mpz_class r = mpz_mod_canonical(det, M.q);
    if (r == 0) return ValUnit::zero_cert(M.p, M.K);
    return val_unit_split(PadicResidue(r, M.p, M.K));
}

// ---------------------------------------------------------------------------
// Permanents.
// ---------------------------------------------------------------------------

// Signed inclusion-exclusion permanent:
//   per A = sum over nonempty column subsets S of (-1)^(n-|S|) prod_i r_i(S),
// with Gray-code single-column updates of the row sums r_i.
inline PadicResidue permanent_ryser(const ModMat& M, int cap = 26) {
    const int n = M.n;
    if (n > cap)
        throw RyserBudgetExceeded("permanent_ryser: dimension " + std::to_string(n) +
                                  " exceeds cap " + std::to_string(cap));
    if (n == 0) return PadicResidue(1, M.p, M.K);
    if (fits_u63(static_cast<uint64_t>(M.p), M.K)) {
        const uint64_t q = upow64(static_cast<uint64_t>(M.p), M.K);
        std::vector<uint64_t> a = detail::to_u64_grid(M);
        std::vector<uint64_t> rs(n, 0);
        uint64_t acc = 0;
        for (uint64_t g = 1; g < (uint64_t{1} << n); ++g) {
            uint64_t gray = g ^ (g >> 1);
            int j = std::countr_zero(g);
            bool added = (gray >> j) & 1;
            for (int i = 0; i < n; ++i) {
                uint64_t x = a[static_cast<size_t>(i) * n + j];
                rs[i] = added ? addmod64(rs[i], x, q) : submod64(rs[i], x, q);
            }
            uint64_t prod = 1;
            for (int i = 0; i < n; ++i) prod = mulmod64(prod, rs[i], q);
            int s = std::popcount(gray);
            acc = ((n - s) & 1) ? submod64(acc, prod, q) : addmod64(acc, prod, q);
        }
        return PadicResidue(mpz_class(static_cast<unsigned long>(acc)), M.p, M.K);
    }
    std::vector<mpz_class> rs(n, 0);
    mpz_class acc = 0;
    for (uint64_t g = 1; g < (uint64_t{1} << n); ++g) {
        uint64_t gray = g ^ (g >> 1);
        int j = std::countr_zero(g);
        bool added = (gray >> j) & 1;
        for (int i = 0; i < n; ++i) {
            const mpz_class& x = M.at(i, j);
            rs[i] = mpz_mod_canonical(added ? mpz_class(rs[i] + x) : mpz_class(rs[i] - x), M.q);
        }
        mpz_class prod = 1;
        for (int i = 0; i < n; ++i) prod = mpz_mod_canonical(prod * rs[i], M.q);
        int s = std::popcount(gray);
        acc = mpz_mod_canonical(
            ((n - s) & 1) ? mpz_class(acc - prod) : mpz_class(acc + prod), M.q);
    }
    return PadicResidue(acc, M.p, M.K);
}

// Brute-force permanent over all permutations; oracle for small n.
inline PadicResidue permanent_enum(const ModMat& M, int cap = 12) {
    const int n = M.n;
    if (n > cap) throw Error("permanent_enum: dimension beyond brute-force cap");
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    mpz_class acc = 0;
    do {
        mpz_class prod = 1;
        for (int i = 0; i < n; ++i) {
            prod *= M.at(i, idx[i]);
            prod = mpz_mod_canonical(prod, M.q);
        }
        acc += prod;
    } while (std::next_permutation(idx.begin(), idx.end()));
    return PadicResidue(acc, M.p, M.K);
}

// ---------------------------------------------------------------------------
// Pfaffian of a skew-symmetric matrix by symmetric elimination with the same
// minimal-valuation pivot rule and precision bookkeeping as det_mod.
// ---------------------------------------------------------------------------
inline ValUnit pfaffian(const ModMat& M, int target_k) {
    const int n = M.n;
    if (n % 2 != 0) throw Error("pfaffian: dimension must be even");
    if (target_k > M.K)
        throw PrecisionUnderflow("pfaffian: target exceeds the matrix precision");
    const int64_t p = M.p;
    detail::MpzRing R(p, M.K);
    std::vector<mpz_class> A = M.a;
    auto at = [&](int r, int c) -> mpz_class& { return A[static_cast<size_t>(r) * n + c]; };
    int W = M.K;
    long v_acc = 0;
    int known = M.K, sign = 1;
    mpz_class unit = 1;
    auto swap_sym = [&](int r1, int r2) {
        if (r1 == r2) return;
        for (int c = 0; c < n; ++c) std::swap(at(r1, c), at(r2, c));
        for (int r = 0; r < n; ++r) std::swap(at(r, r1), at(r, r2));
        sign = -sign;
    };
    for (int step = 0; step < n; step += 2) {
        if (W == 0) {
            EngineOut o;
            o.zero = true;
            o.zero_cert = v_acc;
            return detail::engine_to_valunit(o, p, target_k);
        }
        int bv = W, bi = -1, bj = -1;
        for (int i = step; i < n && bv > 0; ++i) {
            for (int j = i + 1; j < n; ++j) {
                mpz_class x = R.red(at(i, j), W);
                if (x == 0) continue;
                int v = R.val(x);
                if (v < bv) {
                    bv = v;
                    bi = i;
                    bj = j;
                    if (v == 0) break;
                }
            }
        }
        if (bi < 0) {
            EngineOut o;
            o.zero = true;
            o.zero_cert = v_acc + static_cast<long>((n - step) / 2) * W;
            return detail::engine_to_valunit(o, p, target_k);
        }
        swap_sym(bi, step);
        swap_sym(bj, step + 1);  // bj > bi >= step, so bj was not moved by the first swap
        const int v = bv;
        mpz_class piv = R.red(at(step, step + 1), W);
        if (piv == 0 || R.val(piv) != v)
            throw Error("pfaffian: pivot moved incorrectly");
        mpz_class pu = R.divp(piv, v);
        v_acc += v;
        known = std::min(known, W - v);
        unit = R.mul(unit, pu, M.K);
        const int Wn = W - v;
        if (Wn == 0) {
            W = 0;
            continue;
        }
        mpz_class ipu = R.inv(pu, Wn);
        for (int r = step + 2; r < n; ++r) {
            // zero A[r][step] with row/col step+1 (whose step entry is -piv),
            // then A[r][step+1] with row/col step
            mpz_class m1 = R.mul(R.divp(R.red(at(r, step), W), v), ipu, Wn);
            if (m1 != 0) {
                for (int c = 0; c < n; ++c)
                    at(r, c) = mpz_mod_canonical(at(r, c) + m1 * at(step + 1, c), R.pw[Wn]);
                for (int rr = 0; rr < n; ++rr)
                    at(rr, r) = mpz_mod_canonical(at(rr, r) + m1 * at(rr, step + 1), R.pw[Wn]);
            }
            mpz_class m2 = R.mul(R.divp(R.red(at(r, step + 1), W), v), ipu, Wn);
            if (m2 != 0) {
                for (int c = 0; c < n; ++c)
                    at(r, c) = mpz_mod_canonical(at(r, c) - m2 * at(step, c), R.pw[Wn]);
                for (int rr = 0; rr < n; ++rr)
                    at(rr, r) = mpz_mod_canonical(at(rr, r) - m2 * at(rr, step), R.pw[Wn]);
            }
        }
        W = Wn;
    }
    if (known <= 0) {
        EngineOut o;
        o.zero = true;
        o.zero_cert = v_acc;
        return detail::engine_to_valunit(o, p, target_k);
    }
    EngineOut o;
    o.val = v_acc;
    o.known = known;
    mpz_class u = R.red(unit, known);
    if (sign < 0) u = R.neg(u, known);
    o.unit = u;
    return detail::engine_to_valunit(o, p, target_k);
}

// ---------------------------------------------------------------------------
// Newton interpolation and Vandermonde conjugation.
// ---------------------------------------------------------------------------

// Monomial coefficients of the unique polynomial of degree < n through
// (xs[i], ys[i]) mod p^K; all divided differences divide by units.
inline std::vector<mpz_class> newton_interp(const std::vector<int64_t>& xs,
                                            const std::vector<mpz_class>& ys, int64_t p,
                                            int K) {
    const int n = static_cast<int>(xs.size());
    const mpz_class q = mpz_pow_pk(p, K);
    std::vector<mpz_class> dd = ys;
    for (auto& y : dd) y = mpz_mod_canonical(y, q);
    for (int lvl = 1; lvl < n; ++lvl)
        for (int i = n - 1; i >= lvl; --i) {
            mpz_class den = mpz_mod_canonical(mpz_class(static_cast<long>(xs[i] - xs[i - lvl])), q);
            dd[i] = mpz_mod_canonical((dd[i] - dd[i - 1]) * mpz_invert_checked(den, q), q);
        }
    std::vector<mpz_class> coef(n, 0);
    for (int i = n - 1; i >= 0; --i) {
        // coef <- coef*(X - xs[i]) + dd[i]
        std::vector<mpz_class> nw(n, 0);
        for (int d = 0; d + 1 < n; ++d) nw[d + 1] = coef[d];
        for (int d = 0; d < n; ++d)
            nw[d] = mpz_mod_canonical(nw[d] - xs[i] * coef[d] + (d == 0 ? dd[i] : mpz_class(0)),
                                      q);
        coef = std::move(nw);
    }
    return coef;
}

// B = V^{-1} M V where V = (nodes[i]^k): column k of B is the coefficient
// vector of the interpolating polynomial through (nodes[i], (M * nodes^k)_i).
inline ModMat conjugate_vandermonde(const ModMat& M, const std::vector<int64_t>& nodes) {
    const int n = M.n;
    if (static_cast<int>(nodes.size()) != n)
        throw Error("conjugate_vandermonde: node count mismatch");
    ModMat B(M.p, M.K, n);
    std::vector<mpz_class> powcol(n, 1), w(n);
    for (int k = 0; k < n; ++k) {
        if (k > 0)
            for (int j = 0; j < n; ++j)
                powcol[j] = mpz_mod_canonical(powcol[j] * nodes[j], M.q);
        for (int i = 0; i < n; ++i) {
            mpz_class s = 0;
            for (int j = 0; j < n; ++j) s += M.at(i, j) * powcol[j];
            w[i] = mpz_mod_canonical(s, M.q);
        }
        std::vector<mpz_class> coef = newton_interp(nodes, w, M.p, M.K);
        for (int r = 0; r < n; ++r) B.at(r, k) = coef[r];
    }
    return B;
}

// ---------------------------------------------------------------------------
// F_p helpers (plain Gaussian elimination; zero is a legitimate answer).
// ---------------------------------------------------------------------------

inline uint64_t det_fp(std::vector<uint64_t> a, int n, uint64_t p) {
    auto at = [&](int r, int c) -> uint64_t& { return a[static_cast<size_t>(r) * n + c]; };
    uint64_t det = 1;
    for (int k = 0; k < n; ++k) {
        int pr = -1;
        for (int r = k; r < n; ++r)
            if (at(r, k) % p != 0) {
                pr = r;
                break;
            }
        if (pr < 0) return 0;
        if (pr != k) {
            for (int c = k; c < n; ++c) std::swap(at(k, c), at(pr, c));
            det = (p - det) % p;
        }
        uint64_t piv = at(k, k) % p;
        det = mulmod64(det, piv, p);
        uint64_t ip = invmod64(piv, p);
        for (int r = k + 1; r < n; ++r) {
            uint64_t m = mulmod64(at(r, k) % p, ip, p);
            if (!m) continue;
            for (int c = k; c < n; ++c)
                at(r, c) = submod64(at(r, c) % p, mulmod64(m, at(k, c) % p, p), p);
        }
    }
    return det;
}

inline std::vector<uint64_t> fp_grid(const ModMat& M) {
    std::vector<uint64_t> g(M.a.size());
    for (size_t i = 0; i < g.size(); ++i)
        g[i] = mpz_get_ui(mpz_mod_canonical(M.a[i], mpz_class(static_cast<long>(M.p))).get_mpz_t());
    return g;
}

// Reduced row echelon form; returns rank and pivot column list.
inline int rref_fp(std::vector<uint64_t>& a, int n, uint64_t p, std::vector<int>& pivcols) {
    auto at = [&](int r, int c) -> uint64_t& { return a[static_cast<size_t>(r) * n + c]; };
    pivcols.clear();
    int rank = 0;
    for (int col = 0; col < n && rank < n; ++col) {
        int pr = -1;
        for (int r = rank; r < n; ++r)
            if (at(r, col) % p != 0) {
                pr = r;
                break;
            }
        if (pr < 0) continue;
        for (int c = 0; c < n; ++c) std::swap(at(rank, c), at(pr, c));
        uint64_t ip = invmod64(at(rank, col) % p, p);
        for (int c = 0; c < n; ++c) at(rank, c) = mulmod64(at(rank, c) % p, ip, p);
        for (int r = 0; r < n; ++r) {
            if (r == rank) continue;
            uint64_t m = at(r, col) % p;
            if (!m) continue;
            for (int c = 0; c < n; ++c)
                at(r, c) = submod64(at(r, c) % p, mulmod64(m, at(rank, c), p), p);
        }
        pivcols.push_back(col);
        ++rank;
    }
    return rank;
}

// A nonzero right-kernel vector of a rank-(n-1) matrix over F_p; empty when
// the matrix is invertible.
inline std::vector<uint64_t> kernel_vec_fp(std::vector<uint64_t> a, int n, uint64_t p) {
    std::vector<int> pivcols;
    int rank = rref_fp(a, n, p, pivcols);
    if (rank == n) return {};
    int free_col = 0;
    {
        std::vector<bool> is_piv(n, false);
        for (int c : pivcols) is_piv[c] = true;
        while (is_piv[free_col]) ++free_col;
    }
    std::vector<uint64_t> x(n, 0);
    x[free_col] = 1;
    for (int r = 0; r < rank; ++r) {
        uint64_t coef = a[static_cast<size_t>(r) * n + free_col] % p;
        x[pivcols[r]] = (p - coef) % p;
    }
    return x;
}

// Inverse over F_p by row reduction of [A | I]; throws NonUnit when singular.
inline std::vector<uint64_t> inv_fp(const std::vector<uint64_t>& a, int n, uint64_t p) {
    std::vector<uint64_t> w(static_cast<size_t>(n) * 2 * n, 0);
    auto at = [&](int r, int c) -> uint64_t& { return w[static_cast<size_t>(r) * 2 * n + c]; };
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) at(i, j) = a[static_cast<size_t>(i) * n + j] % p;
        at(i, n + i) = 1;
    }
    for (int c = 0; c < n; ++c) {
        int pr = -1;
        for (int r = c; r < n; ++r)
            if (at(r, c)) {
                pr = r;
                break;
            }
        if (pr < 0) throw NonUnit("inv_fp: singular matrix");
        for (int j = 0; j < 2 * n; ++j) std::swap(at(c, j), at(pr, j));
        uint64_t ic = invmod64(at(c, c), p);
        for (int j = 0; j < 2 * n; ++j) at(c, j) = mulmod64(at(c, j), ic, p);
        for (int r = 0; r < n; ++r) {
            if (r == c || !at(r, c)) continue;
            uint64_t m = at(r, c);
            for (int j = 0; j < 2 * n; ++j)
                at(r, j) = submod64(at(r, j), mulmod64(m, at(c, j), p), p);
        }
    }
    std::vector<uint64_t> out(static_cast<size_t>(n) * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out[static_cast<size_t>(i) * n + j] = at(i, n + j);
    return out;
}

inline std::vector<uint64_t> transpose_grid(const std::vector<uint64_t>& a, int n) {
    std::vector<uint64_t> t(a.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) t[static_cast<size_t>(j) * n + i] = a[static_cast<size_t>(i) * n + j];
    return t;
}

// det of the minor deleting one row and one column.
inline uint64_t minor_det_fp(const std::vector<uint64_t>& a, int n, uint64_t p, int del_row,
                             int del_col) {
    std::vector<uint64_t> b;
    b.reserve(static_cast<size_t>(n - 1) * (n - 1));
    for (int i = 0; i < n; ++i) {
        if (i == del_row) continue;
        for (int j = 0; j < n; ++j) {
            if (j == del_col) continue;
            b.push_back(a[static_cast<size_t>(i) * n + j]);
        }
    }
    return det_fp(std::move(b), n - 1, p);
}

// ---------------------------------------------------------------------------
// Characteristic pencil over F_p and the permanent transfer.
// ---------------------------------------------------------------------------

// Coefficients of det(I + tM) mod p as a polynomial in t (degree <= n < p),
// by evaluation at t = 0..p-1 and Newton interpolation over F_p.
inline std::vector<uint64_t> det_pencil_poly(const ModMat& M) {
    const uint64_t p = static_cast<uint64_t>(M.p);
    const int n = M.n;
    if (n >= static_cast<int>(p))
        throw Error("det_pencil_poly: degree must be below the number of sample points");
    std::vector<uint64_t> base = fp_grid(M);
    std::vector<uint64_t> ys(p);
    std::vector<uint64_t> work(base.size());
    for (uint64_t t = 0; t < p; ++t) {
        for (size_t i = 0; i < base.size(); ++i) work[i] = mulmod64(base[i], t, p);
        for (int i = 0; i < n; ++i)
            work[static_cast<size_t>(i) * n + i] = addmod64(work[static_cast<size_t>(i) * n + i], 1, p);
        ys[t] = det_fp(work, n, p);
    }
    // divided differences over the nodes 0..p-1
    std::vector<uint64_t> dd = ys;
    for (uint64_t lvl = 1; lvl < p; ++lvl)
        for (uint64_t i = p - 1; i >= lvl; --i) {
            uint64_t den = invmod64(lvl % p, p);  // xs[i]-xs[i-lvl] = lvl
            dd[i] = mulmod64(submod64(dd[i], dd[i - 1], p), den, p);
            if (i == lvl) break;
        }
    std::vector<uint64_t> coef(p, 0);
    for (int64_t i = static_cast<int64_t>(p) - 1; i >= 0; --i) {
        std::vector<uint64_t> nw(p, 0);
        for (uint64_t d = 0; d + 1 < p; ++d) nw[d + 1] = coef[d];
        for (uint64_t d = 0; d < p; ++d) {
            uint64_t s = submod64(nw[d], mulmod64(static_cast<uint64_t>(i), coef[d], p), p);
            if (d == 0) s = addmod64(s, dd[static_cast<size_t>(i)], p);
            nw[d] = s;
        }
        coef = std::move(nw);
    }
    return coef;
}

// Determinant over F_p[X]/(X^2+aX+b) by Gaussian elimination.
inline QuadExtElem det_ext(std::vector<QuadExtElem> a, int n) {
    auto at = [&](int r, int c) -> QuadExtElem& { return a[static_cast<size_t>(r) * n + c]; };
    if (n == 0) throw Error("det_ext: empty matrix");
    QuadExtElem det = at(0, 0).scalar(1);
    bool neg = false;
    for (int k = 0; k < n; ++k) {
        int pr = -1;
        for (int r = k; r < n; ++r)
            if (!at(r, k).is_zero()) {
                pr = r;
                break;
            }
        if (pr < 0) return at(0, 0).scalar(0);
        if (pr != k) {
            for (int c = k; c < n; ++c) std::swap(at(k, c), at(pr, c));
            neg = !neg;
        }
        det = det * at(k, k);
        QuadExtElem ip = at(k, k).inv();
        for (int r = k + 1; r < n; ++r) {
            QuadExtElem m = at(r, k) * ip;
            if (m.is_zero()) continue;
            for (int c = k; c < n; ++c) at(r, c) = at(r, c) - m * at(k, c);
        }
    }
    return neg ? -det : det;
}

// A square root of -1: an element alpha with alpha^2 = -1, living in F_p when
// p == 1 (mod 4) and in F_p[X]/(X^2+1) otherwise.
inline uint64_t sqrt_minus_one_fp(uint64_t p) {
    if (p % 4 != 1) throw BadCongruenceClass("sqrt_minus_one_fp: need p == 1 (mod 4)");
    for (uint64_t x = 2; x < p; ++x) {
        if (legendre64(static_cast<int64_t>(x), static_cast<int64_t>(p)) == -1) {
            uint64_t alpha = powmod64(x, (p - 1) / 4, p);
            if (mulmod64(alpha, alpha, p) != p - 1)
                throw Error("sqrt_minus_one_fp: construction failed");
            return alpha;
        }
    }
    throw Error("sqrt_minus_one_fp: no nonresidue found");
}

// per(I + uA) for skew A over F_p via the substitution per(I+uA) = det(I+alpha uA),
// alpha^2 = -1.  For p == 3 (mod 4) the determinant is taken in F_p[X]/(X^2+1)
// and asserted to land in the base field.
inline uint64_t per_pencil_transfer(const ModMat& A, uint64_t u) {
    const uint64_t p = static_cast<uint64_t>(A.p);
    const int n = A.n;
    std::vector<uint64_t> g = fp_grid(A);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < i; ++j)
            if (g[static_cast<size_t>(i) * n + j] !=
                (p - g[static_cast<size_t>(j) * n + i] % p) % p)
                throw Error("per_pencil_transfer: matrix is not skew mod p");
    if (p % 4 == 1) {
        uint64_t au = mulmod64(sqrt_minus_one_fp(p), u % p, p);
        std::vector<uint64_t> w(g.size());
        for (size_t i = 0; i < g.size(); ++i) w[i] = mulmod64(g[i], au, p);
        for (int i = 0; i < n; ++i)
            w[static_cast<size_t>(i) * n + i] = addmod64(w[static_cast<size_t>(i) * n + i], 1, p);
        return det_fp(std::move(w), n, p);
    }
    // alpha = class of X in F_p[X]/(X^2+1)
    std::vector<QuadExtElem> w;
    w.reserve(g.size());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            int64_t c1 = static_cast<int64_t>(
                mulmod64(g[static_cast<size_t>(i) * n + j], u % p, p));
            w.push_back(QuadExtElem(static_cast<int64_t>(p), 0, 1, i == j ? 1 : 0, c1));
        }
    QuadExtElem d = det_ext(std::move(w), n);
    if (!d.in_base_field())
        throw Error("per_pencil_transfer: determinant left the base field");
    return static_cast<uint64_t>(d.c0());
}

// ---------------------------------------------------------------------------
// Random matrices for oracle trials.
// ---------------------------------------------------------------------------
inline ModMat random_mod_mat(std::mt19937_64& rng, int64_t p, int K, int n) {
    ModMat m(p, K, n);
    const int bits = static_cast<int>(mpz_sizeinbase(m.q.get_mpz_t(), 2));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            // enough 32-bit draws to cover the modulus
            mpz_class v = 0;
            for (int b = 0; b <= bits; b += 32)
                v = (v << 32) + static_cast<unsigned long>(rng() & 0xffffffffULL);
            m.at(i, j) = mpz_mod_canonical(v, m.q);
        }
    return m;
}

inline ModMat random_skew_mat(std::mt19937_64& rng, int64_t p, int K, int n) {
    ModMat m = random_mod_mat(rng, p, K, n);
    for (int i = 0; i < n; ++i) {
        m.at(i, i) = 0;
        for (int j = 0; j < i; ++j) m.at(j, i) = mpz_mod_canonical(-m.at(i, j), m.q);
    }
    return m;
}

inline ModMat mat_mul(const ModMat& A, const ModMat& B) {
    ModMat C(A.p, A.K, A.n);
    for (int i = 0; i < A.n; ++i)
        for (int k = 0; k < A.n; ++k) {
            if (A.at(i, k) == 0) continue;
            for (int j = 0; j < A.n; ++j)
                C.at(i, j) = mpz_mod_canonical(C.at(i, j) + A.at(i, k) * B.at(k, j), A.q);
        }
    return C;
}

inline mpz_class mat_trace(const ModMat& A) {
    mpz_class t = 0;
    for (int i = 0; i < A.n; ++i) t += A.at(i, i);
    return mpz_mod_canonical(t, A.q);
}

}  // namespace detper
