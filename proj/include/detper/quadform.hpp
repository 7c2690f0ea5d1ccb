#pragma once

// Analysis of the quadratic form x^2 + axy + by^2 over F_p via its splitting
// field F_p[X]/(X^2+aX+b): the norm-one ratio R = lambda/mu and its order H,
// the half-power eta = lambda^((p+1)/2) when H is odd, the closed-form root
// product prod_{m=1}^{p-1} (lambda^m + mu^m), and the resulting value
// prediction for the inverse-form determinant.

#include <cstdint>
#include <optional>
#include <string>

#include "detper/errors.hpp"
#include "detper/fp64.hpp"
#include "detper/kernels.hpp"
#include "detper/linalg.hpp"
#include "detper/quadext.hpp"

namespace detper {

struct QuadAnalysis {
    int64_t p = 0, a = 0, b = 0;
    uint64_t H = 0;      // order of R = lambda/mu in the norm-one subgroup
    uint64_t kappa = 0;  // (p+1)/H
    bool H_odd = false;
    int64_t eta = -1;    // lambda^((p+1)/2) in F_p, only when H is odd
};

// Requires X^2+aX+b irreducible mod p (the QuadExtElem constructor verifies).
inline QuadAnalysis quad_analyze(int64_t p, int64_t a, int64_t b) {
    QuadExtElem L = QuadExtElem::lambda(p, a, b);
    QuadExtElem R = L * L.frobenius().inv();
    QuadAnalysis out;
    out.p = p;
    out.a = ((a % p) + p) % p;
    out.b = ((b % p) + p) % p;
    out.H = norm_one_order(R);
    out.kappa = static_cast<uint64_t>(p + 1) / out.H;
    out.H_odd = (out.H % 2 == 1);
    if (out.H_odd) {
        QuadExtElem eta = L.pow(static_cast<uint64_t>((p + 1) / 2));
        if (!eta.in_base_field())
            throw Error("quad_analyze: eta escaped the base field despite odd H");
        if (mulmod64(static_cast<uint64_t>(eta.c0()), static_cast<uint64_t>(eta.c0()),
                     static_cast<uint64_t>(p)) != static_cast<uint64_t>(out.b))
            throw Error("quad_analyze: eta^2 != b");
        out.eta = eta.c0();
    }
    return out;
}

// prod_{m=1}^{p-1} (lambda^m + mu^m) as a base-field value; equals the
// determinant of the (p-1)x(p-1) inverse-form matrix mod p.
inline uint64_t dpab_root_product(int64_t p, int64_t a, int64_t b) {
    QuadExtElem L = QuadExtElem::lambda(p, a, b);
    QuadExtElem M = L.frobenius();
    QuadExtElem lm = L.scalar(1), mm = L.scalar(1), prod = L.scalar(1);
    for (int64_t m = 1; m < p; ++m) {
        lm = lm * L;
        mm = mm * M;
        prod = prod * (lm + mm);
    }
    if (!prod.in_base_field())
        throw Error("dpab_root_product: product escaped the base field");
    return static_cast<uint64_t>(prod.c0());
}

// Closed-form prediction for the root product:
//   H even           -> 0,
//   H odd and a != 0 -> -2^(kappa-1) * a^{-1} * eta mod p,
//   H odd and a == 0 -> no closed form (nullopt).
inline std::optional<uint64_t> dp_predict(int64_t p, int64_t a, int64_t b) {
    QuadAnalysis an = quad_analyze(p, a, b);
    if (!an.H_odd) return uint64_t{0};
    if (an.a % p == 0) return std::nullopt;
    uint64_t up = static_cast<uint64_t>(p);
    uint64_t v = mulmod64(powmod64(2, an.kappa - 1, up),
                          mulmod64(invmod64(static_cast<uint64_t>(an.a), up),
                                   static_cast<uint64_t>(an.eta), up),
                          up);
    return (up - v) % up;
}

// T_m = sum over x in F_p^* of x^m / (x^2+ax+b) mod p.
inline uint64_t tm_value(int64_t p, int64_t a, int64_t b, int64_t m) {
    uint64_t up = static_cast<uint64_t>(p);
    uint64_t s = 0;
    for (int64_t x = 1; x < p; ++x) {
        int64_t qv = ((x * x + a * x + b) % p + p) % p;  // irreducible form: never 0
        uint64_t term = mulmod64(powmod64(static_cast<uint64_t>(x), static_cast<uint64_t>(m), up),
                                 invmod64(static_cast<uint64_t>(qv), up), up);
        s = addmod64(s, term, up);
    }
    return s;
}

// Diagnostic bundle for the (6,6) form at primes p == 5, 19 (mod 24).
struct SixSixAnalysis {
    int64_t p = 0;
    int cls24 = 0;         // p mod 24
    QuadAnalysis an;       // of x^2+6xy+6y^2
    uint64_t root_product = 0;
    int legendre_rp = 0;   // legendre(root_product, p)
    bool claim_holds = false;  // class 5: nonzero; class 19: legendre != -1
};

inline SixSixAnalysis six_six_analysis(int64_t p) {
    int cls = static_cast<int>(p % 24);
    if (cls != 5 && cls != 19)
        throw BadCongruenceClass("six_six_analysis: need p == 5 or 19 (mod 24)");
    SixSixAnalysis out;
    out.p = p;
    out.cls24 = cls;
    out.an = quad_analyze(p, 6, 6);
    out.root_product = dpab_root_product(p, 6, 6);
    out.legendre_rp = legendre64(static_cast<int64_t>(out.root_product), p);
    out.claim_holds = (cls == 5) ? (out.root_product != 0) : (out.legendre_rp != -1);
    return out;
}

}  // namespace detper
