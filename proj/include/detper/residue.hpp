#pragma once

// Exact residue arithmetic modulo p^K with canonical representatives in
// [0, p^K), valuation/unit decomposition, Legendre symbols, and the classical
// factorial-derived quantities used by the congruence checks.

#include <gmpxx.h>

#include <cstdint>
#include <limits>
#include <string>

#include "detper/errors.hpp"
#include "detper/fp64.hpp"

namespace detper {

inline mpz_class mpz_pow_pk(int64_t p, int k) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
    return r;
}

inline mpz_class mpz_mod_canonical(const mpz_class& x, const mpz_class& m) {
    mpz_class r;
    mpz_mod(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());  // mpz_mod is always non-negative
    return r;
}

// Inverse of x modulo m; throws NonUnit when gcd(x, m) != 1.
inline mpz_class mpz_invert_checked(const mpz_class& x, const mpz_class& m) {
    mpz_class r;
    if (mpz_invert(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t()) == 0)
        throw NonUnit("mod_inv: residue is not a unit");
    return r;
}

// Euler-criterion Legendre symbol for arbitrary-size a; 0 when p | a.
inline int legendre(const mpz_class& a, int64_t p) {
    mpz_class pm(static_cast<long>(p));
    mpz_class r = mpz_mod_canonical(a, pm);
    if (r == 0) return 0;
    mpz_class e((p - 1) / 2), out;
    mpz_powm(out.get_mpz_t(), r.get_mpz_t(), e.get_mpz_t(), pm.get_mpz_t());
    return out == 1 ? 1 : -1;
}

// chi_p = legendre(-1, p) = (-1)^((p-1)/2).
inline int chi_p(int64_t p) { return (p % 4 == 1) ? 1 : -1; }

// An integer residue mod p^K carrying its prime and precision exponent.
class PadicResidue {
  public:
    PadicResidue() = default;
    PadicResidue(mpz_class v, int64_t p, int K) : p_(p), K_(K), q_(mpz_pow_pk(p, K)) {
        value_ = mpz_mod_canonical(v, q_);
    }

    int64_t p() const { return p_; }
    int K() const { return K_; }
    const mpz_class& value() const { return value_; }
    const mpz_class& modulus() const { return q_; }

    PadicResidue operator+(const PadicResidue& o) const {
        check_same(o);
        return with_value(value_ + o.value_);
    }
    PadicResidue operator-(const PadicResidue& o) const {
        check_same(o);
        return with_value(value_ - o.value_);
    }
    PadicResidue operator*(const PadicResidue& o) const {
        check_same(o);
        return with_value(value_ * o.value_);
    }
    PadicResidue operator-() const { return with_value(-value_); }
    bool operator==(const PadicResidue& o) const {
        return p_ == o.p_ && K_ == o.K_ && value_ == o.value_;
    }

    PadicResidue inv() const { return with_value(mpz_invert_checked(value_, q_)); }

    PadicResidue pow(unsigned long e) const {
        mpz_class ex(e), out;
        mpz_powm(out.get_mpz_t(), value_.get_mpz_t(), ex.get_mpz_t(), q_.get_mpz_t());
        return with_value(out);
    }

    // The same residue read at a coarser precision k <= K.
    PadicResidue reduce(int k) const {
        if (k > K_) throw PrecisionUnderflow("reduce: cannot increase precision");
        return PadicResidue(value_, p_, k);
    }

  private:
    void check_same(const PadicResidue& o) const {
        if (p_ != o.p_ || K_ != o.K_)
            throw Error("PadicResidue: mixed moduli in arithmetic");
    }
    PadicResidue with_value(const mpz_class& v) const {
        PadicResidue r;
        r.p_ = p_;
        r.K_ = K_;
        r.q_ = q_;
        r.value_ = mpz_mod_canonical(v, q_);
        return r;
    }

    int64_t p_ = 0;
    int K_ = 0;
    mpz_class q_;
    mpz_class value_;
};

inline PadicResidue mod_inv(const PadicResidue& x) { return x.inv(); }

// Determinant-style result p^valuation * unit with explicit precision
// accounting.  Three shapes arise:
//   UNIT       nonzero up to the certified precision: gcd(unit, p) = 1 and the
//              unit digits are trusted modulo p^known_to (known_to >= 1);
//   ZERO_CERT  congruent to 0 modulo p^valuation, nothing known beyond;
//   EXACT_ZERO the exact integer zero ("infinite valuation").
struct ValUnit {
    enum class Kind { UNIT, ZERO_CERT, EXACT_ZERO };

    int64_t p = 0;
    Kind kind = Kind::UNIT;
    long valuation = 0;   // UNIT: v_p; ZERO_CERT: certified exponent
    mpz_class unit = 0;   // UNIT only; canonical in [0, p^known_to)
    int known_to = 0;     // UNIT only

    bool infinite() const { return kind == Kind::EXACT_ZERO; }

    // True when the residue modulo p^k is determined by this result.
    bool resolves(int k) const {
        switch (kind) {
            case Kind::EXACT_ZERO: return true;
            case Kind::ZERO_CERT: return k <= valuation;
            case Kind::UNIT: return valuation >= k || valuation + known_to >= k;
        }
        return false;
    }

    // p^valuation * unit mod p^k; throws PrecisionUnderflow when not resolved.
    mpz_class residue_mod(int k) const {
        if (!resolves(k))
            throw PrecisionUnderflow("residue_mod: requested digits beyond certified precision");
        if (kind != Kind::UNIT || valuation >= k) return 0;
        mpz_class q = mpz_pow_pk(p, k);
        return mpz_mod_canonical(mpz_pow_pk(p, valuation) * unit, q);
    }

    std::string describe() const {
        switch (kind) {
            case Kind::EXACT_ZERO: return "0 (exact)";
            case Kind::ZERO_CERT:
                return "0 mod p^" + std::to_string(valuation);
            case Kind::UNIT:
                return "p^" + std::to_string(valuation) + " * " + unit.get_str() +
                       " (unit mod p^" + std::to_string(known_to) + ")";
        }
        return "";
    }

    static ValUnit exact_zero(int64_t p) {
        ValUnit r;
        r.p = p;
        r.kind = Kind::EXACT_ZERO;
        return r;
    }
    static ValUnit zero_cert(int64_t p, long exponent) {
        ValUnit r;
        r.p = p;
        r.kind = Kind::ZERO_CERT;
        r.valuation = exponent;
        return r;
    }
    static ValUnit make_unit(int64_t p, long val, mpz_class u, int known) {
        ValUnit r;
        r.p = p;
        r.valuation = val;
        r.known_to = known;
        r.unit = mpz_mod_canonical(u, mpz_pow_pk(p, known));
        return r;
    }
};

// Decompose x = p^v * u.  The exact zero maps to infinite valuation.
inline ValUnit val_unit_split(const PadicResidue& x) {
    if (x.value() == 0) return ValUnit::exact_zero(x.p());
    mpz_class v = x.value();
    long val = 0;
    while (mpz_divisible_ui_p(v.get_mpz_t(), static_cast<unsigned long>(x.p()))) {
        mpz_divexact_ui(v.get_mpz_t(), v.get_mpz_t(), static_cast<unsigned long>(x.p()));
        ++val;
    }
    return ValUnit::make_unit(x.p(), val, v, x.K() - static_cast<int>(val));
}

// Wilson quotient W_p = ((p-1)! + 1)/p reduced mod p.  As a self-test this
// also asserts (p-2)! == 1 + p(1 - W_p) mod p^2 before returning.
inline int64_t wilson_quotient(int64_t p) {
    mpz_class fac;
    mpz_fac_ui(fac.get_mpz_t(), static_cast<unsigned long>(p - 1));
    mpz_class w = (fac + 1) / p;
    mpz_class wp = mpz_mod_canonical(w, mpz_class(static_cast<long>(p)));

    mpz_class p2 = mpz_pow_pk(p, 2);
    mpz_class fac2;
    mpz_fac_ui(fac2.get_mpz_t(), static_cast<unsigned long>(p - 2));
    mpz_class lhs = mpz_mod_canonical(fac2, p2);
    mpz_class rhs = mpz_mod_canonical(1 + p * (1 - wp), p2);
    if (lhs != rhs) throw Error("wilson_quotient: factorial self-check failed");
    return wp.get_si();
}

// ((p-2)!!)^2 mod p^K.
inline PadicResidue double_factorial_sq(int64_t p, int K) {
    mpz_class q = mpz_pow_pk(p, K);
    mpz_class acc = 1;
    for (int64_t t = p - 2; t >= 1; t -= 2) {
        acc *= t;
        acc = mpz_mod_canonical(acc, q);
    }
    return PadicResidue(acc * acc, p, K);
}

// (-1)^h * binom(p-1, h) == 4^(p-1) mod p^3 with h = (p-1)/2.
inline bool morley_holds(int64_t p) {
    int64_t h = (p - 1) / 2;
    mpz_class q = mpz_pow_pk(p, 3);
    mpz_class binom;
    mpz_bin_uiui(binom.get_mpz_t(), static_cast<unsigned long>(p - 1),
                 static_cast<unsigned long>(h));
    if (h % 2 == 1) binom = -binom;
    mpz_class four(4), e(static_cast<long>(p - 1)), rhs;
    mpz_powm(rhs.get_mpz_t(), four.get_mpz_t(), e.get_mpz_t(), q.get_mpz_t());
    return mpz_mod_canonical(binom, q) == rhs;
}

}  // namespace detper
