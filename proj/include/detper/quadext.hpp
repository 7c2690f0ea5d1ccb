#pragma once

// Arithmetic in the quadratic extension F_p[X]/(X^2 + aX + b) for a monic
// irreducible quadratic.  lambda denotes the class of X, mu = -a - lambda its
// conjugate; frobenius(x) = x^p is conjugation.

#include <cstdint>
#include <string>
#include <utility>

#include "detper/errors.hpp"
#include "detper/fp64.hpp"

namespace detper {

class QuadExtElem {
  public:
    QuadExtElem() = default;

    // Element c0 + c1*lambda of F_p[X]/(X^2+aX+b); verifies irreducibility.
    QuadExtElem(int64_t p, int64_t a, int64_t b, int64_t c0, int64_t c1)
        : p_(p), a_(norm_coef(a, p)), b_(norm_coef(b, p)), c0_(norm_coef(c0, p)),
          c1_(norm_coef(c1, p)) {
        int64_t disc = norm_coef(a_ * a_ - 4 * b_, p);
        if (legendre64(disc, p) != -1)
            throw Error("QuadExtElem: modulus X^2+aX+b is not irreducible mod p");
    }

    int64_t p() const { return p_; }
    int64_t mod_a() const { return a_; }
    int64_t mod_b() const { return b_; }
    int64_t c0() const { return c0_; }
    int64_t c1() const { return c1_; }
    bool in_base_field() const { return c1_ == 0; }
    bool is_zero() const { return c0_ == 0 && c1_ == 0; }
    bool is_one() const { return c0_ == 1 && c1_ == 0; }

    bool operator==(const QuadExtElem& o) const {
        return p_ == o.p_ && a_ == o.a_ && b_ == o.b_ && c0_ == o.c0_ && c1_ == o.c1_;
    }

    QuadExtElem operator+(const QuadExtElem& o) const {
        check_same(o);
        return same(c0_ + o.c0_, c1_ + o.c1_);
    }
    QuadExtElem operator-(const QuadExtElem& o) const {
        check_same(o);
        return same(c0_ - o.c0_, c1_ - o.c1_);
    }
    QuadExtElem operator-() const { return same(-c0_, -c1_); }

    // lambda^2 = -a*lambda - b, so the cross term c1*d1 folds back with
    // coefficients (-b, -a).
    QuadExtElem operator*(const QuadExtElem& o) const {
        check_same(o);
        int64_t t = mulp(c1_, o.c1_);
        int64_t r0 = norm_coef(mulp(c0_, o.c0_) - mulp(b_, t), p_);
        int64_t r1 = norm_coef(mulp(c0_, o.c1_) + mulp(c1_, o.c0_) - mulp(a_, t), p_);
        return same(r0, r1);
    }

    QuadExtElem pow(uint64_t e) const {
        QuadExtElem r = same(1, 0), base = *this;
        while (e) {
            if (e & 1) r = r * base;
            base = base * base;
            e >>= 1;
        }
        return r;
    }

    // x^p, computed as the conjugate c0 - a*c1 - c1*lambda.
    QuadExtElem frobenius() const { return same(c0_ - mulp(a_, c1_), -c1_); }

    // Norm into F_p: x * frobenius(x) = c0^2 - a c0 c1 + b c1^2.
    int64_t norm() const {
        return norm_coef(mulp(c0_, c0_) - mulp(a_, mulp(c0_, c1_)) + mulp(b_, mulp(c1_, c1_)),
                         p_);
    }

    QuadExtElem inv() const {
        if (is_zero()) throw DivisionByZero("QuadExtElem::inv: zero element");
        int64_t n_inv = static_cast<int64_t>(
            invmod64(static_cast<uint64_t>(norm()), static_cast<uint64_t>(p_)));
        QuadExtElem c = frobenius();
        return same(mulp(c.c0_, n_inv), mulp(c.c1_, n_inv));
    }

    std::string str() const {
        return "(" + std::to_string(c0_) + " + " + std::to_string(c1_) + "*L)";
    }

    static QuadExtElem lambda(int64_t p, int64_t a, int64_t b) {
        return QuadExtElem(p, a, b, 0, 1);
    }
    static QuadExtElem mu(int64_t p, int64_t a, int64_t b) {
        return QuadExtElem(p, a, b, 0, 1).frobenius();
    }
    QuadExtElem scalar(int64_t v) const { return same(v, 0); }

  private:
    static int64_t norm_coef(int64_t v, int64_t p) {
        int64_t r = v % p;
        return r < 0 ? r + p : r;
    }
    int64_t mulp(int64_t x, int64_t y) const {
        return static_cast<int64_t>(
            mulmod64(static_cast<uint64_t>(norm_coef(x, p_)),
                     static_cast<uint64_t>(norm_coef(y, p_)), static_cast<uint64_t>(p_)));
    }
    void check_same(const QuadExtElem& o) const {
        if (p_ != o.p_ || a_ != o.a_ || b_ != o.b_)
            throw Error("QuadExtElem: mixed moduli in arithmetic");
    }
    QuadExtElem same(int64_t r0, int64_t r1) const {
        QuadExtElem e;
        e.p_ = p_;
        e.a_ = a_;
        e.b_ = b_;
        e.c0_ = norm_coef(r0, p_);
        e.c1_ = norm_coef(r1, p_);
        return e;
    }

    int64_t p_ = 0, a_ = 0, b_ = 0, c0_ = 0, c1_ = 0;
};

// Exact multiplicative order of a norm-one element; divides p + 1.
// Factors p + 1 by trial division and peels prime factors.
inline uint64_t norm_one_order(const QuadExtElem& x) {
    int64_t p = x.p();
    if (p >= (int64_t{1} << 20))
        throw FactorizationBudgetExceeded("norm_one_order: prime beyond desk-scale cap");
    if (!x.pow(static_cast<uint64_t>(p + 1)).is_one())
        throw NotNormOne("norm_one_order: element is not in the norm-one subgroup");
    uint64_t H = static_cast<uint64_t>(p + 1);
    for (const auto& [q, e] : trial_factor(H)) {
        for (int i = 0; i < e; ++i) {
            if (x.pow(H / q).is_one())
                H /= q;
            else
                break;
        }
    }
    return H;
}

}  // namespace detper
