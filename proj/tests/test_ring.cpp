// Residue arithmetic, valuation splitting, and factorial-derived quantities.

#include <catch2/catch_amalgamated.hpp>

#include "detper/errors.hpp"
#include "detper/fp64.hpp"
#include "detper/residue.hpp"

using namespace detper;

TEST_CASE("64-bit modular helpers") {
    CHECK(mulmod64(0xffffffffULL, 0xffffffffULL, 1000003) ==
          (0xffffffffULL % 1000003) * (0xffffffffULL % 1000003) % 1000003);
    CHECK(powmod64(2, 10, 1000) == 24);
    CHECK(invmod64(3, 7) == 5);
    CHECK(mulmod64(invmod64(123456789, (1ULL << 61) - 1), 123456789, (1ULL << 61) - 1) == 1);
    CHECK_THROWS_AS(invmod64(6, 9), NonUnit);
    CHECK(legendre64(2, 7) == 1);
    CHECK(legendre64(6, 29) == 1);
    CHECK(legendre64(3, 7) == -1);
    CHECK(legendre64(14, 7) == 0);
}

TEST_CASE("primality and factoring") {
    CHECK(is_prime_u64(2));
    CHECK(is_prime_u64(97));
    CHECK_FALSE(is_prime_u64(1));
    CHECK_FALSE(is_prime_u64(91));
    auto f = trial_factor(360);
    REQUIRE(f.size() == 3);
    CHECK(f[0] == std::pair<uint64_t, int>{2, 3});
    CHECK(f[1] == std::pair<uint64_t, int>{3, 2});
    CHECK(f[2] == std::pair<uint64_t, int>{5, 1});
    CHECK_THROWS_AS(trial_factor(uint64_t{1} << 41), FactorizationBudgetExceeded);
}

TEST_CASE("u63 capacity check") {
    CHECK(fits_u63(5, 6));
    CHECK(fits_u63(3, 39));
    CHECK_FALSE(fits_u63(3, 40));
    CHECK_FALSE(fits_u63(1000003, 4));
}

TEST_CASE("padic residue arithmetic") {
    PadicResidue x(2, 5, 2);
    CHECK(x.inv().value() == 13);  // 2 * 13 = 26 == 1 mod 25
    CHECK(PadicResidue(4, 7, 1).inv().value() == 2);
    CHECK_THROWS_AS(PadicResidue(5, 5, 2).inv(), NonUnit);

    PadicResidue a(17, 5, 3), b(9, 5, 3);
    CHECK((a + b).value() == 26);
    CHECK((a - b).value() == 8);
    CHECK((a * b).value() == 153 % 125);
    CHECK((-a).value() == 125 - 17);
    CHECK(a.pow(3).value() == (17 * 17 * 17) % 125);
    CHECK(a.reduce(1).value() == 2);
    CHECK_THROWS_AS(a.reduce(4), PrecisionUnderflow);
    CHECK_THROWS_AS(a + PadicResidue(1, 5, 2), Error);
    CHECK_THROWS_AS(a + PadicResidue(1, 7, 3), Error);
}

TEST_CASE("valuation-unit splitting") {
    ValUnit v = val_unit_split(PadicResidue(50, 5, 4));
    REQUIRE(v.kind == ValUnit::Kind::UNIT);
    CHECK(v.valuation == 2);
    CHECK(v.unit == 2);
    CHECK(v.known_to == 2);

    ValUnit z = val_unit_split(PadicResidue(0, 5, 4));
    CHECK(z.kind == ValUnit::Kind::EXACT_ZERO);
    CHECK(z.infinite());
    CHECK(z.resolves(100));
    CHECK(z.residue_mod(3) == 0);

    ValUnit u = val_unit_split(PadicResidue(3, 5, 4));
    REQUIRE(u.kind == ValUnit::Kind::UNIT);
    CHECK(u.valuation == 0);
    CHECK(u.unit == 3);
    CHECK(u.known_to == 4);
    CHECK(u.residue_mod(2) == 3);
}

TEST_CASE("resolution semantics") {
    ValUnit u = ValUnit::make_unit(5, 2, 7, 2);  // 25 * 7, digits known mod 5^2
    CHECK(u.resolves(4));
    CHECK_FALSE(u.resolves(5));
    CHECK(u.residue_mod(3) == 50);
    CHECK(u.residue_mod(2) == 0);  // below the valuation everything is 0
    CHECK_THROWS_AS(u.residue_mod(5), PrecisionUnderflow);

    ValUnit zc = ValUnit::zero_cert(5, 3);
    CHECK(zc.resolves(3));
    CHECK_FALSE(zc.resolves(4));
    CHECK(zc.residue_mod(3) == 0);
    CHECK_THROWS_AS(zc.residue_mod(4), PrecisionUnderflow);
}

TEST_CASE("wilson quotients") {
    CHECK(wilson_quotient(5) == 0);
    CHECK(wilson_quotient(7) == 5);
    CHECK(wilson_quotient(13) == 0);
    CHECK(wilson_quotient(3) == 1);  // (2! + 1)/3 = 1
}

TEST_CASE("double factorial squares") {
    CHECK(double_factorial_sq(5, 2).value() == 9);    // (3!!)^2 = 9 mod 25
    CHECK(double_factorial_sq(7, 2).value() == 29);   // (5!!)^2 = 225 mod 49
}

TEST_CASE("binomial cube congruence") {
    // (-1)^h binom(p-1,h) == 4^{p-1} mod p^3; at p=7 both sides are 323 mod 343
    CHECK(morley_holds(7));
    for (int64_t p : {5, 11, 13, 17, 19, 23}) CHECK(morley_holds(p));
    CHECK_FALSE(morley_holds(3));  // classical congruence starts at p = 5
}

TEST_CASE("chi character") {
    CHECK(chi_p(5) == 1);
    CHECK(chi_p(13) == 1);
    CHECK(chi_p(7) == -1);
    CHECK(chi_p(11) == -1);
}

TEST_CASE("harmonic sums") {
    for (int64_t p : {3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67,
                      71, 73, 79, 83, 89, 97}) {
        const uint64_t up = static_cast<uint64_t>(p);
        // partial harmonic sum 1 + 1/2 + ... + 1/(p-2) == 1 mod p
        uint64_t s = 0;
        for (uint64_t k = 1; k + 1 < up; ++k) s = addmod64(s, invmod64(k, up), up);
        CHECK(s == 1 % up);
        // shifted harmonic sum over j != i: sum 1/(i-j) == -1/i mod p
        for (uint64_t i = 1; i < up; ++i) {
            uint64_t t = 0;
            for (uint64_t j = 1; j < up; ++j) {
                if (j == i) continue;
                t = addmod64(t, invmod64((i + up - j) % up, up), up);
            }
            CHECK(t == (up - invmod64(i, up)) % up);
        }
    }
}

TEST_CASE("full harmonic sum vanishes to second order") {
    // sum_{k=1}^{p-1} 1/k == 0 mod p^2 for p >= 5
    for (int64_t p : {5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59}) {
        mpz_class q = mpz_pow_pk(p, 2);
        mpz_class s = 0;
        for (int64_t k = 1; k < p; ++k)
            s = mpz_mod_canonical(s + mpz_invert_checked(mpz_class(static_cast<long>(k)), q), q);
        CHECK(s == 0);
    }
}
