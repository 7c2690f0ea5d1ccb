// Matrix family construction: nodes, entries, skewness, congruence-class gates.

#include <catch2/catch_amalgamated.hpp>

#include "detper/errors.hpp"
#include "detper/kernels.hpp"

using namespace detper;

TEST_CASE("inverse-difference matrix at p=3") {
    KernelMatrix m = build_kernel(KernelKind::CAUCHY, 3, 1);
    REQUIRE(m.n() == 2);
    CHECK(m.nodes == std::vector<int64_t>{1, 2});
    CHECK(m.mat.at(0, 0) == 0);
    CHECK(m.mat.at(0, 1) == 2);  // (1-2)^{-1} = -1 == 2 mod 3
    CHECK(m.mat.at(1, 0) == 1);
    CHECK(m.mat.at(1, 1) == 0);
}

TEST_CASE("ratio matrix entries mod p^2") {
    KernelMatrix m = build_kernel(KernelKind::CAYLEY, 5, 2);
    REQUIRE(m.n() == 4);
    // (1+2)/(1-2) = -3 == 22 mod 25
    CHECK(m.mat.at(0, 1) == 22);
    CHECK(m.mat.at(1, 0) == 3);
    // entry() wraps the same value as a PadicResidue
    CHECK(m.entry(0, 1).value() == 22);
    CHECK(m.entry(0, 1).K() == 2);
}

TEST_CASE("full-size ratio matrix can have zero numerators") {
    KernelMatrix m = build_kernel(KernelKind::CAYLEY_FULL, 5, 1);
    REQUIRE(m.n() == 5);
    CHECK(m.nodes == std::vector<int64_t>{1, 2, 3, 4, 5});
    CHECK(m.mat.at(1, 2) == 0);  // numerator 2+3 == 0 mod 5
    CHECK(m.mat.at(2, 1) == 0);
}

TEST_CASE("quadratic families keep integer square nodes") {
    KernelMatrix m = build_kernel(KernelKind::QUAD_CAUCHY, 7, 2);
    REQUIRE(m.n() == 3);
    CHECK(m.nodes == std::vector<int64_t>{1, 4, 9});  // not reduced mod 7
    // (1-4)^{-1} mod 49 = 16, which differs from any inverse of a reduced difference
    CHECK(m.mat.at(0, 1) == 16);
    CHECK(m.mat.at(1, 0) == 49 - 16);

    // the unreduced nodes matter at K >= 2: 9-1 = 8 vs (2-1) = 1 give different inverses
    KernelMatrix q = build_kernel(KernelKind::QUAD_CAYLEY, 7, 2);
    CHECK(q.nodes == std::vector<int64_t>{1, 4, 9});
    // (9+1)/(9-1) = 10/8 mod 49: inv(8) = 43, 10*43 = 430 == 38 mod 49
    CHECK(q.mat.at(2, 0) == 38);
}

TEST_CASE("quadratic families require p == 3 mod 4") {
    CHECK_THROWS_AS(build_kernel(KernelKind::QUAD_CAUCHY, 13, 1), BadCongruenceClass);
    CHECK_THROWS_AS(build_kernel(KernelKind::QUAD_CAYLEY, 5, 1), BadCongruenceClass);
    CHECK_NOTHROW(build_kernel(KernelKind::QUAD_CAYLEY, 11, 1));
}

TEST_CASE("skew symmetry by construction") {
    for (KernelKind k : {KernelKind::CAUCHY, KernelKind::CAYLEY, KernelKind::CAYLEY_FULL}) {
        KernelMatrix m = build_kernel(k, 7, 2);
        for (int i = 0; i < m.n(); ++i) {
            CHECK(m.mat.at(i, i) == 0);
            for (int j = 0; j < i; ++j)
                CHECK(m.mat.at(j, i) == mpz_mod_canonical(-m.mat.at(i, j), m.mat.q));
        }
    }
}

TEST_CASE("generic builders take explicit nodes") {
    KernelMatrix m = build_generic(KernelKind::GENERIC_CAUCHY, 7, 1, {2, 5, 6});
    REQUIRE(m.n() == 3);
    CHECK(m.mat.at(0, 1) == mpz_class(invmod64((2 - 5 + 7) % 7, 7)));
    // nodes colliding mod p are rejected
    CHECK_THROWS_AS(build_generic(KernelKind::GENERIC_CAUCHY, 7, 1, {1, 8}), Error);
    // only the generic kinds accept explicit nodes
    CHECK_THROWS_AS(build_generic(KernelKind::CAUCHY, 7, 1, {1, 2}), Error);
    CHECK_THROWS_AS(build_kernel(KernelKind::GENERIC_CAUCHY, 7, 1), Error);
}

TEST_CASE("inverse-form matrix at K=1") {
    KernelMatrix m = build_dpab(5, 1, 1);
    REQUIRE(m.n() == 4);
    CHECK(m.dp_a == 1);
    CHECK(m.dp_b == 1);
    // (1 + 1 + 1)^{p-2} = 3^3 = 27 == 2 mod 5
    CHECK(m.mat.at(0, 0) == 2);
    // coefficients are normalized mod p
    KernelMatrix n = build_dpab(5, 6, 6);
    CHECK(n.dp_a == 1);
    CHECK(n.dp_b == 1);
    CHECK(n.mat.a == m.mat.a);
}

TEST_CASE("square nodes enumerate the half-order roots of unity") {
    CHECK(mu_m_nodes(7) == std::vector<int64_t>{1, 4, 2});
    CHECK(mu_m_nodes(11) == std::vector<int64_t>{1, 4, 9, 5, 3});
    CHECK_THROWS_AS(mu_m_nodes(13), BadCongruenceClass);
    for (int64_t p : {7, 11, 19, 23, 31}) CHECK(phi_check(p));
    CHECK_THROWS_AS(phi_check(5), BadCongruenceClass);
}

TEST_CASE("pencil and identity_plus") {
    KernelMatrix m = build_kernel(KernelKind::CAUCHY, 5, 2);
    ModMat ip = identity_plus(m.mat);
    for (int i = 0; i < ip.n; ++i) {
        CHECK(ip.at(i, i) == 1);  // diagonal of the base matrix is zero
        for (int j = 0; j < ip.n; ++j)
            if (i != j) CHECK(ip.at(i, j) == m.mat.at(i, j));
    }
    ModMat sc = pencil(m.mat, 3, 2);
    CHECK(sc.at(0, 0) == 3);
    CHECK(sc.at(0, 1) == mpz_mod_canonical(m.mat.at(0, 1) * 2, m.mat.q));
}

TEST_CASE("entrywise precision reduction") {
    KernelMatrix m = build_kernel(KernelKind::CAYLEY, 5, 3);
    ModMat r = m.mat.reduced(1);
    CHECK(r.K == 1);
    for (int i = 0; i < r.n; ++i)
        for (int j = 0; j < r.n; ++j)
            CHECK(r.at(i, j) == mpz_mod_canonical(m.mat.at(i, j), mpz_class(5)));
    CHECK_THROWS_AS(m.mat.reduced(4), PrecisionUnderflow);
}
