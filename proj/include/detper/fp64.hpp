#pragma once

// Word-size modular arithmetic. Used for prime fields F_p (p < 2^31) and as the
// fast path for Z/p^K whenever p^K < 2^63; the wide products go through
// unsigned __int128.

#include <cstdint>
#include <vector>

#include "detper/errors.hpp"

namespace detper {

using std::int64_t;
using std::uint64_t;

inline uint64_t mulmod64(uint64_t a, uint64_t b, uint64_t m) {
    return static_cast<uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

inline uint64_t addmod64(uint64_t a, uint64_t b, uint64_t m) {
    uint64_t s = a + b;  // safe: a, b < m < 2^63
    return s >= m ? s - m : s;
}

inline uint64_t submod64(uint64_t a, uint64_t b, uint64_t m) {
    return a >= b ? a - b : a + m - b;
}

inline uint64_t powmod64(uint64_t a, uint64_t e, uint64_t m) {
    uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod64(r, a, m);
        a = mulmod64(a, a, m);
        e >>= 1;
    }
    return r;
}

// Modular inverse by extended Euclid; throws NonUnit when gcd(a, m) != 1.
inline uint64_t invmod64(uint64_t a, uint64_t m) {
    int64_t t = 0, new_t = 1;
    int64_t r = static_cast<int64_t>(m), new_r = static_cast<int64_t>(a % m);
    while (new_r != 0) {
        int64_t q = r / new_r;
        int64_t tmp = t - q * new_t;
        t = new_t;
        new_t = tmp;
        tmp = r - q * new_r;
        r = new_r;
        new_r = tmp;
    }
    if (r != 1) throw NonUnit("invmod64: argument shares a factor with the modulus");
    if (t < 0) t += static_cast<int64_t>(m);
    return static_cast<uint64_t>(t);
}

// Euler-criterion Legendre symbol; 0 when p | a.
inline int legendre64(int64_t a, int64_t p) {
    int64_t r = a % p;
    if (r < 0) r += p;
    if (r == 0) return 0;
    uint64_t e = powmod64(static_cast<uint64_t>(r), static_cast<uint64_t>((p - 1) / 2),
                          static_cast<uint64_t>(p));
    return e == 1 ? 1 : -1;
}

// p^k as uint64; caller guarantees no overflow (p^k < 2^63).
inline uint64_t upow64(uint64_t p, int k) {
    uint64_t r = 1;
    for (int i = 0; i < k; ++i) r *= p;
    return r;
}

// True iff p^k < 2^63 (so the uint64 fast path is safe).
inline bool fits_u63(uint64_t p, int k) {
    unsigned __int128 r = 1;
    const unsigned __int128 lim = static_cast<unsigned __int128>(1) << 63;
    for (int i = 0; i < k; ++i) {
        r *= p;
        if (r >= lim) return false;
    }
    return true;
}

// Trial-division factorization of n into (prime, multiplicity) pairs.
// Desk-scale only: refuses n >= 2^40.
inline std::vector<std::pair<uint64_t, int>> trial_factor(uint64_t n) {
    if (n >= (uint64_t{1} << 40))
        throw FactorizationBudgetExceeded("trial_factor: input beyond desk-scale cap");
    std::vector<std::pair<uint64_t, int>> out;
    for (uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            int e = 0;
            while (n % d == 0) { n /= d; ++e; }
            out.emplace_back(d, e);
        }
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

inline bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

}  // namespace detper
