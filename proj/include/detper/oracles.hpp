#pragma once

// Independent combinatorial oracles used to validate the linear-algebra
// engines: cyclic-sequence cancellation for inverse-difference matrices,
// perfect-matching expansions, derangement/fixed-point permanent identities,
// and randomized cross-checks of the fast routines against brute force.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "detper/fp64.hpp"
#include "detper/kernels.hpp"
#include "detper/linalg.hpp"

namespace detper {

// Sum over the (s-1)! oriented cycles through all of pts (smallest point
// fixed first) of prod_i (x_i - x_{i+1})^{-1} mod p.  Cancels to 0 for s >= 2.
inline uint64_t cycle_sum(int64_t p, const std::vector<int64_t>& pts) {
    const uint64_t up = static_cast<uint64_t>(p);
    const int s = static_cast<int>(pts.size());
    std::vector<int64_t> rest(pts.begin() + 1, pts.end());
    std::sort(rest.begin(), rest.end());
    uint64_t tot = 0;
    do {
        uint64_t t = 1;
        for (int i = 0; i < s; ++i) {
            int64_t x = (i == 0) ? pts[0] : rest[i - 1];
            int64_t y = (i == s - 1) ? pts[0] : rest[i];
            int64_t d = ((x - y) % p + p) % p;
            t = mulmod64(t, invmod64(static_cast<uint64_t>(d), up), up);
        }
        tot = addmod64(tot, t, up);
    } while (std::next_permutation(rest.begin(), rest.end()));
    return tot;
}

// Recursive perfect-matching sum: sum over matchings of prod (x-y)^{-2}.
inline uint64_t matching_sum(const std::vector<int64_t>& xs, int64_t p) {
    if (xs.empty()) return 1;
    const uint64_t up = static_cast<uint64_t>(p);
    const int64_t x = xs[0];
    uint64_t tot = 0;
    for (size_t idx = 1; idx < xs.size(); ++idx) {
        int64_t y = xs[idx];
        std::vector<int64_t> rest;
        for (size_t t = 1; t < xs.size(); ++t)
            if (t != idx) rest.push_back(xs[t]);
        int64_t d = ((x - y) % p + p) % p;
        uint64_t inv2 = invmod64(mulmod64(static_cast<uint64_t>(d), static_cast<uint64_t>(d), up), up);
        tot = addmod64(tot, mulmod64(inv2, matching_sum(rest, p), up), up);
    }
    return tot;
}

// Direct enumeration of all perfect matchings (independent of the recursion
// above): each matching contributes the full product over its pairs.
inline uint64_t matching_sum_bruteforce(const std::vector<int64_t>& xs, int64_t p) {
    const uint64_t up = static_cast<uint64_t>(p);
    const int n = static_cast<int>(xs.size());
    if (n % 2 != 0) return 0;
    if (n == 0) return 1;
    // enumerate matchings via the standard "first free element pairs with
    // every later free element" stack walk
    std::vector<int> partner(n, -1);
    uint64_t total = 0;
    std::function<void()> rec = [&]() {
        int a = -1;
        for (int i = 0; i < n; ++i)
            if (partner[i] < 0) { a = i; break; }
        if (a < 0) {
            uint64_t t = 1;
            for (int i = 0; i < n; ++i) {
                int j = partner[i];
                if (j <= i) continue;
                int64_t d = ((xs[i] - xs[j]) % p + p) % p;
                uint64_t dd = mulmod64(static_cast<uint64_t>(d), static_cast<uint64_t>(d), up);
                t = mulmod64(t, invmod64(dd, up), up);
            }
            total = addmod64(total, t, up);
            return;
        }
        for (int b = a + 1; b < n; ++b) {
            if (partner[b] >= 0) continue;
            partner[a] = b;
            partner[b] = a;
            rec();
            partner[a] = -1;
            partner[b] = -1;
        }
    };
    rec();
    return total;
}

inline int perm_parity(const std::vector<int>& perm) {
    const int n = static_cast<int>(perm.size());
    std::vector<bool> seen(n, false);
    int par = 0;
    for (int i = 0; i < n; ++i) {
        if (seen[i]) continue;
        int len = 0, j = i;
        while (!seen[j]) {
            seen[j] = true;
            j = perm[j];
            ++len;
        }
        par ^= (len - 1) & 1;
    }
    return par ? -1 : 1;
}

// Splits each permutation of a zero-diagonal matrix A into its non-fixed part
// and verifies the four reductions:
//   per over derangements  == per(A),  det over derangements == det(A),
//   per over all perms     == per(I+A), det over all perms   == det(I+A).
inline bool derangement_reduction_holds(int64_t p, int n, uint64_t seed) {
    std::mt19937_64 rng(seed);
    ModMat A(p, 1, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            A.at(i, j) = (i == j) ? 0 : mpz_class(static_cast<unsigned long>(rng() % p));
    const uint64_t up = static_cast<uint64_t>(p);
    std::vector<uint64_t> g = fp_grid(A);
    std::vector<int> tau(n);
    for (int i = 0; i < n; ++i) tau[i] = i;
    uint64_t per_d = 0, per_f = 0;
    uint64_t det_d = 0, det_f = 0;
    do {
        uint64_t prod_nf = 1;
        bool derangement = true;
        for (int j = 0; j < n; ++j) {
            if (tau[j] == j) {
                derangement = false;
                continue;
            }
            prod_nf = mulmod64(prod_nf, g[static_cast<size_t>(j) * n + tau[j]], up);
        }
        int sg = perm_parity(tau);
        per_f = addmod64(per_f, prod_nf, up);
        det_f = sg > 0 ? addmod64(det_f, prod_nf, up) : submod64(det_f, prod_nf, up);
        if (derangement) {
            per_d = addmod64(per_d, prod_nf, up);
            det_d = sg > 0 ? addmod64(det_d, prod_nf, up) : submod64(det_d, prod_nf, up);
        }
    } while (std::next_permutation(tau.begin(), tau.end()));
    ModMat IA = identity_plus(A);
    bool ok = true;
    ok &= per_d == mpz_get_ui(permanent_enum(A).value().get_mpz_t());
    ok &= per_f == mpz_get_ui(permanent_enum(IA).value().get_mpz_t());
    ok &= det_d == mpz_get_ui(det_exact_oracle(A).residue_mod(1).get_mpz_t());
    ok &= det_f == mpz_get_ui(det_exact_oracle(IA).residue_mod(1).get_mpz_t());
    return ok;
}

// -------------------------------------------------------------------------
// Randomized cross-check suites (shared by the test binary and the CLI).
// -------------------------------------------------------------------------

struct OracleRun {
    std::string name;
    int trials = 0;
    int failures = 0;
    std::string detail;
    bool ok() const { return failures == 0; }
};

inline OracleRun oracle_ryser_vs_enum(int trials, uint64_t seed) {
    std::mt19937_64 rng(seed);
    OracleRun run{"ryser-vs-enum", trials, 0, ""};
    const int64_t ps[] = {3, 5, 7, 13};
    for (int t = 0; t < trials; ++t) {
        int64_t p = ps[rng() % 4];
        int K = 1 + static_cast<int>(rng() % 2);
        int n = 2 + static_cast<int>(rng() % 7);  // 2..8
        ModMat A = random_mod_mat(rng, p, K, n);
        if (permanent_ryser(A).value() != permanent_enum(A).value()) {
            ++run.failures;
            if (run.detail.empty())
                run.detail = "p=" + std::to_string(p) + " K=" + std::to_string(K) +
                             " n=" + std::to_string(n);
        }
    }
    return run;
}

inline OracleRun oracle_det_vs_exact(int trials, uint64_t seed) {
    std::mt19937_64 rng(seed);
    OracleRun run{"det-vs-exact", trials, 0, ""};
    const int64_t ps[] = {5, 7, 13};
    for (int t = 0; t < trials; ++t) {
        int64_t p = ps[rng() % 3];
        int K = 1 + static_cast<int>(rng() % 3);
        int n = 2 + static_cast<int>(rng() % 7);  // 2..8
        ModMat A = random_mod_mat(rng, p, K, n);
        // sprinkle p-divisible entries so nontrivial valuations appear
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (rng() % 3 == 0) A.at(i, j) = mpz_mod_canonical(A.at(i, j) * p, A.q);
        ValUnit exact = det_exact_oracle(A);
        bool good = true;
        try {
            ValUnit fast = det_mod(A, K);
            good = fast.residue_mod(K) == exact.residue_mod(K);
        } catch (const PrecisionExhausted&) {
            // engine could not resolve all K digits; compare at the certified level
            ValUnit fast = detail::engine_to_valunit(detail::run_det_engine(A), p, 0);
            int cert = fast.kind == ValUnit::Kind::UNIT
                           ? std::min(K, static_cast<int>(fast.valuation) + fast.known_to)
                           : std::min(K, static_cast<int>(fast.valuation));
            good = fast.residue_mod(cert) == exact.residue_mod(cert);
        }
        if (!good) {
            ++run.failures;
            if (run.detail.empty())
                run.detail = "p=" + std::to_string(p) + " K=" + std::to_string(K) +
                             " n=" + std::to_string(n);
        }
    }
    return run;
}

inline OracleRun oracle_cycle(int trials, uint64_t seed) {
    std::mt19937_64 rng(seed);
    OracleRun run{"cycle", trials, 0, ""};
    const int64_t ps[] = {11, 13, 17, 19};
    for (int t = 0; t < trials; ++t) {
        int64_t p = ps[rng() % 4];
        int s = 3 + static_cast<int>(rng() % 4);  // 3..6
        std::vector<int64_t> pool;
        for (int64_t x = 1; x < p; ++x) pool.push_back(x);
        std::shuffle(pool.begin(), pool.end(), rng);
        std::vector<int64_t> pts(pool.begin(), pool.begin() + s);
        std::sort(pts.begin(), pts.end());
        if (cycle_sum(p, pts) != 0) {
            ++run.failures;
            if (run.detail.empty()) run.detail = "p=" + std::to_string(p) + " s=" + std::to_string(s);
        }
    }
    return run;
}

inline OracleRun oracle_matching(int trials, uint64_t seed) {
    std::mt19937_64 rng(seed);
    OracleRun run{"matching", trials, 0, ""};
    const int64_t ps[] = {11, 13, 17, 19, 23};
    for (int t = 0; t < trials; ++t) {
        int64_t p = ps[rng() % 5];
        int size = 2 * (1 + static_cast<int>(rng() % 4));  // 2,4,6,8
        std::vector<int64_t> pool;
        for (int64_t x = 1; x < p; ++x) pool.push_back(x);
        std::shuffle(pool.begin(), pool.end(), rng);
        std::vector<int64_t> xs(pool.begin(), pool.begin() + size);
        if (matching_sum(xs, p) != matching_sum_bruteforce(xs, p)) {
            ++run.failures;
            if (run.detail.empty())
                run.detail = "p=" + std::to_string(p) + " size=" + std::to_string(size);
        }
    }
    return run;
}

inline OracleRun oracle_derangement(int trials, uint64_t seed) {
    std::mt19937_64 rng(seed);
    OracleRun run{"derangement", trials, 0, ""};
    const int64_t ps[] = {5, 7, 11, 13};
    for (int t = 0; t < trials; ++t) {
        int64_t p = ps[rng() % 4];
        int n = 2 + static_cast<int>(rng() % 6);  // 2..7
        if (!derangement_reduction_holds(p, n, rng())) {
            ++run.failures;
            if (run.detail.empty()) run.detail = "p=" + std::to_string(p) + " n=" + std::to_string(n);
        }
    }
    return run;
}

}  // namespace detper
