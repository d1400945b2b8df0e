#pragma once

#include "modlin/arith.hpp"
#include "modlin/bezout.hpp"
#include "modlin/matrix.hpp"

#include <algorithm>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <vector>

namespace modlin {

/// P·M·Q = S with P, Q unimodular and S diagonal with f_1 | f_2 | … | f_rank.
struct SmithDecomposition {
    IntMatrix P;
    IntMatrix Q;
    IntMatrix S;
    std::size_t rank = 0;
    std::vector<BigInt> invariant_factors;

    /// Prime-power path only: Bezout work spent on pivots, and how many
    /// diagonal swaps the final chain check needed.
    BezoutDiagnostics bezout;
    std::size_t chain_repairs = 0;
};

namespace detail {

/// S, P, Q kept in lockstep: every row operation applied to S is applied to P,
/// every column operation to Q.
struct SmithWorkspace {
    IntMatrix S, P, Q;

    explicit SmithWorkspace(const IntMatrix& m)
        : S(m), P(IntMatrix::identity(m.rows())), Q(IntMatrix::identity(m.cols())) {}

    void add_row(std::size_t dst, std::size_t src, const BigInt& f) {
        S.add_row_multiple(dst, src, f);
        P.add_row_multiple(dst, src, f);
    }
    void add_col(std::size_t dst, std::size_t src, const BigInt& f) {
        S.add_col_multiple(dst, src, f);
        Q.add_col_multiple(dst, src, f);
    }
    void swap_rows(std::size_t a, std::size_t b) {
        S.swap_rows(a, b);
        P.swap_rows(a, b);
    }
    void swap_cols(std::size_t a, std::size_t b) {
        S.swap_cols(a, b);
        Q.swap_cols(a, b);
    }
    void negate_col(std::size_t j) {
        S.negate_col(j);
        Q.negate_col(j);
    }

    /// Columns idx[0..] ← [columns idx[0..]]·T for a square T.
    void transform_cols(const std::vector<std::size_t>& idx, const IntMatrix& T) {
        apply(S, idx, T);
        apply(Q, idx, T);
    }

    SmithDecomposition finish(std::size_t rank) && {
        SmithDecomposition d;
        d.rank = rank;
        for (std::size_t i = 0; i < rank; ++i) d.invariant_factors.push_back(S(i, i));
        d.P = std::move(P);
        d.Q = std::move(Q);
        d.S = std::move(S);
        return d;
    }

private:
    static void apply(IntMatrix& m, const std::vector<std::size_t>& idx, const IntMatrix& T) {
        std::vector<BigInt> old(idx.size());
        for (std::size_t i = 0; i < m.rows(); ++i) {
            for (std::size_t a = 0; a < idx.size(); ++a) old[a] = m(i, idx[a]);
            for (std::size_t c = 0; c < idx.size(); ++c) {
                BigInt v = 0;
                for (std::size_t a = 0; a < idx.size(); ++a) {
                    if (T(a, c) != 0) v += old[a] * T(a, c);
                }
                m(i, idx[c]) = std::move(v);
            }
        }
    }
};

}  // namespace detail

/// Exact check of every certificate property against the original matrix.
inline bool certifies(const SmithDecomposition& d, const IntMatrix& m) {
    if (d.P.rows() != m.rows() || d.Q.rows() != m.cols()) return false;
    if (d.P * m * d.Q != d.S) return false;
    if (abs(determinant(d.P)) != 1 || abs(determinant(d.Q)) != 1) return false;
    for (std::size_t i = 0; i < d.S.rows(); ++i)
        for (std::size_t j = 0; j < d.S.cols(); ++j) {
            if (i == j && i < d.rank) {
                if (d.S(i, j) <= 0) return false;
            } else if (d.S(i, j) != 0) {
                return false;
            }
        }
    for (std::size_t i = 0; i + 1 < d.rank; ++i) {
        if (d.S(i + 1, i + 1) % d.S(i, i) != 0) return false;
    }
    return d.invariant_factors.size() == d.rank;
}

namespace detail {

inline void check_certificate(const SmithDecomposition& d, const IntMatrix& m) {
#ifdef MODLIN_VERIFY_CERTIFICATES
    if (!certifies(d, m)) throw std::logic_error("Smith certificate failed exact verification");
#else
    (void)d;
    (void)m;
#endif
}

}  // namespace detail

/// Smith normal form over Z with unimodular certificates.
///
/// Pivot: the nonzero entry of least absolute value in the working block,
/// ties broken by lowest (row, col).
inline SmithDecomposition smith_form(const IntMatrix& a) {
    detail::SmithWorkspace w(a);
    auto& S = w.S;
    const std::size_t k = a.rows();
    const std::size_t m = a.cols();
    std::size_t t = 0;
    for (; t < std::min(k, m); ++t) {
        bool empty_block = false;
        for (;;) {
            std::optional<std::pair<std::size_t, std::size_t>> best;
            for (std::size_t i = t; i < k; ++i)
                for (std::size_t j = t; j < m; ++j) {
                    if (S(i, j) == 0) continue;
                    if (!best || abs(S(i, j)) < abs(S(best->first, best->second))) best = {{i, j}};
                }
            if (!best) {
                empty_block = true;
                break;
            }
            w.swap_rows(t, best->first);
            w.swap_cols(t, best->second);

            bool clean = true;
            for (std::size_t i = t + 1; i < k; ++i) {
                if (S(i, t) == 0) continue;
                w.add_row(i, t, -div_floor(S(i, t), S(t, t)));
                if (S(i, t) != 0) clean = false;
            }
            for (std::size_t j = t + 1; j < m; ++j) {
                if (S(t, j) == 0) continue;
                w.add_col(j, t, -div_floor(S(t, j), S(t, t)));
                if (S(t, j) != 0) clean = false;
            }
            if (!clean) continue;

            // The pivot must divide the rest of the block; pull a violating row up.
            std::optional<std::size_t> bad_row;
            for (std::size_t i = t + 1; i < k && !bad_row; ++i)
                for (std::size_t j = t + 1; j < m; ++j) {
                    if (S(i, j) % S(t, t) != 0) {
                        bad_row = i;
                        break;
                    }
                }
            if (!bad_row) break;
            w.add_row(t, *bad_row, 1);
        }
        if (empty_block) break;
        if (S(t, t) < 0) w.negate_col(t);
    }
    SmithDecomposition d = std::move(w).finish(t);
    detail::check_certificate(d, a);
    return d;
}

/// [A, −nI], the integral form of A·x ≡ b (mod n).
inline IntMatrix augmented_matrix(const IntMatrix& a, const BigInt& n) {
    IntMatrix out(a.rows(), a.cols() + a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
        out(i, a.cols() + i) = -n;
    }
    return out;
}

/// Smith form of [A, −nI]; S = [diag(f_1..f_k), 0] with rank k.
inline SmithDecomposition smith_form_augmented(const IntMatrix& a, const BigInt& n) {
    if (n < 2) throw std::invalid_argument("smith_form_augmented: modulus must be >= 2");
    return smith_form(augmented_matrix(a, n));
}

/// Smith form of [A, −p^r I] whose invariant factors are p^{r_1} ≤ … ≤ p^{r_k}.
///
/// Pivots are discovered from p-valuations alone and each pivot row is cleared
/// by bezout_multi against the row's own p^r entry, so no general gcd is ever
/// taken. Column eliminations below a pivot divide exactly by a power of p.
inline SmithDecomposition smith_form_prime_power(const IntMatrix& a, const BigInt& p, unsigned long r) {
    detail::require_prime(p);
    if (r == 0) throw std::invalid_argument("smith_form_prime_power: exponent must be >= 1");
    const std::size_t k = a.rows();
    const std::size_t l = a.cols();
    const std::size_t width = k + l;
    const BigInt pr = pow(p, r);
    const IntMatrix original = augmented_matrix(a, pr);

    detail::SmithWorkspace w(original);
    auto& S = w.S;
    BezoutDiagnostics bezout;

    // [A, −p^r I] → [p^r I, A]: rotate the identity block to the front, flip its sign.
    {
        IntMatrix perm(width, width);
        for (std::size_t c = 0; c < k; ++c) perm(l + c, c) = -1;
        for (std::size_t c = 0; c < l; ++c) perm(c, k + c) = 1;
        std::vector<std::size_t> all(width);
        for (std::size_t c = 0; c < width; ++c) all[c] = c;
        w.transform_cols(all, perm);
    }

    // Rows ≥ from still carry p^r at (i, i) alone in column i; use it to bring
    // their A-part entries into [0, p^r).
    auto reduce_rows = [&](std::size_t from) {
        for (std::size_t i = from; i < k; ++i)
            for (std::size_t j = k; j < width; ++j) {
                BigInt q = div_floor(S(i, j), pr);
                if (q != 0) w.add_col(j, i, -q);
            }
    };
    reduce_rows(0);

    std::vector<unsigned long> exponents(k, r);
    for (std::size_t t = 0; t < k; ++t) {
        // Row holding the entry of least valuation.
        std::size_t pivot_row = t;
        unsigned long best = r;
        for (std::size_t i = t; i < k && best > 0; ++i)
            for (std::size_t j = k; j < width; ++j) {
                const unsigned long v = valuation_capped(S(i, j), p, r);
                if (v < best) {
                    best = v;
                    pivot_row = i;
                    if (v == 0) break;
                }
            }
        if (pivot_row != t) {
            w.swap_rows(t, pivot_row);
            w.swap_cols(t, pivot_row);
        }

        // [row_t(A part), p^r]·T = [p^g, 0, …, 0]
        std::vector<std::size_t> idx;
        std::vector<BigInt> entries;
        for (std::size_t j = k; j < width; ++j) {
            idx.push_back(j);
            entries.push_back(S(t, j));
        }
        idx.push_back(t);
        if (entries.empty()) {
            exponents[t] = r;
            continue;
        }
        UnimodularColumnReducer reducer = bezout_multi(entries, p, r);
        bezout += reducer.diagnostics;
        w.transform_cols(idx, reducer.Q);
        w.swap_cols(t, idx.front());
        exponents[t] = reducer.g_exponent;

        for (std::size_t i = t + 1; i < k; ++i) {
            if (S(i, t) == 0) continue;
            BigInt f;
            if (!mpz_divisible_p(S(i, t).get_mpz_t(), reducer.g.get_mpz_t())) {
                throw std::logic_error("smith_form_prime_power: pivot does not divide its column");
            }
            mpz_divexact(f.get_mpz_t(), S(i, t).get_mpz_t(), reducer.g.get_mpz_t());
            w.add_row(i, t, -f);
        }
        reduce_rows(t + 1);
    }

    // Exponents come out nondecreasing; keep the chain check as a guard.
    std::size_t repairs = 0;
    for (bool sorted = false; !sorted;) {
        sorted = true;
        for (std::size_t i = 0; i + 1 < k; ++i) {
            if (exponents[i] > exponents[i + 1]) {
                std::swap(exponents[i], exponents[i + 1]);
                w.swap_rows(i, i + 1);
                w.swap_cols(i, i + 1);
                ++repairs;
                sorted = false;
            }
        }
    }

    SmithDecomposition d = std::move(w).finish(k);
    d.bezout = bezout;
    d.chain_repairs = repairs;
    detail::check_certificate(d, original);
    return d;
}

}  // namespace modlin
