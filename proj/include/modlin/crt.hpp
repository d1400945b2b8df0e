#pragma once

#include "modlin/arith.hpp"
#include "modlin/bezout.hpp"
#include "modlin/modsolve.hpp"
#include "modlin/result.hpp"

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace modlin {

/// x mod p^r for one prime-power subproblem.
struct ResidueSolution {
    BigInt p;
    unsigned long r = 0;
    IntVector x;
    bool constraint_ok = false;  // <w mod p, x mod p> ≢ 0 (mod p)
};

/// Runs fn(0..count-1) on at most `jobs` threads; results keep index order.
template <typename Fn>
auto parallel_map(std::size_t count, std::size_t jobs, Fn fn) -> std::vector<decltype(fn(std::size_t{}))> {
    using R = decltype(fn(std::size_t{}));
    std::vector<std::optional<R>> slots(count);
    std::vector<std::exception_ptr> errors(count);
    const std::size_t workers = std::max<std::size_t>(1, std::min(jobs, count));
    if (workers == 1) {
        for (std::size_t i = 0; i < count; ++i) slots[i].emplace(fn(i));
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < count; i = next++) {
                    try {
                        slots[i].emplace(fn(i));
                    } catch (...) {
                        errors[i] = std::current_exception();
                    }
                }
            });
        }
        pool.clear();
        for (auto& e : errors)
            if (e) std::rethrow_exception(e);
    }
    std::vector<R> out;
    out.reserve(count);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

namespace detail {

inline bool constraint_holds(std::span<const BigInt> w, std::span<const BigInt> x, const BigInt& p) {
    return mod_floor(dot(reduce_mod(w, p), reduce_mod(x, p)), p) != 0;
}

inline NoSolution tag_modulus(NoSolution f, const BigInt& modulus) {
    f.modulus = modulus;
    return f;
}

}  // namespace detail

/// A·x ≡ b (mod p^r) through the prime-power Smith form; x₁ = 0.
inline Result<ResidueSolution> solve_mod_pr(const IntMatrix& a, std::span<const BigInt> b, const BigInt& p,
                                            unsigned long r, std::span<const BigInt> w = {}) {
    auto desc = solve_modular_prime_power(a, b, p, r);
    if (!desc) return detail::tag_modulus(desc.failure(), pow(p, r));
    ResidueSolution out{p, r, desc.value().particular, false};
    if (!w.empty()) out.constraint_ok = detail::constraint_holds(w, out.x, p);
    return out;
}

/// Combines per-prime-power vectors: x = Σ x(j)·P_j·Q_j mod n with
/// P_j = n / p_j^{r_j} and Q_j = P_j⁻¹ mod p_j^{r_j}, folded in ascending prime order.
inline IntVector crt_combine(std::span<const ResidueSolution> parts, const BigInt& n) {
    if (parts.empty()) return {};
    const std::size_t l = parts.front().x.size();
    IntVector x(l, BigInt(0));
    for (const auto& part : parts) {
        const BigInt pr = pow(part.p, part.r);
        const BigInt cofactor = n / pr;
        const BigInt weight = cofactor * inverse_mod_prime_power(mod_floor(cofactor, pr), part.p, part.r);
        for (std::size_t i = 0; i < l; ++i) x[i] += part.x[i] * weight;
    }
    for (auto& v : x) v = mod_floor(v, n);
    return x;
}

namespace detail {

template <typename Solve>
Result<IntVector> solve_by_residues(const IntMatrix& a, std::span<const BigInt> b, std::span<const BigInt> w,
                                    const BigInt& n, const PrimePowerFactorization& factors, std::size_t jobs,
                                    Solve solve_one) {
    check_dims(a, b, n);
    const PrimePowerFactorization f = validated(factors, n);
    // Each task sees only immutable inputs and writes its own slot.
    auto parts = parallel_map(f.factors.size(), jobs,
                              [&](std::size_t i) { return solve_one(f.factors[i].prime, f.factors[i].exponent); });
    std::vector<ResidueSolution> solved;
    solved.reserve(parts.size());
    for (auto& part : parts) {
        if (!part) return part.failure();
        solved.push_back(std::move(part.value()));
    }
    IntVector x = crt_combine(solved, n);
    if (!is_solution(a, b, x, n)) throw std::logic_error("combined solution failed verification");
    if (!w.empty() && gcd(dot(w, x), n) != 1) throw std::logic_error("combined solution violates the constraint");
    return x;
}

}  // namespace detail

/// A·x ≡ b (mod n) by independent prime-power subproblems and CRT.
inline Result<IntVector> solve_mod_n(const IntMatrix& a, std::span<const BigInt> b, const BigInt& n,
                                     const PrimePowerFactorization& factors, std::size_t jobs = 1) {
    return detail::solve_by_residues(a, b, {}, n, factors, jobs, [&](const BigInt& p, unsigned long r) {
        return solve_mod_pr(a, b, p, r);
    });
}

/// Constrained variant: every residue x(p) also satisfies <w, x(p)> ≢ 0 (mod p).
inline Result<IntVector> solve_mod_n_constrained(const IntMatrix& a, std::span<const BigInt> b,
                                                 std::span<const BigInt> w, const BigInt& n,
                                                 const PrimePowerFactorization& factors, std::size_t jobs = 1) {
    if (w.size() != a.cols()) throw std::invalid_argument("solve_mod_n_constrained: w has the wrong length");
    return detail::solve_by_residues(
        a, b, w, n, factors, jobs, [&](const BigInt& p, unsigned long r) -> Result<ResidueSolution> {
            auto sol = solve_prime_power_constrained(a, b, w, p, r);
            if (!sol) return detail::tag_modulus(sol.failure(), pow(p, r));
            return ResidueSolution{p, r, sol.value().x, true};
        });
}

// ---------------------------------------------------------------------------
// Desk-scale factorization for when the caller does not supply one.

inline constexpr const char* kFactorBoundEnv = "MODLIN_FACTOR_BOUND";

/// 2^64 unless MODLIN_FACTOR_BOUND holds a decimal override.
inline BigInt factorization_bound() {
    if (const char* env = std::getenv(kFactorBoundEnv); env && *env) return parse_bigint(env);
    return BigInt(1) << 64;
}

namespace detail {

// Brent's variant of Pollard rho for an odd composite n.
inline BigInt pollard_rho(const BigInt& n) {
    for (unsigned long c = 1;; ++c) {
        BigInt y = 2, x, g = 1, q = 1, ys;
        std::size_t r = 1;
        const std::size_t m = 64;
        auto f = [&](const BigInt& v) { return BigInt((v * v + c) % n); };
        do {
            x = y;
            for (std::size_t i = 0; i < r; ++i) y = f(y);
            std::size_t k = 0;
            do {
                ys = y;
                for (std::size_t i = 0; i < std::min(m, r - k); ++i) {
                    y = f(y);
                    q = q * abs(BigInt(x - y)) % n;
                }
                g = gcd(q, n);
                k += m;
            } while (k < r && g == 1);
            r *= 2;
        } while (g == 1);
        if (g == n) {
            do {
                ys = f(ys);
                g = gcd(abs(BigInt(x - ys)), n);
            } while (g == 1);
        }
        if (g != n) return g;
    }
}

inline void split_into(const BigInt& n, std::vector<BigInt>& primes) {
    if (n == 1) return;
    if (is_probable_prime(n)) {
        primes.push_back(n);
        return;
    }
    if (mpz_perfect_square_p(n.get_mpz_t())) {
        BigInt root;
        mpz_sqrt(root.get_mpz_t(), n.get_mpz_t());
        split_into(root, primes);
        split_into(root, primes);
        return;
    }
    const BigInt d = pollard_rho(n);
    split_into(d, primes);
    split_into(n / d, primes);
}

}  // namespace detail

/// Trial division then Pollard rho; refuses n above the configured bound.
inline PrimePowerFactorization factorize_fallback(const BigInt& n, std::optional<BigInt> bound = std::nullopt) {
    if (n < 2) throw std::invalid_argument("factorize: n must be >= 2");
    const BigInt limit = bound ? *bound : factorization_bound();
    if (n > limit) {
        throw FactorizationError("factorization required: " + to_string(n) + " exceeds the desk-scale bound " +
                                 to_string(limit) + "; pass --factors");
    }
    std::vector<BigInt> primes;
    BigInt rest = n;
    for (unsigned long p = 2; p < 10000 && BigInt(p) * p <= rest; p += (p == 2 ? 1 : 2)) {
        while (mpz_divisible_ui_p(rest.get_mpz_t(), p)) {
            primes.emplace_back(p);
            rest /= p;
        }
    }
    detail::split_into(rest, primes);
    std::sort(primes.begin(), primes.end());
    PrimePowerFactorization f;
    for (const auto& p : primes) {
        if (!f.factors.empty() && f.factors.back().prime == p) {
            ++f.factors.back().exponent;
        } else {
            f.factors.push_back({p, 1});
        }
    }
    return validated(std::move(f), n);
}

}  // namespace modlin
