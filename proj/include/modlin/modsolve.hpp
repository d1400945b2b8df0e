#pragma once

#include "modlin/arith.hpp"
#include "modlin/matrix.hpp"
#include "modlin/result.hpp"
#include "modlin/smith.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

namespace modlin {

// ---------------------------------------------------------------------------
// Integral systems A·x = b over Z.

struct IntegralSolution {
    IntVector particular;
    std::vector<IntVector> kernel_basis;
};

/// All integer solutions of A·x = b as particular + span(kernel_basis).
inline Result<IntegralSolution> solve_integral(const IntMatrix& a, std::span<const BigInt> b) {
    if (b.size() != a.rows()) throw std::invalid_argument("solve_integral: b has the wrong length");
    const SmithDecomposition d = smith_form(a);
    const IntVector pb = d.P * b;
    for (std::size_t i = d.rank; i < pb.size(); ++i) {
        if (pb[i] != 0) {
            NoSolution f;
            f.cause = NoSolution::Cause::nonzero_tail;
            f.index = i + 1;
            f.value = pb[i];
            return f;
        }
    }
    IntVector y(a.cols(), BigInt(0));
    for (std::size_t i = 0; i < d.rank; ++i) {
        const BigInt& fi = d.invariant_factors[i];
        if (!mpz_divisible_p(pb[i].get_mpz_t(), fi.get_mpz_t())) {
            NoSolution f;
            f.cause = NoSolution::Cause::invariant_factor;
            f.index = i + 1;
            f.factor = fi;
            f.value = pb[i];
            return f;
        }
        mpz_divexact(y[i].get_mpz_t(), pb[i].get_mpz_t(), fi.get_mpz_t());
    }
    IntegralSolution out;
    out.particular = d.Q * y;
    for (std::size_t j = d.rank; j < a.cols(); ++j) out.kernel_basis.push_back(d.Q.column(j));
    return out;
}

// ---------------------------------------------------------------------------
// Modular systems A·x ≡ b (mod n) through [A, −nI].

/// x = particular + free_block·x₁ (mod modulus) for every integer x₁.
struct SolutionDescription {
    BigInt modulus;
    IntVector particular;  // Q₀·x₀ mod n
    IntMatrix free_block;  // Q₁ mod n, l×l
    IntVector x0;          // S⁻¹·P·b
    SmithDecomposition decomposition;
};

namespace detail {

/// x₀ = S⁻¹Pb and the Q₀/Q₁ blocks of a decomposition of [A, −nI].
inline Result<SolutionDescription> describe(SmithDecomposition d, std::span<const BigInt> b, const BigInt& n,
                                            std::size_t l) {
    const std::size_t k = d.S.rows();
    const IntVector pb = d.P * b;
    SolutionDescription out;
    out.modulus = n;
    out.x0.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        const BigInt& fi = d.S(i, i);
        if (!mpz_divisible_p(pb[i].get_mpz_t(), fi.get_mpz_t())) {
            NoSolution f;
            f.cause = NoSolution::Cause::invariant_factor;
            f.index = i + 1;
            f.factor = fi;
            f.value = pb[i];
            return f;
        }
        mpz_divexact(out.x0[i].get_mpz_t(), pb[i].get_mpz_t(), fi.get_mpz_t());
    }
    out.particular = reduce_mod(d.Q.block(0, 0, l, k) * out.x0, n);
    out.free_block = reduce_mod(d.Q.block(0, k, l, l), n);
    out.decomposition = std::move(d);
    return out;
}

inline void check_dims(const IntMatrix& a, std::span<const BigInt> b, const BigInt& n) {
    if (n < 2) throw std::invalid_argument("modulus must be >= 2");
    if (b.size() != a.rows()) throw std::invalid_argument("b has the wrong length");
}

}  // namespace detail

inline Result<SolutionDescription> solve_modular(const IntMatrix& a, std::span<const BigInt> b, const BigInt& n) {
    detail::check_dims(a, b, n);
    return detail::describe(smith_form_augmented(reduce_mod(a, n), n), reduce_mod(b, n), n, a.cols());
}

/// Same description, computed with the prime-power Smith reduction.
inline Result<SolutionDescription> solve_modular_prime_power(const IntMatrix& a, std::span<const BigInt> b,
                                                             const BigInt& p, unsigned long r) {
    const BigInt pr = pow(p, r);
    detail::check_dims(a, b, pr);
    return detail::describe(smith_form_prime_power(reduce_mod(a, pr), p, r), reduce_mod(b, pr), pr, a.cols());
}

inline bool is_solution(const IntMatrix& a, std::span<const BigInt> b, std::span<const BigInt> x, const BigInt& n) {
    const IntVector ax = a * x;
    for (std::size_t i = 0; i < ax.size(); ++i) {
        if (mod_floor(ax[i] - b[i], n) != 0) return false;
    }
    return true;
}

/// Largest r such that the gcd of all r×r minors of A is coprime to n.
/// The gcd of the r×r minors is f_1⋯f_r, read off the Smith form of A.
inline std::size_t unimodular_rank(const IntMatrix& a, const BigInt& n) {
    if (n < 2) throw std::invalid_argument("unimodular_rank: modulus must be >= 2");
    const SmithDecomposition d = smith_form(a);
    std::size_t r = 0;
    while (r < d.rank && gcd(d.invariant_factors[r], n) == 1) ++r;
    return r;
}

struct UniquenessReport {
    bool unique = false;          // Q₁ ≡ 0 (mod n)
    bool rank_condition = false;  // l ≤ k and unimodular-rank = l
    std::size_t unimodular_rank = 0;

    bool consistent() const { return unique == rank_condition; }
};

/// Requires a solvable system.
inline UniquenessReport is_unique(const IntMatrix& a, std::span<const BigInt> b, const BigInt& n) {
    auto sol = solve_modular(a, b, n);
    if (!sol) throw std::invalid_argument("is_unique: system has no solution (" + sol.failure().message() + ")");
    UniquenessReport rep;
    rep.unique = sol.value().free_block.is_zero();
    rep.unimodular_rank = unimodular_rank(a, n);
    rep.rank_condition = a.cols() <= a.rows() && rep.unimodular_rank == a.cols();
    return rep;
}

/// [w₀; w₁] = Qᵀ·[w; 0]. w₀ pairs with x₀ (length k), w₁ with x₁ (length l).
struct ConstraintData {
    IntVector w0;
    IntVector w1;
};

inline ConstraintData constraint_split(std::span<const BigInt> w, const SmithDecomposition& d) {
    const std::size_t k = d.S.rows();
    const std::size_t width = d.Q.rows();
    if (w.size() + k != width) throw std::invalid_argument("constraint_split: w has the wrong length");
    IntVector padded(w.begin(), w.end());
    padded.resize(width, BigInt(0));
    const IntVector wt = d.Q.transpose() * padded;
    ConstraintData out;
    out.w0.assign(wt.begin(), wt.begin() + static_cast<std::ptrdiff_t>(k));
    out.w1.assign(wt.begin() + static_cast<std::ptrdiff_t>(k), wt.end());
    return out;
}

/// A solution x with gcd(<w, x>, n) = 1, plus the pieces it was built from.
struct ConstrainedSolution {
    BigInt modulus;
    IntVector x;
    IntVector x1;  // free parameter chosen per prime
    ConstraintData constraint;
};

namespace detail {

/// Picks x₁ prime by prime: 0 where <w₀,x₀> ≢ 0, else e_i for the least i
/// with w₁[i] ≢ 0; CRT glues the per-prime choices.
inline Result<ConstrainedSolution> construct_constrained(const SolutionDescription& desc, const IntMatrix& a,
                                                         std::span<const BigInt> b, std::span<const BigInt> w,
                                                         std::span<const BigInt> primes) {
    const std::size_t l = a.cols();
    ConstrainedSolution out;
    out.modulus = desc.modulus;
    out.constraint = constraint_split(w, desc.decomposition);
    const BigInt phi0 = dot(out.constraint.w0, desc.x0);

    std::vector<std::vector<Residue>> per_component(l);
    for (const BigInt& p : primes) {
        std::optional<std::size_t> pick;
        if (mod_floor(phi0, p) == 0) {
            for (std::size_t i = 0; i < l && !pick; ++i) {
                if (mod_floor(out.constraint.w1[i], p) != 0) pick = i;
            }
            if (!pick) {
                NoSolution f;
                f.cause = NoSolution::Cause::coprimality;
                f.prime = p;
                return f;
            }
        }
        for (std::size_t i = 0; i < l; ++i) per_component[i].push_back({BigInt(pick && *pick == i ? 1 : 0), p});
    }
    out.x1.resize(l);
    for (std::size_t i = 0; i < l; ++i) out.x1[i] = crt_pair(per_component[i]);

    IntVector x = desc.free_block * out.x1;
    for (std::size_t i = 0; i < l; ++i) x[i] = mod_floor(x[i] + desc.particular[i], desc.modulus);
    out.x = std::move(x);

    if (!is_solution(a, b, out.x, desc.modulus) || gcd(dot(w, out.x), desc.modulus) != 1) {
        throw std::logic_error("constructed solution failed verification");
    }
    return out;
}

}  // namespace detail

/// A·x ≡ b (mod n) with gcd(<w, x>, n) = 1, solved on the Smith form of [A, −nI].
inline Result<ConstrainedSolution> solve_constrained(const IntMatrix& a, std::span<const BigInt> b,
                                                     std::span<const BigInt> w, const BigInt& n,
                                                     const PrimePowerFactorization& factors) {
    detail::check_dims(a, b, n);
    if (w.size() != a.cols()) throw std::invalid_argument("solve_constrained: w has the wrong length");
    const PrimePowerFactorization f = validated(factors, n);
    auto desc = solve_modular(a, b, n);
    if (!desc) return desc.failure();
    std::vector<BigInt> primes;
    for (const auto& pp : f.factors) primes.push_back(pp.prime);
    return detail::construct_constrained(desc.value(), reduce_mod(a, n), reduce_mod(b, n), w, primes);
}

/// A·x ≡ b (mod p^r) with <w, x> ≢ 0 (mod p), on the prime-power Smith form.
inline Result<ConstrainedSolution> solve_prime_power_constrained(const IntMatrix& a, std::span<const BigInt> b,
                                                                 std::span<const BigInt> w, const BigInt& p,
                                                                 unsigned long r) {
    if (w.size() != a.cols()) throw std::invalid_argument("solve_prime_power_constrained: w has the wrong length");
    const BigInt pr = pow(p, r);
    auto desc = solve_modular_prime_power(a, b, p, r);
    if (!desc) return desc.failure();
    const BigInt primes[] = {p};
    return detail::construct_constrained(desc.value(), reduce_mod(a, pr), reduce_mod(b, pr), w, primes);
}

}  // namespace modlin
