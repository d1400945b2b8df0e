#pragma once

#include "modlin/bigint.hpp"

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace modlin {

/// max k with p^k | a. Returns nullopt for a == 0 (infinite valuation).
inline std::optional<unsigned long> valuation(const BigInt& a, const BigInt& p) {
    if (p < 2) throw std::invalid_argument("valuation: base must be >= 2");
    if (a == 0) return std::nullopt;
    BigInt rest = a;
    return mpz_remove(rest.get_mpz_t(), rest.get_mpz_t(), p.get_mpz_t());
}

/// Valuation capped at cap; zero counts as cap.
inline unsigned long valuation_capped(const BigInt& a, const BigInt& p, unsigned long cap) {
    auto v = valuation(a, p);
    return v ? std::min(*v, cap) : cap;
}

/// Base-`base` expansion of a residue, least significant digit first.
struct PAdicDigits {
    BigInt base;
    std::vector<BigInt> digits;

    std::size_t precision() const noexcept { return digits.size(); }

    /// Σ digits[i]·base^i
    BigInt value() const {
        BigInt v = 0;
        for (auto it = digits.rbegin(); it != digits.rend(); ++it) v = v * base + *it;
        return v;
    }
};

/// Digits of (a mod base^len). Negative a is reduced into [0, base^len) first.
inline PAdicDigits to_digits(const BigInt& a, const BigInt& base, std::size_t len) {
    if (base < 2) throw std::invalid_argument("to_digits: base must be >= 2");
    if (len == 0) throw std::invalid_argument("to_digits: length must be >= 1");
    PAdicDigits out{base, {}};
    out.digits.reserve(len);
    BigInt rest = mod_floor(a, pow(base, len));
    for (std::size_t i = 0; i < len; ++i) {
        BigInt digit;
        mpz_fdiv_qr(rest.get_mpz_t(), digit.get_mpz_t(), rest.get_mpz_t(), base.get_mpz_t());
        out.digits.push_back(std::move(digit));
    }
    return out;
}

struct Residue {
    BigInt value;
    BigInt modulus;
};

/// Combines x ≡ value_i (mod modulus_i) for pairwise-coprime moduli into the
/// unique representative in [0, Π modulus_i).
inline BigInt crt_pair(std::span<const Residue> residues) {
    for (std::size_t i = 0; i < residues.size(); ++i) {
        if (residues[i].modulus < 1) {
            throw std::invalid_argument("crt: modulus " + to_string(residues[i].modulus) + " is not positive");
        }
        for (std::size_t j = i + 1; j < residues.size(); ++j) {
            if (gcd(residues[i].modulus, residues[j].modulus) != 1) {
                throw std::invalid_argument("crt: moduli " + to_string(residues[i].modulus) + " and " +
                                            to_string(residues[j].modulus) + " (entries " + std::to_string(i) +
                                            ", " + std::to_string(j) + ") are not coprime");
            }
        }
    }
    BigInt product = 1;
    for (const auto& r : residues) product *= r.modulus;
    BigInt x = 0;
    for (const auto& r : residues) {
        if (r.modulus == 1) continue;
        BigInt cofactor = product / r.modulus;
        BigInt inv;
        mpz_invert(inv.get_mpz_t(), BigInt(cofactor % r.modulus).get_mpz_t(), r.modulus.get_mpz_t());
        x += mod_floor(r.value, r.modulus) * inv % r.modulus * cofactor;
    }
    return mod_floor(x, product);
}

inline BigInt crt_pair(std::initializer_list<Residue> residues) {
    return crt_pair(std::span<const Residue>(residues.begin(), residues.size()));
}

struct PrimePower {
    BigInt prime;
    unsigned long exponent = 0;

    BigInt value() const { return pow(prime, exponent); }
    friend bool operator==(const PrimePower&, const PrimePower&) = default;
};

/// n = Π p^r over distinct primes, sorted by ascending prime.
struct PrimePowerFactorization {
    std::vector<PrimePower> factors;

    BigInt product() const {
        BigInt n = 1;
        for (const auto& f : factors) n *= f.value();
        return n;
    }

    friend bool operator==(const PrimePowerFactorization&, const PrimePowerFactorization&) = default;
};

class FactorizationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Sorts the factors and checks them against n: distinct probable primes,
/// positive exponents, product equal to n.
inline PrimePowerFactorization validated(PrimePowerFactorization f, const BigInt& n) {
    std::sort(f.factors.begin(), f.factors.end(),
              [](const PrimePower& a, const PrimePower& b) { return a.prime < b.prime; });
    for (std::size_t i = 0; i < f.factors.size(); ++i) {
        const auto& pp = f.factors[i];
        if (pp.exponent == 0) {
            throw FactorizationError("factor " + to_string(pp.prime) + " has exponent 0");
        }
        if (!is_probable_prime(pp.prime)) {
            throw FactorizationError("factor " + to_string(pp.prime) + " is not prime");
        }
        if (i > 0 && f.factors[i - 1].prime == pp.prime) {
            throw FactorizationError("prime " + to_string(pp.prime) + " listed twice");
        }
    }
    if (f.product() != n) {
        throw FactorizationError("factors multiply to " + to_string(f.product()) + ", not " + to_string(n));
    }
    return f;
}

}  // namespace modlin
