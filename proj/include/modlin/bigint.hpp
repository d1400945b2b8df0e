#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace modlin {

/// Arbitrary-precision signed integer. GMP keeps a canonical zero and an exact
/// decimal round trip, which is all the solvers rely on.
using BigInt = mpz_class;

/// Parses a decimal integer with an optional leading sign. Rejects anything else.
inline BigInt parse_bigint(std::string_view text) {
    std::size_t pos = 0;
    if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) ++pos;
    if (pos == text.size()) {
        throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
    }
    for (std::size_t i = pos; i < text.size(); ++i) {
        if (text[i] < '0' || text[i] > '9') {
            throw std::invalid_argument("not an integer: '" + std::string(text) + "'");
        }
    }
    std::string digits(text.substr(text[0] == '+' ? 1 : 0));
    return BigInt(digits, 10);
}

inline std::string to_string(const BigInt& a) { return a.get_str(10); }

/// Least nonnegative residue of a modulo m (m > 0).
inline BigInt mod_floor(const BigInt& a, const BigInt& m) {
    BigInt r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return r;
}

/// Floor quotient a div m.
inline BigInt div_floor(const BigInt& a, const BigInt& m) {
    BigInt q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
    return q;
}

inline BigInt pow(const BigInt& base, unsigned long exponent) {
    BigInt r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exponent);
    return r;
}

inline BigInt gcd(const BigInt& a, const BigInt& b) {
    BigInt g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return g;
}

inline BigInt abs(const BigInt& a) { return a < 0 ? BigInt(-a) : a; }

/// Probabilistic primality with a fixed number of Miller-Rabin rounds.
inline constexpr int kPrimalityRounds = 30;

inline bool is_probable_prime(const BigInt& p) {
    return p >= 2 && mpz_probab_prime_p(p.get_mpz_t(), kPrimalityRounds) != 0;
}

inline bool fits_u64(const BigInt& a) {
    return a >= 0 && mpz_sizeinbase(a.get_mpz_t(), 2) <= 64;
}

inline std::uint64_t to_u64(const BigInt& a) {
    std::uint64_t out = 0;
    mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, a.get_mpz_t());
    return out;
}

inline BigInt from_u64(std::uint64_t v) {
    BigInt r;
    mpz_import(r.get_mpz_t(), 1, -1, sizeof(v), 0, 0, &v);
    return r;
}

}  // namespace modlin
