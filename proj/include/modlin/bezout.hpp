#pragma once

#include "modlin/arith.hpp"
#include "modlin/matrix.hpp"

#include <cstddef>
#include <cstdint>
#include <span>
#include <initializer_list>
#include <stdexcept>
#include <type_traits>
#include <vector>

namespace modlin {

/// Operation counts for one Bezout computation. Tests and the bench
/// subcommand read these.
struct BezoutDiagnostics {
    std::size_t inversions = 0;         // inversions modulo the digit base
    std::size_t digit_products = 0;     // digit multiplications
    std::size_t carries = 0;            // quotients by the digit base
    std::size_t general_divisions = 0;  // divisions by anything else

    BezoutDiagnostics& operator+=(const BezoutDiagnostics& o) {
        inversions += o.inversions;
        digit_products += o.digit_products;
        carries += o.carries;
        general_divisions += o.general_divisions;
        return *this;
    }
};

/// a·x + modulus·y_final = g, exactly over Z.
///
/// `y` is the digit-vector value produced by the iteration and lies in
/// [0, modulus); `correction` is what has to be subtracted from it to make the
/// identity exact (y_final = y − correction).
struct BezoutCertificate {
    BigInt a;
    BigInt modulus;
    BigInt x;
    BigInt y;
    BigInt correction;
    BigInt y_final;
    BigInt g;
    unsigned long g_exponent = 0;
    BezoutDiagnostics diagnostics;

    bool holds() const { return a * x + modulus * y_final == g; }
};

class NotCoprimeError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

template <typename Word>
struct DigitIteration {
    std::vector<Word> x;
    std::vector<Word> y;
    Word carry;
};

inline std::uint64_t floor_mod(std::uint64_t v, std::uint64_t m) { return v % m; }
inline BigInt floor_mod(const BigInt& v, const BigInt& m) { return mod_floor(v, m); }
inline std::uint64_t floor_div(std::uint64_t v, std::uint64_t m) { return v / m; }
inline BigInt floor_div(const BigInt& v, const BigInt& m) { return div_floor(v, m); }

/// Digit-by-digit solution of a·x ≡ 1 (mod base^len) followed by the carry
/// digits y with a·x + base^len·y = 1 + base^(2·len)·carry.
///
/// Every step is a product of digits, a reduction modulo `base` or a quotient
/// by `base`; the only inversion is that of a[0], passed in by the caller.
template <typename Word>
DigitIteration<Word> digit_bezout(std::span<const Word> a, const Word& base, const Word& a0_inverse,
                                  BezoutDiagnostics& diag) {
    const std::size_t len = a.size();
    DigitIteration<Word> out{std::vector<Word>(len, Word(0)), std::vector<Word>(len, Word(0)), Word(0)};
    auto& x = out.x;
    auto& y = out.y;
    Word carry = 0;

    for (std::size_t k = 0; k < len; ++k) {
        Word t = carry;
        for (std::size_t i = 1; i <= k; ++i) {
            t += a[i] * x[k - i];
            ++diag.digit_products;
        }
        // a[0]·x[k] + t ≡ (k == 0 ? 1 : 0) (mod base)
        Word target = k == 0 ? Word(1) : Word(0);
        Word rhs = floor_mod(Word(target + base - floor_mod(t, base)), base);
        x[k] = floor_mod(Word(rhs * a0_inverse), base);
        t += a[0] * x[k];
        diag.digit_products += 2;
        carry = floor_div(t, base);
        ++diag.carries;
    }

    for (std::size_t j = 0; j < len; ++j) {
        Word t = carry;
        for (std::size_t i = j + 1; i < len; ++i) {
            t += a[i] * x[len + j - i];
            ++diag.digit_products;
        }
        y[j] = floor_mod(Word(base - floor_mod(t, base)), base);
        t += y[j];
        carry = floor_div(t, base);
        ++diag.carries;
    }
    out.carry = carry;
    return out;
}

template <typename Word>
BigInt digits_value(const std::vector<Word>& digits, const BigInt& base) {
    BigInt v = 0;
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) {
        if constexpr (std::is_same_v<Word, BigInt>) {
            v = v * base + *it;
        } else {
            v = v * base + from_u64(*it);
        }
    }
    return v;
}

// Machine words are safe while len·base² plus the carry stays below 2^64.
inline bool word_path_fits(const BigInt& base, std::size_t len) {
    return base < (BigInt(1) << 20) && len < (std::size_t{1} << 20);
}

/// Certificate for a ≡ a_res (mod base^len), p ∤ a_res, in base `base`.
inline BezoutCertificate hensel_certificate(const BigInt& a, const BigInt& base, std::size_t len) {
    BezoutCertificate cert;
    cert.a = a;
    cert.modulus = pow(base, len);
    cert.g = 1;
    cert.g_exponent = 0;
    auto& diag = cert.diagnostics;

    const BigInt a_res = mod_floor(a, cert.modulus);
    PAdicDigits digits = to_digits(a_res, base, len);
    diag.carries += len;

    BigInt inv;
    if (mpz_invert(inv.get_mpz_t(), digits.digits[0].get_mpz_t(), base.get_mpz_t()) == 0) {
        throw NotCoprimeError("not coprime: leading digit of " + to_string(a) + " is not invertible modulo " +
                              to_string(base));
    }
    ++diag.inversions;

    BigInt carry;
    if (word_path_fits(base, len)) {
        std::vector<std::uint64_t> a_words;
        a_words.reserve(len);
        for (const auto& d : digits.digits) a_words.push_back(to_u64(d));
        auto it = digit_bezout<std::uint64_t>(a_words, to_u64(base), to_u64(inv), diag);
        cert.x = digits_value(it.x, base);
        cert.y = digits_value(it.y, base);
        carry = from_u64(it.carry);
    } else {
        auto it = digit_bezout<BigInt>(digits.digits, base, inv, diag);
        cert.x = digits_value(it.x, base);
        cert.y = digits_value(it.y, base);
        carry = it.carry;
    }

    // a_res·x + m·y = 1 + m²·carry; fold the carry and the reduction of a back in.
    cert.y_final = cert.y - cert.modulus * carry;
    if (a != a_res) {
        BigInt lift;
        mpz_divexact(lift.get_mpz_t(), BigInt(a - a_res).get_mpz_t(), cert.modulus.get_mpz_t());
        cert.y_final -= lift * cert.x;
    }
    cert.correction = cert.y - cert.y_final;
    return cert;
}

inline void require_prime(const BigInt& p) {
    if (!is_probable_prime(p)) throw std::invalid_argument(to_string(p) + " is not prime");
}

}  // namespace detail

/// a·x + p^d·y_final = 1 for p ∤ a, using one inversion modulo p and
/// otherwise only digit arithmetic modulo p and carries by p.
inline BezoutCertificate bezout_single_padic(const BigInt& a, const BigInt& p, unsigned long d) {
    detail::require_prime(p);
    if (d == 0) throw std::invalid_argument("bezout_single_padic: precision must be >= 1");
    if (mod_floor(a, p) == 0) {
        throw NotCoprimeError("not coprime: " + to_string(p) + " divides " + to_string(a));
    }
    return detail::hensel_certificate(a, p, d);
}

/// a·x + p^r·y_final = p^min(v_p(a), r) for arbitrary a.
inline BezoutCertificate bezout_single(const BigInt& a, const BigInt& p, unsigned long r) {
    detail::require_prime(p);
    if (r == 0) throw std::invalid_argument("bezout_single: exponent must be >= 1");
    const unsigned long v = valuation_capped(a, p, r);
    if (v == r) {
        BezoutCertificate cert;
        cert.a = a;
        cert.modulus = pow(p, r);
        cert.x = 0;
        cert.y = 1;
        cert.y_final = 1;
        cert.correction = 0;
        cert.g = cert.modulus;
        cert.g_exponent = r;
        return cert;
    }
    const BigInt pv = pow(p, v);
    BigInt stripped;
    mpz_divexact(stripped.get_mpz_t(), a.get_mpz_t(), pv.get_mpz_t());

    BezoutCertificate inner = detail::hensel_certificate(stripped, p, r - v);
    BezoutCertificate cert = inner;
    cert.a = a;
    cert.modulus = pow(p, r);
    cert.g = pv;
    cert.g_exponent = v;
    return cert;
}

/// 2×2 reducer together with its gcd exponent and counters.
struct PairReducer {
    IntMatrix Q;
    BigInt g;
    unsigned long g_exponent = 0;
    BezoutDiagnostics diagnostics;
};

/// [a, p^r]·Q = [g, 0] with |det Q| = 1 and g = p^min(v_p(a), r).
inline PairReducer reduce_pair(const BigInt& a, const BigInt& p, unsigned long r) {
    PairReducer out;
    const BigInt pr = pow(p, r);
    const unsigned long v = valuation_capped(a, p, r);
    if (v == r) {
        // p^r | a: swap and clear.
        BigInt q;
        mpz_divexact(q.get_mpz_t(), a.get_mpz_t(), pr.get_mpz_t());
        out.Q = IntMatrix{{0, 1}, {1, -q}};
        out.g = pr;
        out.g_exponent = r;
        return out;
    }
    BezoutCertificate cert = bezout_single(a, p, r);
    BigInt stripped;
    mpz_divexact(stripped.get_mpz_t(), a.get_mpz_t(), cert.g.get_mpz_t());
    const BigInt pd = pow(p, r - v);
    out.Q = IntMatrix{{cert.x, -pd}, {cert.y_final, stripped}};
    out.g = cert.g;
    out.g_exponent = v;
    out.diagnostics = cert.diagnostics;
    return out;
}

inline IntMatrix unimodular_pair(const BigInt& a, const BigInt& p, unsigned long r) {
    detail::require_prime(p);
    if (r == 0) throw std::invalid_argument("unimodular_pair: exponent must be >= 1");
    return reduce_pair(a, p, r).Q;
}

/// [a_1, …, a_N, p^r]·Q = [g, 0, …, 0] with |det Q| = 1.
struct UnimodularColumnReducer {
    IntMatrix Q;
    BigInt g;
    unsigned long g_exponent = 0;
    BezoutDiagnostics diagnostics;

    /// First column of Q: x_1..x_N followed by y.
    std::vector<BigInt> bezout_coefficients() const { return Q.column(0); }
};

/// Folds the elements into p^r from the right, one 2×2 reducer per step, so
/// every intermediate gcd is a power of p.
inline UnimodularColumnReducer bezout_multi(std::span<const BigInt> a, const BigInt& p, unsigned long r) {
    detail::require_prime(p);
    if (a.empty()) throw std::invalid_argument("bezout_multi: need at least one element");
    if (r == 0) throw std::invalid_argument("bezout_multi: exponent must be >= 1");
    const std::size_t n = a.size();
    UnimodularColumnReducer out;
    out.Q = IntMatrix::identity(n + 1);
    unsigned long exponent = r;
    for (std::size_t step = n; step-- > 0;) {
        PairReducer pair = reduce_pair(a[step], p, exponent);
        out.diagnostics += pair.diagnostics;
        // columns (step, step+1) of Q ← [col_step, col_step+1]·pair.Q
        for (std::size_t i = 0; i <= n; ++i) {
            BigInt left = out.Q(i, step);
            BigInt right = out.Q(i, step + 1);
            out.Q(i, step) = left * pair.Q(0, 0) + right * pair.Q(1, 0);
            out.Q(i, step + 1) = left * pair.Q(0, 1) + right * pair.Q(1, 1);
        }
        exponent = pair.g_exponent;
    }
    out.g_exponent = exponent;
    out.g = pow(p, exponent);
    return out;
}

inline UnimodularColumnReducer bezout_multi(std::initializer_list<BigInt> a, const BigInt& p, unsigned long r) {
    return bezout_multi(std::span<const BigInt>(a.begin(), a.size()), p, r);
}

/// Result of the base-q variant: the certificate is for (a', q^s) where a' is
/// a with its p-part p^stripped_exponent removed.
struct ByteBezoutCertificate {
    BezoutCertificate certificate;
    BigInt q;
    unsigned long s = 0;
    unsigned long stripped_exponent = 0;  // g = m·d + t
};

/// Bezout identity a'·x' + q^s·y' = 1 computed with base q = p^d digits.
/// With g = v_p(a) = m·d + t, s = r − m when t = 0 and r − m − 1 otherwise.
inline ByteBezoutCertificate bezout_byte(const BigInt& a, const BigInt& p, unsigned long d, unsigned long r) {
    detail::require_prime(p);
    if (d == 0 || r == 0) throw std::invalid_argument("bezout_byte: byte width and exponent must be >= 1");
    if (a == 0) throw NotCoprimeError("not coprime: cannot strip the p-part of 0");
    ByteBezoutCertificate out;
    out.q = pow(p, d);
    BigInt stripped = a;
    const unsigned long g = mpz_remove(stripped.get_mpz_t(), a.get_mpz_t(), p.get_mpz_t());
    if (g >= d * r) throw NotCoprimeError("not coprime: q^r divides " + to_string(a));
    const unsigned long m = g / d;
    const unsigned long t = g % d;
    out.stripped_exponent = g;
    out.s = r - m - (t > 0 ? 1 : 0);
    if (out.s == 0) {
        auto& c = out.certificate;
        c.a = stripped;
        c.modulus = 1;
        c.x = 0;
        c.y = 1;
        c.y_final = 1;
        c.correction = 0;
        c.g = 1;
        return out;
    }
    out.certificate = detail::hensel_certificate(stripped, out.q, out.s);
    return out;
}

/// Extended Euclid by repeated general division; the reference path the
/// digit iteration is measured against.
struct EuclidResult {
    BigInt g;
    BigInt x;
    BigInt y;
    std::size_t divisions = 0;
};

inline EuclidResult extended_euclid(const BigInt& a, const BigInt& b) {
    BigInt r0 = a, r1 = b;
    BigInt s0 = 1, s1 = 0;
    BigInt t0 = 0, t1 = 1;
    std::size_t divisions = 0;
    while (r1 != 0) {
        BigInt q, r;
        mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), r0.get_mpz_t(), r1.get_mpz_t());
        ++divisions;
        r0 = std::move(r1);
        r1 = std::move(r);
        BigInt s = s0 - q * s1;
        s0 = std::move(s1);
        s1 = std::move(s);
        BigInt t = t0 - q * t1;
        t0 = std::move(t1);
        t1 = std::move(t);
    }
    if (r0 < 0) {
        r0 = -r0;
        s0 = -s0;
        t0 = -t0;
    }
    return {r0, s0, t0, divisions};
}

/// Inverse of a modulo p^r by the digit iteration, in [0, p^r).
inline BigInt inverse_mod_prime_power(const BigInt& a, const BigInt& p, unsigned long r) {
    return bezout_single_padic(a, p, r).x;
}

}  // namespace modlin
