#pragma once

#include "modlin/bigint.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>

namespace modlin {

/// Why a system has no (constrained) solution.
struct NoSolution {
    enum class Cause {
        nonzero_tail,         // Pb has a nonzero entry past the rank
        invariant_factor,     // f_i does not divide the i-th entry of Pb
        coprimality,          // <w, x> ≡ 0 (mod prime) on every solution
        inconsistent_system,  // field case: rank A < rank [A | b]
        functional_vanishes,  // field case: <w, x> = 0 on every solution
    };

    Cause cause = Cause::invariant_factor;
    std::size_t index = 0;  // 1-based index of the failing invariant factor / row
    BigInt factor;          // f_i
    BigInt value;           // entry of Pb
    BigInt prime;           // failing prime for coprimality
    BigInt modulus;         // modulus of the subproblem that failed (0 if not set)

    std::string message() const {
        std::string m;
        switch (cause) {
            case Cause::nonzero_tail:
                m = "entry " + std::to_string(index) + " of Pb is " + to_string(value) + " beyond the rank";
                break;
            case Cause::invariant_factor:
                m = "invariant factor " + to_string(factor) + " does not divide " + to_string(value);
                break;
            case Cause::coprimality:
                m = "<w,x> is divisible by " + to_string(prime) + " for every solution";
                break;
            case Cause::inconsistent_system:
                m = "inconsistent system";
                break;
            case Cause::functional_vanishes:
                m = "functional vanishes on all solutions";
                break;
        }
        if (modulus != 0) m = "modulo " + to_string(modulus) + ": " + m;
        return m;
    }
};

/// Either a value or the reason it does not exist.
template <typename T>
class Result {
public:
    Result(T value) : v_(std::move(value)) {}
    Result(NoSolution failure) : v_(std::move(failure)) {}

    bool ok() const noexcept { return v_.index() == 0; }
    explicit operator bool() const noexcept { return ok(); }

    const T& value() const {
        if (!ok()) throw std::logic_error("Result::value on failure: " + failure().message());
        return std::get<0>(v_);
    }
    T& value() {
        if (!ok()) throw std::logic_error("Result::value on failure: " + failure().message());
        return std::get<0>(v_);
    }
    const NoSolution& failure() const { return std::get<1>(v_); }

private:
    std::variant<T, NoSolution> v_;
};

}  // namespace modlin
