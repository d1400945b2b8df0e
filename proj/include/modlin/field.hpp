#pragma once

#include "modlin/bigint.hpp"
#include "modlin/matrix.hpp"
#include "modlin/result.hpp"

#include <gmpxx.h>

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace modlin {

/// Exact rationals; mpq_class keeps every value a reduced fraction.
struct RationalField {
    using value_type = mpq_class;

    value_type from_integer(const BigInt& v) const { return value_type(v); }
    value_type zero() const { return 0; }
    value_type one() const { return 1; }
    bool is_zero(const value_type& v) const { return v == 0; }
    value_type add(const value_type& a, const value_type& b) const { return a + b; }
    value_type sub(const value_type& a, const value_type& b) const { return a - b; }
    value_type mul(const value_type& a, const value_type& b) const { return a * b; }
    value_type div(const value_type& a, const value_type& b) const { return a / b; }
    std::string to_string(const value_type& v) const { return v.get_str(10); }
    std::string name() const { return "Q"; }
};

/// Residues modulo a prime, stored in [0, p).
class PrimeField {
public:
    using value_type = BigInt;

    explicit PrimeField(BigInt p) : p_(std::move(p)) {
        if (!is_probable_prime(p_)) throw std::invalid_argument("prime field: " + modlin::to_string(p_) + " is not prime");
    }

    const BigInt& characteristic() const noexcept { return p_; }
    value_type from_integer(const BigInt& v) const { return mod_floor(v, p_); }
    value_type zero() const { return 0; }
    value_type one() const { return 1; }
    bool is_zero(const value_type& v) const { return v == 0; }
    value_type add(const value_type& a, const value_type& b) const { return mod_floor(a + b, p_); }
    value_type sub(const value_type& a, const value_type& b) const { return mod_floor(a - b, p_); }
    value_type mul(const value_type& a, const value_type& b) const { return mod_floor(a * b, p_); }
    value_type div(const value_type& a, const value_type& b) const {
        BigInt inv;
        if (mpz_invert(inv.get_mpz_t(), b.get_mpz_t(), p_.get_mpz_t()) == 0) {
            throw std::domain_error("division by zero in F_" + modlin::to_string(p_));
        }
        return mul(a, inv);
    }
    std::string to_string(const value_type& v) const { return modlin::to_string(v); }
    std::string name() const { return "F_" + modlin::to_string(p_); }

private:
    BigInt p_;
};

template <typename Field>
using FieldVector = std::vector<typename Field::value_type>;

/// A matrix whose entries live in `field`.
template <typename Field>
struct FieldMatrix {
    Field field;
    Matrix<typename Field::value_type> entries;

    static FieldMatrix from_integers(Field field, const IntMatrix& m) {
        FieldMatrix out{field, Matrix<typename Field::value_type>(m.rows(), m.cols(), field.zero())};
        for (std::size_t i = 0; i < m.rows(); ++i)
            for (std::size_t j = 0; j < m.cols(); ++j) out.entries(i, j) = field.from_integer(m(i, j));
        return out;
    }

    std::size_t rows() const { return entries.rows(); }
    std::size_t cols() const { return entries.cols(); }
};

template <typename Field>
FieldVector<Field> to_field(const Field& field, std::span<const BigInt> v) {
    FieldVector<Field> out;
    out.reserve(v.size());
    for (const auto& x : v) out.push_back(field.from_integer(x));
    return out;
}

template <typename Field>
struct EchelonForm {
    Matrix<typename Field::value_type> reduced;
    std::vector<std::size_t> pivot_cols;
};

/// Reduced row echelon form; the pivot is the first nonzero entry in column order.
template <typename Field>
EchelonForm<Field> rref(const Field& K, Matrix<typename Field::value_type> m) {
    EchelonForm<Field> out;
    std::size_t row = 0;
    for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
        std::size_t pivot = row;
        while (pivot < m.rows() && K.is_zero(m(pivot, col))) ++pivot;
        if (pivot == m.rows()) continue;
        m.swap_rows(row, pivot);
        const auto lead = m(row, col);
        for (std::size_t j = 0; j < m.cols(); ++j) m(row, j) = K.div(m(row, j), lead);
        for (std::size_t i = 0; i < m.rows(); ++i) {
            if (i == row || K.is_zero(m(i, col))) continue;
            const auto f = m(i, col);
            for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = K.sub(m(i, j), K.mul(f, m(row, j)));
        }
        out.pivot_cols.push_back(col);
        ++row;
    }
    out.reduced = std::move(m);
    return out;
}

template <typename Field>
std::size_t rank(const FieldMatrix<Field>& m) {
    return rref(m.field, m.entries).pivot_cols.size();
}

/// One basis vector per free column of the echelon form.
template <typename Field>
std::vector<FieldVector<Field>> kernel_basis(const FieldMatrix<Field>& m) {
    const Field& K = m.field;
    const auto e = rref(K, m.entries);
    std::vector<bool> is_pivot(m.cols(), false);
    for (auto c : e.pivot_cols) is_pivot[c] = true;
    std::vector<FieldVector<Field>> basis;
    for (std::size_t free = 0; free < m.cols(); ++free) {
        if (is_pivot[free]) continue;
        FieldVector<Field> v(m.cols(), K.zero());
        v[free] = K.one();
        for (std::size_t r = 0; r < e.pivot_cols.size(); ++r) {
            v[e.pivot_cols[r]] = K.sub(K.zero(), e.reduced(r, free));
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

template <typename Field>
typename Field::value_type field_dot(const Field& K, std::span<const typename Field::value_type> a,
                                     std::span<const typename Field::value_type> b) {
    auto s = K.zero();
    for (std::size_t i = 0; i < a.size(); ++i) s = K.add(s, K.mul(a[i], b[i]));
    return s;
}

template <typename Field>
FieldVector<Field> field_apply(const FieldMatrix<Field>& m, std::span<const typename Field::value_type> x) {
    FieldVector<Field> out(m.rows(), m.field.zero());
    for (std::size_t i = 0; i < m.rows(); ++i)
        for (std::size_t j = 0; j < m.cols(); ++j)
            out[i] = m.field.add(out[i], m.field.mul(m.entries(i, j), x[j]));
    return out;
}

template <typename Field>
struct FieldSolution {
    FieldVector<Field> x;
    FieldVector<Field> base_solution;  // x₀ with free variables set to zero
    std::size_t kernel_dimension = 0;
};

namespace detail {

template <typename Field>
Matrix<typename Field::value_type> append_column(const FieldMatrix<Field>& a,
                                                 std::span<const typename Field::value_type> col) {
    Matrix<typename Field::value_type> out(a.rows(), a.cols() + 1, a.field.zero());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a.entries(i, j);
        out(i, a.cols()) = col[i];
    }
    return out;
}

template <typename Field>
Matrix<typename Field::value_type> append_row(const Matrix<typename Field::value_type>& a,
                                              std::span<const typename Field::value_type> row) {
    Matrix<typename Field::value_type> out(a.rows() + 1, a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j);
    for (std::size_t j = 0; j < a.cols(); ++j) out(a.rows(), j) = row[j];
    return out;
}

}  // namespace detail

/// A·x = b with <w, x> ≠ 0: take a particular solution x₀; if <w, x₀> = 0,
/// add the first kernel basis vector v with <w, v> ≠ 0.
template <typename Field>
Result<FieldSolution<Field>> solve_field_constrained(const FieldMatrix<Field>& a,
                                                     std::span<const typename Field::value_type> b,
                                                     std::span<const typename Field::value_type> w) {
    const Field& K = a.field;
    if (b.size() != a.rows() || w.size() != a.cols()) {
        throw std::invalid_argument("solve_field_constrained: dimension mismatch");
    }
    const auto e = rref(K, detail::append_column(a, b));
    if (!e.pivot_cols.empty() && e.pivot_cols.back() == a.cols()) {
        NoSolution f;
        f.cause = NoSolution::Cause::inconsistent_system;
        return f;
    }
    FieldSolution<Field> out;
    out.base_solution.assign(a.cols(), K.zero());
    for (std::size_t r = 0; r < e.pivot_cols.size(); ++r) out.base_solution[e.pivot_cols[r]] = e.reduced(r, a.cols());

    const auto kernel = kernel_basis(a);
    out.kernel_dimension = kernel.size();
    out.x = out.base_solution;
    if (K.is_zero(field_dot<Field>(K, w, out.x))) {
        bool found = false;
        for (const auto& v : kernel) {
            if (!K.is_zero(field_dot<Field>(K, w, v))) {
                for (std::size_t i = 0; i < v.size(); ++i) out.x[i] = K.add(out.x[i], v[i]);
                found = true;
                break;
            }
        }
        if (!found) {
            NoSolution f;
            f.cause = NoSolution::Cause::functional_vanishes;
            return f;
        }
    }
    const auto ax = field_apply(a, std::span<const typename Field::value_type>(out.x));
    for (std::size_t i = 0; i < ax.size(); ++i) {
        if (ax[i] != b[i]) throw std::logic_error("field solution failed substitution check");
    }
    if (K.is_zero(field_dot<Field>(K, w, out.x))) throw std::logic_error("field solution has <w, x> = 0");
    return out;
}

class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// For ker A = 0: a constrained solution exists iff
/// rank [A; wᵀ] < rank [[A, b], [wᵀ, 0]].
template <typename Field>
bool unique_case_check(const FieldMatrix<Field>& a, std::span<const typename Field::value_type> b,
                       std::span<const typename Field::value_type> w) {
    const Field& K = a.field;
    if (rank(a) != a.cols()) throw ContractViolation("unique_case_check: A has a nontrivial kernel");
    const auto stacked = detail::append_row<Field>(a.entries, w);
    FieldVector<Field> w_ext(w.begin(), w.end());
    w_ext.push_back(K.zero());
    const auto full = detail::append_row<Field>(detail::append_column(a, b), w_ext);
    return rref(K, stacked).pivot_cols.size() < rref(K, full).pivot_cols.size();
}

}  // namespace modlin
