#pragma once

// Line-oriented problem and report files. Grammar (one directive per line,
// '#' starts a comment, blank lines ignored, directives in any order):
//
//   modulus <int>
//   factors <prime>[^<exp>] ...
//   dims <k> <l>
//   A                      followed by k lines of l integers
//   b <int> x k
//   w <int> x l
//   field rational | field prime <p>
//
// Integers are decimal with an optional sign and no size limit.

#include "modlin/arith.hpp"
#include "modlin/matrix.hpp"

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace modlin {

class ProblemFileError : public std::runtime_error {
public:
    ProblemFileError(std::size_t line, const std::string& what)
        : std::runtime_error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

struct FieldSpec {
    enum class Kind { rational, prime } kind = Kind::rational;
    BigInt prime;
};

struct ProblemFile {
    std::optional<BigInt> modulus;
    std::optional<PrimePowerFactorization> factors;
    std::size_t k = 0;
    std::size_t l = 0;
    IntMatrix A;
    IntVector b;
    std::optional<IntVector> w;
    std::optional<FieldSpec> field;
    bool has_dims = false;
    bool has_matrix = false;
};

namespace detail {

inline std::vector<std::string> split_words(const std::string& line) {
    std::vector<std::string> out;
    std::istringstream in(line);
    for (std::string word; in >> word;) out.push_back(word);
    return out;
}

inline std::string strip_comment(const std::string& line) {
    const auto hash = line.find('#');
    return hash == std::string::npos ? line : line.substr(0, hash);
}

inline BigInt parse_int_at(const std::string& word, std::size_t line, const std::string& field) {
    try {
        return parse_bigint(word);
    } catch (const std::invalid_argument&) {
        throw ProblemFileError(line, field + ": '" + word + "' is not a decimal integer");
    }
}

inline std::size_t parse_size_at(const std::string& word, std::size_t line, const std::string& field) {
    BigInt v = parse_int_at(word, line, field);
    if (v < 0 || !v.fits_ulong_p()) throw ProblemFileError(line, field + ": '" + word + "' is not a valid size");
    return v.get_ui();
}

inline IntVector parse_ints(const std::vector<std::string>& words, std::size_t from, std::size_t line,
                            const std::string& field) {
    IntVector out;
    for (std::size_t i = from; i < words.size(); ++i) out.push_back(parse_int_at(words[i], line, field));
    return out;
}

inline PrimePower parse_prime_power(const std::string& word, std::size_t line) {
    const auto caret = word.find('^');
    PrimePower pp;
    pp.prime = parse_int_at(word.substr(0, caret), line, "factors");
    pp.exponent = caret == std::string::npos ? 1 : parse_size_at(word.substr(caret + 1), line, "factors");
    return pp;
}

}  // namespace detail

/// Parses "p^r p^r ..." as used by --factors and the factors directive.
inline PrimePowerFactorization parse_factor_list(const std::vector<std::string>& words, std::size_t line = 0) {
    PrimePowerFactorization f;
    for (const auto& w : words) f.factors.push_back(detail::parse_prime_power(w, line));
    if (f.factors.empty()) throw ProblemFileError(line, "factors: empty list");
    return f;
}

inline ProblemFile parse_problem(std::istream& in) {
    ProblemFile pf;
    std::vector<std::string> raw;
    for (std::string line; std::getline(in, line);) raw.push_back(line);

    std::optional<std::size_t> b_line, w_line;
    for (std::size_t idx = 0; idx < raw.size(); ++idx) {
        const std::size_t line_no = idx + 1;
        const auto words = detail::split_words(detail::strip_comment(raw[idx]));
        if (words.empty()) continue;
        const std::string& key = words[0];
        if (key == "modulus") {
            if (words.size() != 2) throw ProblemFileError(line_no, "modulus: expected one integer");
            pf.modulus = detail::parse_int_at(words[1], line_no, "modulus");
            if (*pf.modulus < 2) throw ProblemFileError(line_no, "modulus: must be >= 2");
        } else if (key == "factors") {
            pf.factors = parse_factor_list({words.begin() + 1, words.end()}, line_no);
        } else if (key == "dims") {
            if (words.size() != 3) throw ProblemFileError(line_no, "dims: expected 'dims <k> <l>'");
            pf.k = detail::parse_size_at(words[1], line_no, "dims");
            pf.l = detail::parse_size_at(words[2], line_no, "dims");
            pf.has_dims = true;
        } else if (key == "A") {
            if (!pf.has_dims) throw ProblemFileError(line_no, "A: 'dims' must come before the matrix");
            if (words.size() != 1) throw ProblemFileError(line_no, "A: matrix rows go on the following lines");
            pf.A = IntMatrix(pf.k, pf.l);
            for (std::size_t r = 0; r < pf.k; ++r) {
                // next non-empty, non-comment line
                std::vector<std::string> row;
                while (++idx < raw.size()) {
                    row = detail::split_words(detail::strip_comment(raw[idx]));
                    if (!row.empty()) break;
                }
                if (row.empty()) {
                    throw ProblemFileError(line_no, "A: expected " + std::to_string(pf.k) + " rows, found " +
                                                        std::to_string(r));
                }
                if (row.size() != pf.l) {
                    throw ProblemFileError(idx + 1, "A: row " + std::to_string(r + 1) + " has " +
                                                        std::to_string(row.size()) + " entries, expected " +
                                                        std::to_string(pf.l));
                }
                for (std::size_t j = 0; j < pf.l; ++j) pf.A(r, j) = detail::parse_int_at(row[j], idx + 1, "A");
            }
            pf.has_matrix = true;
        } else if (key == "b") {
            pf.b = detail::parse_ints(words, 1, line_no, "b");
            b_line = line_no;
        } else if (key == "w") {
            pf.w = detail::parse_ints(words, 1, line_no, "w");
            w_line = line_no;
        } else if (key == "field") {
            FieldSpec fs;
            if (words.size() == 2 && words[1] == "rational") {
                fs.kind = FieldSpec::Kind::rational;
            } else if (words.size() == 3 && words[1] == "prime") {
                fs.kind = FieldSpec::Kind::prime;
                fs.prime = detail::parse_int_at(words[2], line_no, "field");
                if (!is_probable_prime(fs.prime)) throw ProblemFileError(line_no, "field: " + words[2] + " is not prime");
            } else {
                throw ProblemFileError(line_no, "field: expected 'field rational' or 'field prime <p>'");
            }
            pf.field = fs;
        } else {
            throw ProblemFileError(line_no, "unknown directive '" + key + "'");
        }
    }

    if (!pf.has_matrix) throw ProblemFileError(0, "missing matrix block 'A'");
    if (b_line && pf.b.size() != pf.k) {
        throw ProblemFileError(*b_line, "b: has " + std::to_string(pf.b.size()) + " entries, expected " +
                                            std::to_string(pf.k));
    }
    if (w_line && pf.w->size() != pf.l) {
        throw ProblemFileError(*w_line, "w: has " + std::to_string(pf.w->size()) + " entries, expected " +
                                            std::to_string(pf.l));
    }
    if (pf.factors && pf.modulus) {
        try {
            pf.factors = validated(*pf.factors, *pf.modulus);
        } catch (const FactorizationError& e) {
            throw ProblemFileError(0, std::string("factors: ") + e.what());
        }
    }
    return pf;
}

inline ProblemFile parse_problem(const std::string& text) {
    std::istringstream in(text);
    return parse_problem(in);
}

inline void write_problem(std::ostream& os, const ProblemFile& pf) {
    if (pf.modulus) os << "modulus " << *pf.modulus << '\n';
    if (pf.factors) {
        os << "factors";
        for (const auto& f : pf.factors->factors) os << ' ' << f.prime << '^' << f.exponent;
        os << '\n';
    }
    if (pf.field) {
        os << "field " << (pf.field->kind == FieldSpec::Kind::rational ? "rational" : "prime " + to_string(pf.field->prime))
           << '\n';
    }
    os << "dims " << pf.k << ' ' << pf.l << "\nA\n" << pf.A;
    if (!pf.b.empty() || pf.k == 0) {
        os << 'b';
        for (const auto& v : pf.b) os << ' ' << v;
        os << '\n';
    }
    if (pf.w) {
        os << 'w';
        for (const auto& v : *pf.w) os << ' ' << v;
        os << '\n';
    }
}

/// The part of a solve report that --verify reads back.
struct SolutionReport {
    std::string status;  // "solved" or "no-solution"
    BigInt modulus;
    IntVector x;
    std::optional<BigInt> phi;
};

inline SolutionReport parse_report(std::istream& in) {
    SolutionReport rep;
    bool have_status = false, have_modulus = false;
    std::size_t line_no = 0;
    for (std::string line; std::getline(in, line);) {
        ++line_no;
        const auto words = detail::split_words(detail::strip_comment(line));
        if (words.empty()) continue;
        if (words[0] == "status" && words.size() == 2) {
            rep.status = words[1];
            have_status = true;
        } else if (words[0] == "modulus" && words.size() == 2) {
            rep.modulus = detail::parse_int_at(words[1], line_no, "modulus");
            have_modulus = true;
        } else if (words[0] == "x") {
            rep.x = detail::parse_ints(words, 1, line_no, "x");
        } else if (words[0] == "phi" && words.size() == 2) {
            rep.phi = detail::parse_int_at(words[1], line_no, "phi");
        }
    }
    if (!have_status) throw ProblemFileError(0, "report: missing 'status' line");
    if (rep.status == "solved" && !have_modulus) throw ProblemFileError(0, "report: missing 'modulus' line");
    return rep;
}

}  // namespace modlin
