#include "modlin/modlin.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace {

using namespace modlin;

enum Exit : int { kSolved = 0, kInputError = 1, kNoSolution = 2 };

class InputError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_text(const std::string& path) {
    if (path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path);
    if (!in) throw InputError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ProblemFile load_problem(const std::string& path) {
    try {
        return parse_problem(read_text(path));
    } catch (const ProblemFileError& e) {
        throw InputError(path + ": " + e.what());
    }
}

const BigInt& require_modulus(const ProblemFile& pf) {
    if (!pf.modulus) throw InputError("problem file has no 'modulus' line");
    return *pf.modulus;
}

std::vector<std::string> split_list(const std::string& s) {
    std::string spaced = s;
    std::replace(spaced.begin(), spaced.end(), ',', ' ');
    std::istringstream in(spaced);
    std::vector<std::string> out;
    for (std::string w; in >> w;) out.push_back(w);
    return out;
}

/// --factors wins over the file's factors line; otherwise factor n ourselves.
PrimePowerFactorization resolve_factors(const ProblemFile& pf, const std::string& flag) {
    const BigInt& n = require_modulus(pf);
    if (!flag.empty()) {
        try {
            return validated(parse_factor_list(split_list(flag)), n);
        } catch (const ProblemFileError& e) {
            throw InputError(std::string("--factors: ") + e.what());
        } catch (const FactorizationError& e) {
            throw InputError(std::string("--factors: ") + e.what());
        }
    }
    if (pf.factors) return *pf.factors;
    return factorize_fallback(n);
}

std::string join(std::span<const BigInt> v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) out += ' ';
        out += to_string(v[i]);
    }
    return out;
}

void print_matrix(std::ostream& os, const char* name, const IntMatrix& m) {
    os << name << ' ' << m.rows() << 'x' << m.cols() << '\n' << m;
}

void print_certificate(std::ostream& os, const std::string& label, const SmithDecomposition& d) {
    os << "certificate " << label << '\n';
    print_matrix(os, "P", d.P);
    print_matrix(os, "Q", d.Q);
    print_matrix(os, "S", d.S);
    os << "invariant_factors " << join(d.invariant_factors) << '\n';
}

std::string format_factors(const PrimePowerFactorization& f) {
    std::string out;
    for (const auto& pp : f.factors) {
        if (!out.empty()) out += ' ';
        out += to_string(pp.prime) + '^' + std::to_string(pp.exponent);
    }
    return out;
}

int report_failure(std::ostream& os, const BigInt& n, const NoSolution& f) {
    os << "status no-solution\nmodulus " << n << "\ncause " << f.message() << '\n';
    return kNoSolution;
}

/// Independent re-check of a claimed solution; returns the verification line.
std::string verify_solution(const ProblemFile& pf, std::span<const BigInt> x) {
    const BigInt& n = require_modulus(pf);
    if (x.size() != pf.l) throw InputError("x has " + std::to_string(x.size()) + " entries, expected " + std::to_string(pf.l));
    if (!is_solution(pf.A, pf.b, x, n)) throw InputError("verification failed: A·x ≢ b (mod " + to_string(n) + ")");
    std::string line = "verified: Ax≡b mod " + to_string(n);
    if (pf.w) {
        const BigInt phi = mod_floor(dot(*pf.w, x), n);
        if (gcd(phi, n) != 1) throw InputError("verification failed: gcd(φ," + to_string(n) + ") = " + to_string(gcd(phi, n)));
        line += ", gcd(φ," + to_string(n) + ")=1";
    }
    return line;
}

int check_report(const ProblemFile& pf, const SolutionReport& rep, std::ostream& os) {
    const BigInt& n = require_modulus(pf);
    if (rep.status == "solved") {
        if (rep.modulus != n) throw InputError("report modulus " + to_string(rep.modulus) + " differs from the problem's");
        os << verify_solution(pf, rep.x) << '\n';
        if (rep.phi && pf.w && mod_floor(*rep.phi - dot(*pf.w, rep.x), n) != 0) {
            throw InputError("verification failed: reported φ does not match <w,x>");
        }
        return kSolved;
    }
    if (rep.status == "no-solution") {
        const auto f = pf.factors ? *pf.factors : factorize_fallback(n);
        const bool solvable = pf.w ? solve_constrained(pf.A, pf.b, *pf.w, n, f).ok() : solve_modular(pf.A, pf.b, n).ok();
        if (solvable) throw InputError("verification failed: report claims no solution but one exists");
        os << "verified: no solution mod " << n << '\n';
        return kSolved;
    }
    throw InputError("report: unknown status '" + rep.status + "'");
}

struct SolveOptions {
    std::string file;
    std::string factors;
    std::string method = "crt";
    bool emit_certificates = false;
    bool verify = false;
    std::size_t jobs = 1;
};

int cmd_solve(const SolveOptions& opt) {
    const ProblemFile pf = load_problem(opt.file);
    const BigInt& n = require_modulus(pf);
    const PrimePowerFactorization f = resolve_factors(pf, opt.factors);

    std::ostringstream out;
    IntVector x;
    if (opt.method == "direct") {
        if (pf.w) {
            auto r = solve_constrained(pf.A, pf.b, *pf.w, n, f);
            if (!r) return report_failure(std::cout, n, r.failure());
            x = r.value().x;
        } else {
            auto r = solve_modular(pf.A, pf.b, n);
            if (!r) return report_failure(std::cout, n, r.failure());
            x = r.value().particular;
        }
    } else {
        auto r = pf.w ? solve_mod_n_constrained(pf.A, pf.b, *pf.w, n, f, opt.jobs) : solve_mod_n(pf.A, pf.b, n, f, opt.jobs);
        if (!r) return report_failure(std::cout, n, r.failure());
        x = r.value();
    }

    out << "status solved\nmodulus " << n << "\nfactors " << format_factors(f) << "\nx " << join(x) << '\n';
    if (pf.w) out << "phi " << mod_floor(dot(*pf.w, x), n) << '\n';
    out << verify_solution(pf, x) << '\n';

    if (opt.emit_certificates) {
        if (opt.method == "direct") {
            print_certificate(out, to_string(n), smith_form_augmented(reduce_mod(pf.A, n), n));
        } else {
            for (const auto& pp : f.factors) {
                const BigInt pr = pp.value();
                print_certificate(out, to_string(pp.prime) + '^' + std::to_string(pp.exponent),
                                  smith_form_prime_power(reduce_mod(pf.A, pr), pp.prime, pp.exponent));
            }
        }
    }
    std::cout << out.str();

    if (opt.verify) {
        std::istringstream back(out.str());
        std::ostringstream sink;
        check_report(pf, parse_report(back), sink);
        std::cout << "round-trip: report re-read and verified\n";
    }
    return kSolved;
}

int cmd_verify(const std::string& problem_path, const std::string& report_path) {
    const ProblemFile pf = load_problem(problem_path);
    std::istringstream in(read_text(report_path));
    SolutionReport rep;
    try {
        rep = parse_report(in);
    } catch (const ProblemFileError& e) {
        throw InputError(report_path + ": " + e.what());
    }
    return check_report(pf, rep, std::cout);
}

int cmd_smith(const std::string& file, bool emit_certificates) {
    const ProblemFile pf = load_problem(file);
    const SmithDecomposition d = smith_form(pf.A);
    std::cout << "rank " << d.rank << "\nfactors " << join(d.invariant_factors) << '\n';
    if (emit_certificates) print_certificate(std::cout, "A", d);
    if (pf.modulus) {
        const SmithDecomposition aug = smith_form_augmented(reduce_mod(pf.A, *pf.modulus), *pf.modulus);
        std::cout << "augmented_factors " << join(aug.invariant_factors) << '\n';
        std::cout << "unimodular_rank " << unimodular_rank(pf.A, *pf.modulus) << '\n';
        if (emit_certificates) print_certificate(std::cout, "[A,-nI]", aug);
    }
    return kSolved;
}

int cmd_bezout(const std::string& a_text, const std::string& p_text, unsigned long r, std::optional<unsigned long> byte) {
    const BigInt a = parse_bigint(a_text);
    const BigInt p = parse_bigint(p_text);
    if (r == 0) throw InputError("r must be positive");
    if (byte) {
        const ByteBezoutCertificate b = bezout_byte(a, p, *byte, r);
        const auto& c = b.certificate;
        std::cout << "q=" << b.q << " s=" << b.s << " x=" << c.x << " y=" << c.y_final << " g=" << c.g
                  << " inversions_mod_q=" << c.diagnostics.inversions << '\n'
                  << "stripped=" << p << '^' << b.stripped_exponent << " a'=" << c.a << " modulus=" << c.modulus
                  << " identity=" << (c.holds() ? "exact" : "FAILED") << '\n';
        return kSolved;
    }
    const BezoutCertificate c = bezout_single(a, p, r);
    std::cout << "x=" << c.x << " y=" << c.y_final << " g=" << c.g << " inversions_mod_p=" << c.diagnostics.inversions
              << '\n'
              << "digit_products=" << c.diagnostics.digit_products << " carries=" << c.diagnostics.carries
              << " general_divisions=" << c.diagnostics.general_divisions << " correction=" << c.correction << '\n';
    return kSolved;
}

int cmd_crt(const std::string& file, const std::string& factors_flag, std::size_t jobs) {
    const ProblemFile pf = load_problem(file);
    const BigInt& n = require_modulus(pf);
    const PrimePowerFactorization f = resolve_factors(pf, factors_flag);
    std::cout << "modulus " << n << "\nfactors " << format_factors(f) << '\n';
    for (const auto& pp : f.factors) {
        const std::string label = to_string(pp.prime) + '^' + std::to_string(pp.exponent);
        if (pf.w) {
            auto r = solve_prime_power_constrained(pf.A, pf.b, *pf.w, pp.prime, pp.exponent);
            if (!r) return report_failure(std::cout, n, detail::tag_modulus(r.failure(), pp.value()));
            std::cout << "residue " << label << " x " << join(r.value().x) << " x1 " << join(r.value().x1) << '\n';
        } else {
            auto r = solve_mod_pr(pf.A, pf.b, pp.prime, pp.exponent);
            if (!r) return report_failure(std::cout, n, r.failure());
            std::cout << "residue " << label << " x " << join(r.value().x) << '\n';
        }
    }
    auto r = pf.w ? solve_mod_n_constrained(pf.A, pf.b, *pf.w, n, f, jobs) : solve_mod_n(pf.A, pf.b, n, f, jobs);
    if (!r) return report_failure(std::cout, n, r.failure());
    std::cout << "status solved\nx " << join(r.value()) << '\n' << verify_solution(pf, r.value()) << '\n';
    return kSolved;
}

template <typename Field>
int field_report(const Field& K, const ProblemFile& pf) {
    if (!pf.w) throw InputError("field: the problem needs a 'w' line");
    const auto a = FieldMatrix<Field>::from_integers(K, pf.A);
    const auto b = to_field(K, std::span<const BigInt>(pf.b));
    const auto w = to_field(K, std::span<const BigInt>(*pf.w));
    std::cout << "field " << K.name() << '\n';
    const auto r = solve_field_constrained<Field>(a, b, w);
    const bool consistent = r.ok() || r.failure().cause != NoSolution::Cause::inconsistent_system;
    if (consistent && rank(a) == pf.l) {
        const bool rank_test = unique_case_check<Field>(a, b, w);
        if (rank_test != r.ok()) throw std::logic_error("rank test disagrees with the constructed solution");
        std::cout << "unique_case_check " << (rank_test ? "true" : "false") << '\n';
    }
    if (!r) {
        std::cout << "status no-solution\ncause " << r.failure().message() << '\n';
        return kNoSolution;
    }
    std::cout << "status solved\nx";
    for (const auto& v : r.value().x) std::cout << ' ' << K.to_string(v);
    std::cout << "\nphi " << K.to_string(field_dot<Field>(K, w, r.value().x)) << "\nkernel_dimension "
              << r.value().kernel_dimension << '\n';
    return kSolved;
}

int cmd_field(const std::string& file, const std::string& prime_flag) {
    const ProblemFile pf = load_problem(file);
    std::optional<BigInt> prime;
    if (!prime_flag.empty()) {
        prime = parse_bigint(prime_flag);
    } else if (pf.field && pf.field->kind == FieldSpec::Kind::prime) {
        prime = pf.field->prime;
    }
    if (prime) return field_report(PrimeField(*prime), pf);
    return field_report(RationalField{}, pf);
}

struct BenchOptions {
    std::vector<unsigned long> bits = {64, 128, 256, 512, 1024, 2048, 4096};
    unsigned long prime = 3;
    std::uint64_t seed = 1;
    std::size_t jobs = 4;
};

int cmd_bench(const BenchOptions& opt) {
    using clock = std::chrono::steady_clock;
    std::mt19937_64 rng(opt.seed);
    gmp_randclass gmp_rng(gmp_randinit_mt);
    gmp_rng.seed(static_cast<unsigned long>(opt.seed));
    const BigInt p = opt.prime;
    detail::require_prime(p);

    std::cout << "# p-adic Bezout vs extended Euclid for gcd(a, p^r), p=" << p << ", seed=" << opt.seed << '\n';
    std::cout << "# padic_ops: inversions + digit products + carries, all on digits below p\n";
    std::cout << "# euclid_ops: one general division and two coefficient updates per step\n";
    std::cout << "bits r padic_ops euclid_ops padic_inversions padic_general_divisions euclid_divisions padic_us euclid_us\n";

    bool zero_divisions = true;
    std::vector<std::size_t> euclid_counts;
    for (unsigned long bits : opt.bits) {
        const unsigned long r = std::max<unsigned long>(1, static_cast<unsigned long>(std::ceil(bits / std::log2(opt.prime))));
        const BigInt pr = pow(p, r);
        BigInt a = gmp_rng.get_z_range(pr);
        while (a % p == 0) a += 1;

        auto t0 = clock::now();
        const BezoutCertificate c = bezout_single_padic(a, p, r);
        auto t1 = clock::now();
        const EuclidResult e = extended_euclid(a, pr);
        auto t2 = clock::now();
        if (!c.holds() || e.g != 1 || mod_floor(c.x - e.x, pr) != 0) {
            std::cerr << "error: bench certificates disagree at " << bits << " bits\n";
            return kInputError;
        }
        const auto& dg = c.diagnostics;
        zero_divisions = zero_divisions && dg.general_divisions == 0 && dg.inversions == 1;
        euclid_counts.push_back(e.divisions);
        std::cout << bits << ' ' << r << ' ' << dg.inversions + dg.digit_products + dg.carries << ' ' << 3 * e.divisions
                  << ' ' << dg.inversions << ' ' << dg.general_divisions << ' ' << e.divisions << ' '
                  << std::chrono::duration_cast<std::chrono::microseconds>(t1 - t0).count() << ' '
                  << std::chrono::duration_cast<std::chrono::microseconds>(t2 - t1).count() << '\n';
    }
    const bool euclid_grows = euclid_counts.size() < 2 || euclid_counts.back() > euclid_counts.front();

    // CRT driver determinism across worker counts.
    const BigInt n = BigInt(8) * 9 * 25 * 7 * 11 * 13 * 17 * 19 * 23 * 29 * 31;
    const PrimePowerFactorization f = factorize_fallback(n);
    bool identical = true;
    const int systems = 20;
    for (int s = 0; s < systems; ++s) {
        IntMatrix A(3, 3);
        IntVector x(3), w(3);
        for (std::size_t i = 0; i < 3; ++i) {
            for (std::size_t j = 0; j < 3; ++j) A(i, j) = BigInt(static_cast<unsigned long>(rng() % 1000003));
            x[i] = BigInt(static_cast<unsigned long>(rng()));
            w[i] = BigInt(static_cast<unsigned long>(rng() % 1000003));
        }
        const IntVector b = reduce_mod(A * x, n);
        const auto one = solve_mod_n_constrained(A, b, w, n, f, 1);
        const auto many = solve_mod_n_constrained(A, b, w, n, f, std::max<std::size_t>(2, opt.jobs));
        identical = identical && one.ok() == many.ok() && (!one.ok() || one.value() == many.value());
    }
    std::cout << "padic_general_divisions_zero " << (zero_divisions ? "yes" : "no") << '\n'
              << "euclid_divisions_grow " << (euclid_grows ? "yes" : "no") << '\n'
              << "crt_jobs_identical " << (identical ? "yes" : "no") << " (jobs 1 vs "
              << std::max<std::size_t>(2, opt.jobs) << ", " << systems << " systems mod " << n << ")\n";
    return zero_divisions && euclid_grows && identical ? kSolved : kInputError;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Modular linear systems with a coprimality constraint"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "modlin 1.0");

    SolveOptions solve_opt;
    auto* solve = app.add_subcommand("solve", "solve A·x ≡ b (mod n), with gcd(<w,x>, n) = 1 when w is given");
    solve->add_option("file", solve_opt.file, "problem file ('-' for stdin)")->required();
    solve->add_option("--factors", solve_opt.factors, "prime factorization of n, e.g. \"2^3 3 5\"");
    solve->add_option("--method", solve_opt.method, "crt: per prime power then CRT; direct: one Smith form mod n")
        ->check(CLI::IsMember({"crt", "direct"}));
    solve->add_option("--jobs", solve_opt.jobs, "worker threads for prime-power subproblems")->check(CLI::PositiveNumber);
    solve->add_flag("--emit-certificates", solve_opt.emit_certificates, "print P, Q, S for each Smith form used");
    solve->add_flag("--verify", solve_opt.verify, "re-read the printed report and verify it");

    std::string verify_problem, verify_report;
    auto* verify = app.add_subcommand("verify", "check a solve report against its problem file");
    verify->add_option("problem", verify_problem, "problem file")->required();
    verify->add_option("report", verify_report, "report produced by 'solve'")->required();

    std::string smith_file;
    bool smith_certs = false;
    auto* smith = app.add_subcommand("smith", "Smith normal form of A (and of [A, -nI] when a modulus is given)");
    smith->add_option("file", smith_file, "problem file")->required();
    smith->add_flag("--emit-certificates", smith_certs, "print P, Q, S");

    std::string bz_a, bz_p;
    unsigned long bz_r = 0;
    std::optional<unsigned long> bz_byte;
    auto* bezout = app.add_subcommand("bezout", "a·x + p^r·y = gcd(a, p^r) by p-adic digit iteration");
    bezout->add_option("a", bz_a)->required();
    bezout->add_option("p", bz_p)->required();
    bezout->add_option("r", bz_r, "exponent (in digits of p, or of q = p^d with --byte)")->required();
    bezout->add_option("--byte", bz_byte, "work in base q = p^d")->check(CLI::PositiveNumber);

    std::string crt_file, crt_factors;
    std::size_t crt_jobs = 1;
    auto* crt = app.add_subcommand("crt", "show each prime-power residue and the combined solution");
    crt->add_option("file", crt_file, "problem file")->required();
    crt->add_option("--factors", crt_factors, "prime factorization of n");
    crt->add_option("--jobs", crt_jobs, "worker threads")->check(CLI::PositiveNumber);

    std::string field_file, field_prime;
    auto* field = app.add_subcommand("field", "A·x = b with <w,x> != 0 over Q or F_p");
    field->add_option("file", field_file, "problem file")->required();
    field->add_option("--prime", field_prime, "work over F_p instead of the file's field");

    BenchOptions bench_opt;
    auto* bench = app.add_subcommand("bench", "operation counts: p-adic Bezout vs extended Euclid; CRT job determinism");
    bench->add_option("--bits", bench_opt.bits, "operand sizes in bits")->delimiter(',');
    bench->add_option("--prime", bench_opt.prime, "the prime p")->check(CLI::Range(2ul, 1ul << 20));
    bench->add_option("--seed", bench_opt.seed, "random seed");
    bench->add_option("--jobs", bench_opt.jobs, "worker count compared against --jobs 1")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kSolved : kInputError;
    }

    try {
        if (*solve) return cmd_solve(solve_opt);
        if (*verify) return cmd_verify(verify_problem, verify_report);
        if (*smith) return cmd_smith(smith_file, smith_certs);
        if (*bezout) return cmd_bezout(bz_a, bz_p, bz_r, bz_byte);
        if (*crt) return cmd_crt(crt_file, crt_factors, crt_jobs);
        if (*field) return cmd_field(field_file, field_prime);
        if (*bench) return cmd_bench(bench_opt);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kInputError;
    }
    return kInputError;
}
