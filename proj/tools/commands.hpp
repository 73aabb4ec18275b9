#pragma once

// Subcommands of lorentz-aut. Each returns the process exit code:
// 0 success, 1 mathematical rejection, 2 malformed input.

#include <lorentz/io.hpp>
#include <lorentz.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>

namespace lorentz::cli {

enum ExitCode : int { kOk = 0, kRejected = 1, kMalformed = 2 };

struct Options {
    std::string input;  // path, or "-" for standard input
    std::string output;  // empty for standard output
    double tol = kDefaultTol;
    std::string form = "canonical";
    std::int64_t samples = 10000;
    std::uint64_t seed = 0;
    std::int64_t n = 0;
    std::int64_t count = 1;
    double alpha_max = 10.0;
    double nu_min = 1.0;
    double nu_max = 1.0;
    bool quiet = false;
};

struct Streams {
    std::istream& in = std::cin;
    std::ostream& out = std::cout;
    std::ostream& err = std::cerr;
};

namespace detail {

inline std::string read_input(const Options& opt, std::istream& in) {
    if (opt.input.empty() || opt.input == "-")
        return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    std::ifstream file(opt.input, std::ios::binary);
    if (!file) throw io::ParseError("cannot open " + opt.input);
    return {std::istreambuf_iterator<char>(file), std::istreambuf_iterator<char>()};
}

inline void emit(const Options& opt, Streams& io, const std::string& text) {
    if (!opt.output.empty()) {
        std::ofstream file(opt.output, std::ios::binary);
        if (!file) throw std::runtime_error("cannot write " + opt.output);
        file << text;
        return;
    }
    if (!opt.quiet) io.out << text;
}

inline void diagnose(const Options& opt, Streams& io, const std::string& msg) {
    if (!opt.quiet) io.err << "lorentz-aut: " << msg << "\n";
}

inline io::Report check_report(const AutCheckResult<double>& r) {
    io::Report rep;
    rep.add("is_automorphism", r.is_automorphism)
        .add("mu", r.mu)
        .add("residual_congruence", r.residual_congruence)
        .add("cone_forward", r.cone_forward);
    return rep;
}

inline bool valid_tol(double tol) { return tol >= 0 && std::isfinite(tol); }

}  // namespace detail

inline int cmd_check(const Options& opt, Streams io = {}) {
    if (!detail::valid_tol(opt.tol)) {
        detail::diagnose(opt, io, "--tol must be finite and non-negative");
        return kMalformed;
    }
    Matrix<double> s;
    try {
        s = io::read_matrix(detail::read_input(opt, io.in));
    } catch (const io::ParseError& e) {
        detail::diagnose(opt, io, e.what());
        return kMalformed;
    }
    const auto r = check_automorphism(s, opt.tol);
    auto rep = detail::check_report(r);
    rep.add("n", static_cast<std::int64_t>(s.rows()));
    detail::emit(opt, io, rep.str());
    return r.is_automorphism ? kOk : kRejected;
}

inline int cmd_factor(const Options& opt, Streams io = {}) {
    if (!detail::valid_tol(opt.tol) || (opt.form != "canonical" && opt.form != "compact")) {
        detail::diagnose(opt, io, "--form must be canonical or compact and --tol non-negative");
        return kMalformed;
    }
    Matrix<double> s;
    try {
        s = io::read_matrix(detail::read_input(opt, io.in));
    } catch (const io::ParseError& e) {
        detail::diagnose(opt, io, e.what());
        return kMalformed;
    }
    io::FactorizationFile file;
    file.tol = opt.tol;
    try {
        Matrix<double> rebuilt;
        if (opt.form == "canonical") {
            auto f = factor_canonical(s, opt.tol);
            rebuilt = compose_canonical(f, opt.tol);
            file.factorization = std::move(f);
        } else {
            auto f = factor_compact(s, opt.tol);
            rebuilt = compose_compact(f, opt.tol);
            file.factorization = std::move(f);
        }
        file.reconstruction_residual = (rebuilt - s).norm() / std::max(1.0, s.norm());
    } catch (const NotAnAutomorphism& e) {
        detail::diagnose(opt, io, e.what());
        return kRejected;
    }
    detail::emit(opt, io, io::write_factorization(file));
    return kOk;
}

inline int cmd_compose(const Options& opt, Streams io = {}) {
    io::FactorizationFile file;
    try {
        file = io::read_factorization(detail::read_input(opt, io.in));
    } catch (const io::ParseError& e) {
        detail::diagnose(opt, io, e.what());
        return kMalformed;
    }
    Matrix<double> s;
    try {
        s = std::visit(
            [&](const auto& f) -> Matrix<double> {
                using F = std::decay_t<decltype(f)>;
                if constexpr (std::is_same_v<F, CanonicalFactorization<double>>)
                    return compose_canonical(f, file.tol);
                else
                    return compose_compact(f, file.tol);
            },
            file.factorization);
    } catch (const std::exception& e) {
        detail::diagnose(opt, io, e.what());
        return kRejected;
    }
    const auto r = check_automorphism(s, file.tol);
    if (!r.is_automorphism) {
        detail::diagnose(opt, io, "composed matrix fails the automorphism check (residual " +
                                      io::format_number(r.residual_congruence) + ")");
        return kRejected;
    }
    detail::emit(opt, io, io::write_matrix(s));
    return kOk;
}

/// With --output, writes <dir>/matrix_<index>.json; otherwise prints the
/// documents to standard output in index order.
inline int cmd_sample(const Options& opt, Streams io = {}) {
    if (opt.n < 2 || opt.count < 1 || !(opt.alpha_max >= 0) || !std::isfinite(opt.alpha_max) ||
        !(opt.nu_min > 0) || !(opt.nu_min <= opt.nu_max) || !std::isfinite(opt.nu_max)) {
        detail::diagnose(opt, io,
                         "need --n >= 2, --count >= 1, --alpha-max >= 0 and 0 < --nu-min <= --nu-max");
        return kMalformed;
    }
    namespace fs = std::filesystem;
    if (!opt.output.empty()) fs::create_directories(opt.output);
    for (std::int64_t i = 0; i < opt.count; ++i) {
        const auto s = sample_automorphism<double>(opt.n, opt.alpha_max, opt.nu_min, opt.nu_max,
                                                   mix_seed(opt.seed, static_cast<std::uint64_t>(i)));
        const auto text = io::write_matrix(s);
        if (opt.output.empty()) {
            if (!opt.quiet) io.out << text;
            continue;
        }
        char name[32];
        std::snprintf(name, sizeof name, "matrix_%05lld.json", static_cast<long long>(i));
        std::ofstream file(fs::path(opt.output) / name, std::ios::binary);
        if (!file) throw std::runtime_error("cannot write into " + opt.output);
        file << text;
    }
    return kOk;
}

inline int cmd_verify(const Options& opt, Streams io = {}) {
    if (!detail::valid_tol(opt.tol) || opt.samples < 0) {
        detail::diagnose(opt, io, "--tol and --samples must be non-negative");
        return kMalformed;
    }
    Matrix<double> s;
    try {
        s = io::read_matrix(detail::read_input(opt, io.in));
    } catch (const io::ParseError& e) {
        detail::diagnose(opt, io, e.what());
        return kMalformed;
    }
    const auto r = check_automorphism(s, opt.tol);
    auto rep = detail::check_report(r);
    bool ok = r.is_automorphism;
    std::optional<PropertyReport<double>> props;
    try {
        props = property_report(s, opt.samples, opt.tol, opt.seed);
    } catch (const NotAnAutomorphism& e) {
        detail::diagnose(opt, io, e.what());
    }
    if (props) {
        const auto& p = *props;
        rep.add("nu", p.nu)
            .add("residual_A1", p.residual_A1)
            .add("residual_A2", p.residual_A2)
            .add("residual_A3", p.residual_A3)
            .add("residual_B1", p.residual_B1)
            .add("residual_B2", p.residual_B2)
            .add("residual_B3", p.residual_B3)
            .add("samples", p.samples)
            .add("cone_violation_max", p.cone_violation_max)
            .add("boundary_drift_max", p.boundary_drift_max);
        ok = ok && p.within(opt.tol);
    }
    rep.add("verified", ok);
    detail::emit(opt, io, rep.str());
    return ok ? kOk : kRejected;
}

}  // namespace lorentz::cli
