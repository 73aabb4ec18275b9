#include "commands.hpp"

#include <CLI11.hpp>

#include <functional>
#include <iostream>

int main(int argc, char** argv) {
    using namespace lorentz::cli;
    CLI::App app{"Membership, factorization and sampling for automorphisms of the Lorentz cone"};
    app.require_subcommand(1);

    Options opt;
    std::function<int(const Options&)> run;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--output", opt.output, "Write to this path instead of standard output");
        sub->add_flag("--quiet", opt.quiet, "Print nothing; only the exit code is meaningful");
    };
    auto tol = [&](CLI::App* sub) {
        sub->add_option("--tol", opt.tol, "Relative tolerance")->capture_default_str();
    };
    auto input = [&](CLI::App* sub) {
        sub->add_option("input", opt.input, "Input file ('-' for standard input)")->required();
    };

    auto* check = app.add_subcommand("check", "Test whether a matrix is a cone automorphism");
    input(check);
    tol(check);
    common(check);
    check->callback([&] { run = [](const Options& o) { return cmd_check(o); }; });

    auto* factor = app.add_subcommand("factor", "Factor an automorphism");
    input(factor);
    tol(factor);
    factor->add_option("--form", opt.form, "canonical or compact")
        ->check(CLI::IsMember({"canonical", "compact"}))
        ->capture_default_str();
    common(factor);
    factor->callback([&] { run = [](const Options& o) { return cmd_factor(o); }; });

    auto* compose = app.add_subcommand("compose", "Multiply a factorization back into a matrix");
    input(compose);
    common(compose);
    compose->callback([&] { run = [](const Options& o) { return cmd_compose(o); }; });

    auto* sample = app.add_subcommand("sample", "Draw random automorphisms");
    sample->add_option("--n", opt.n, "Matrix side")->required();
    sample->add_option("--count", opt.count, "Number of matrices")->capture_default_str();
    sample->add_option("--alpha-max", opt.alpha_max, "Upper bound for the boost parameter")
        ->capture_default_str();
    sample->add_option("--nu-min", opt.nu_min, "Lower bound for the scale")->capture_default_str();
    sample->add_option("--nu-max", opt.nu_max, "Upper bound for the scale")->capture_default_str();
    sample->add_option("--seed", opt.seed, "Random seed")->capture_default_str();
    sample->add_option("--output", opt.output, "Directory for matrix_<index>.json files");
    sample->add_flag("--quiet", opt.quiet, "Print nothing");
    sample->callback([&] { run = [](const Options& o) { return cmd_sample(o); }; });

    auto* verify = app.add_subcommand("verify", "Report block-identity residuals and cone sampling");
    input(verify);
    tol(verify);
    verify->add_option("--samples", opt.samples, "Cone points per kind")->capture_default_str();
    verify->add_option("--seed", opt.seed, "Random seed")->capture_default_str();
    common(verify);
    verify->callback([&] { run = [](const Options& o) { return cmd_verify(o); }; });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kMalformed;
    }
    try {
        return run(opt);
    } catch (const std::exception& e) {
        if (!opt.quiet) std::cerr << "lorentz-aut: " << e.what() << "\n";
        return kMalformed;
    }
}
