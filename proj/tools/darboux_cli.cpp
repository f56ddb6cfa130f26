#include <iostream>

#include <CLI11.hpp>

#include "darboux/cli.hpp"

int main(int argc, char** argv)
{
    using darboux::cli::Command;
    namespace ec = darboux::cli::exit_code;

    CLI::App app{"Rigorous Darboux-sum integration and pre-primitive checks"};
    app.require_subcommand(1);

    darboux::cli::RunConfig cfg;
    std::string format = "json";

    struct Spec {
        Command command;
        const char* help;
    };
    const Spec specs[] = {
        {Command::Integrate, "Enclose the integral of f over [a, b]"},
        {Command::Certify, "Decide integrability of f on [a, b] by refinement"},
        {Command::PrePrimCheck, "Check a candidate pre-primitive F of f"},
        {Command::FtcCheck, "Check F(b) - F(a) against the integral of f"},
        {Command::Tabulate, "Tabulate the integral function of f from c"},
        {Command::Gallery, "Export the built-in function gallery"},
        {Command::Eval, "Evaluate f at points"},
    };

    for (const auto& spec : specs) {
        CLI::App* sub = app.add_subcommand(darboux::cli::command_name(spec.command), spec.help);
        sub->callback([&cfg, c = spec.command] { cfg.command = c; });
        if (spec.command == Command::Gallery) {
            sub->add_option("--format", format, "json");
            continue;
        }
        sub->add_option("--f", cfg.f_expr, "integrand expression in x")->required();
        sub->add_option("--F", cfg.F_expr, "candidate primitive: expression, 'lower' or 'upper'");
        sub->add_option("--G", cfg.G_expr, "second candidate for the constant-difference check");
        sub->add_option("--a", cfg.a, "left endpoint");
        sub->add_option("--b", cfg.b, "right endpoint");
        sub->add_option("--c", cfg.c, "basepoint");
        sub->add_option("--x", cfg.xs, "query point (repeatable)");
        sub->add_option("--side", cfg.side, "right or left")->capture_default_str();
        sub->add_option("--tol", cfg.tol, "tolerance")->capture_default_str();
        sub->add_option("--max-rounds", cfg.max_rounds, "bisection budget")->capture_default_str();
        sub->add_option("--seed", cfg.seed, "sampling seed")->capture_default_str();
        sub->add_option("--pairs", cfg.pairs, "sampled pairs per check")->capture_default_str();
        sub->add_option("--grid", cfg.grid, "grid points")->capture_default_str();
        sub->add_option("--budget", cfg.budget, "refinement rounds per pre-primitive query")
            ->capture_default_str();
        sub->add_option("--check", cfg.check, "sandwich, lipschitz, derivative, constant, all")
            ->capture_default_str();
        sub->add_option("--format", format, "json or csv")->capture_default_str();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return ec::kUsage;
    }

    if (format == "json") {
        cfg.format = darboux::cli::OutputFormat::Json;
    } else if (format == "csv") {
        cfg.format = darboux::cli::OutputFormat::Csv;
    } else {
        std::cerr << "usage error: --format must be json or csv\n";
        return ec::kUsage;
    }

    const auto result = darboux::cli::run(cfg);
    std::cout << result.out;
    std::cerr << result.err;
    return result.exit_code;
}
