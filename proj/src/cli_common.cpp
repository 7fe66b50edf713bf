#include "cli.hpp"

#include "kptau/errors.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <stdexcept>

namespace kptau::cli {

int guarded(const std::function<int()>& f, std::ostream& err) {
    try {
        return f();
    } catch (const IoError& e) {
        err << "I/O error: " << e.what() << '\n';
        return io_error;
    } catch (const DivisorError& e) {
        err << "error: " << e.what() << '\n';
        return divisor_error;
    } catch (const ValidationError& e) {
        err << "validation error: " << e.what() << '\n';
        return validation_error;
    } catch (const QuadratureError& e) {
        err << "validation error: " << e.what() << '\n';
        return validation_error;
    } catch (const std::invalid_argument& e) {
        err << "validation error: " << e.what() << '\n';
        return validation_error;
    } catch (const std::out_of_range& e) {
        err << "validation error: " << e.what() << '\n';
        return validation_error;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return validation_error;
    }
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"KP tau functions, Plucker coordinates and Kleinian function identities for algebraic curves"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto* periods = app.add_subcommand("periods", "compute the period file of a hyperelliptic curve with real branch points");
    periods->add_option("curve", cfg.curve_path, "curve JSON")->required();
    periods->add_option("-o,--output", cfg.out_path, "period file to write")->required();
    periods->add_option("--nodes", cfg.nodes, "fixed quadrature nodes per segment (default: adaptive)")->check(CLI::NonNegativeNumber);
    periods->add_flag("--no-validate", cfg.no_validate, "skip the Legendre/symmetry checks");

    auto* expand = app.add_subcommand("expand", "Schur expansion table and affine coordinates of tau at v");
    expand->add_option("curve", cfg.curve_path, "curve JSON")->required();
    expand->add_option("periods", cfg.periods_path, "period file")->required();
    expand->add_option("--v", cfg.v, "point v as re,im pairs")->required();
    expand->add_option("--max-weight", cfg.max_weight, "truncation weight (1..10)");
    expand->add_option("--gauge", cfg.gauge, "sigma or theta")->check(CLI::IsMember({"sigma", "theta"}));
    expand->add_option("-o,--output", cfg.out_path, "output JSON (default: stdout)");
    expand->add_flag("--no-validate", cfg.no_validate, "skip period validation");

    auto* verify = app.add_subcommand("verify", "check the identity suites at random points");
    verify->add_option("curve", cfg.curve_path, "curve JSON")->required();
    verify->add_option("periods", cfg.periods_path, "period file (required except for an unsupplied trigonal fixture)");
    verify->add_option("--suite", cfg.suite, "genus2, trigonal or all")->check(CLI::IsMember({"genus2", "trigonal", "all"}));
    verify->add_option("--samples", cfg.samples, "number of random points")->check(CLI::PositiveNumber);
    verify->add_option("--tol", cfg.tol, "relative tolerance");
    verify->add_option("--seed", cfg.seed, "random seed (default 0)");
    verify->add_option("-o,--output", cfg.out_path, "report JSON");

    auto* theta = app.add_subcommand("theta", "Riemann theta function or a derivative");
    theta->add_option("periods", cfg.periods_path, "period file")->required();
    theta->add_option("--z", cfg.z, "argument as re,im pairs")->required();
    theta->add_option("--deriv", cfg.deriv, "derivative orders k1,k2,...");
    theta->add_flag("--no-validate", cfg.no_validate, "skip period validation");

    auto* wp = app.add_subcommand("wp", "Kleinian zeta and wp functions at v");
    wp->add_option("periods", cfg.periods_path, "period file")->required();
    wp->add_option("curve", cfg.curve_path, "curve JSON")->required();
    wp->add_option("--v", cfg.v, "point v as re,im pairs")->required();
    wp->add_option("--order", cfg.order, "highest wp order (2..12)");
    wp->add_option("-o,--output", cfg.out_path, "output JSON (default: stdout)");
    wp->add_flag("--no-validate", cfg.no_validate, "skip period validation");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return ok;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return ok;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << '\n';
        return validation_error;
    }

    if (*periods) return cmd_periods(cfg, out, err);
    if (*expand) return cmd_expand(cfg, out, err);
    if (*verify) return cmd_verify(cfg, out, err);
    if (*theta) return cmd_theta(cfg, out, err);
    return cmd_wp(cfg, out, err);
}

} // namespace kptau::cli
