#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

namespace kptau::cli {

// Stable exit-code contract.
enum Exit : int { ok = 0, io_error = 1, validation_error = 2, divisor_error = 3, identity_failure = 4 };

struct RunConfig {
    std::string subcommand;
    std::string curve_path;
    std::string periods_path;
    std::string out_path;
    std::string v;       // re,im,... (g complex values)
    std::string z;       // theta argument, same grammar
    std::string deriv;   // k1,k2,...
    int max_weight = 8;
    std::string gauge = "sigma";
    std::string suite = "genus2";
    int samples = 20;
    double tol = 1e-6;
    std::uint64_t seed = 0;
    int nodes = 0;       // 0: adaptive
    int order = 4;       // wp derivative order
    bool no_validate = false;
};

// Runs f, printing any error to err and mapping the exception class to an exit code.
int guarded(const std::function<int()>& f, std::ostream& err);

int cmd_periods(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_expand(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_theta(const RunConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_wp(const RunConfig& cfg, std::ostream& out, std::ostream& err);

// Full command line, as used by the kptau executable.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

} // namespace kptau::cli
