#ifndef SIGSDE_CLI_HPP
#define SIGSDE_CLI_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "sigsde/calibration.hpp"
#include "sigsde/market_lab.hpp"
#include "sigsde/payoffs.hpp"

namespace sigsde {

/// Configuration rejected before execution (exit code 2).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
/// Numerical failure such as non-convergence (exit code 3).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

/// One schema-versioned configuration drives every subcommand; unknown keys
/// anywhere in the file are rejected. Defaults reproduce the synthetic
/// market experiment end to end.
struct RunConfig {
    int schema_version = 1;
    std::uint64_t seed = 20240;

    // model
    int model_order = 4;
    double x0 = 1.0;
    double horizon = 1.0;

    // simulation grid
    std::size_t grid_steps = 500;

    // market generation
    double market_sigma = 0.2;
    std::size_t market_mc_paths = 100000;
    MarketGridSpec grids = MarketGridSpec::experiment_default();

    // payoff regression
    int payoff_order = 4;
    std::size_t fit_paths = 10000;
    double ridge = kAutoRidge;
    std::string fit_reference = "black_scholes"; // or "sig_sde"
    std::string fit_params_file;                 // readout for the sig_sde reference

    // calibration
    OptimizerConfig optimizer;
    std::vector<double> weights; // empty: unit weights

    // pricing
    std::size_t price_mc_paths = 100000;
    bool price_with_mc = true;

    // simulation command
    std::size_t simulate_paths = 1000;
    std::string simulate_params_file; // empty: use the calibrated parameters

    // all inputs and outputs live here
    std::string out_dir = "out";
};

RunConfig config_from_json_text(const std::string& json_text);
std::string config_to_json_text(const RunConfig& config);

/// The calibration problem exactly as cmd_calibrate assembles it from the
/// market and payoff files under config.out_dir.
CalibrationProblem load_calibration_problem(const RunConfig& config);

/// Subcommand bodies. They read their inputs from and write their outputs to
/// config.out_dir, throwing ConfigError / NumericalError on failure.
void cmd_gen_market(const RunConfig& config);
void cmd_fit_payoffs(const RunConfig& config);
void cmd_calibrate(const RunConfig& config);
void cmd_price(const RunConfig& config);
void cmd_simulate(const RunConfig& config);

/// Full command-line entry point: parses arguments, loads the config,
/// applies flag overrides, dispatches, and maps failures to exit codes with
/// a machine-readable error object on standard error.
int run_cli(const std::vector<std::string>& args);

} // namespace sigsde

#endif
