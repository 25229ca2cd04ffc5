#ifndef SIGSDE_MARKET_LAB_HPP
#define SIGSDE_MARKET_LAB_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "sigsde/linear_functional.hpp"
#include "sigsde/payoffs.hpp"
#include "sigsde/rng.hpp"
#include "sigsde/sig_sde.hpp"

namespace sigsde {

/// Flat-rate lognormal reference model dX = sigma * X dW, the data generator
/// for the synthetic market and the oracle behind most cross-checks.
struct BsModel {
    double sigma = 0.0;
    double x0 = 0.0;

    BsModel(double sigma_, double x0_);
};

/// Exact lognormal stepping (no discretization bias).
DiscretePath bs_simulate(const BsModel& model, const std::vector<double>& grid, RngStream& rng);

/// Call price at zero rate.
double bs_call_price(const BsModel& model, double strike, double maturity);

/// Newton inversion of the call price in the volatility; used to scale
/// calibration starting points.
double bs_implied_vol(double price, double x0, double strike, double maturity);

/// Instrument grids of the synthetic market experiment.
struct MarketGridSpec {
    std::vector<double> vanilla_strikes;
    std::vector<double> vanilla_maturities;
    std::vector<double> variance_strikes;
    std::vector<double> variance_maturities;
    std::vector<double> barrier_out_strikes;
    std::vector<double> barrier_out_levels;
    double barrier_out_maturity = 1.0;
    std::vector<double> barrier_in_strikes;
    std::vector<double> barrier_in_levels;
    double barrier_in_maturity = 1.0;

    static MarketGridSpec experiment_default();
};

/// A generated market: calibration instruments (vanilla, variance,
/// down-and-out calls) with prices filled in, plus the held-out
/// down-and-in puts that never enter the calibration.
struct GeneratedMarket {
    std::vector<MarketInstrument> calibration;
    std::vector<double> calibration_se; // 0 where the price is closed-form
    std::vector<MarketInstrument> heldout;
    std::vector<double> heldout_se;
};

/// Prices the grids under the reference model: vanilla calls in closed form,
/// variance and barrier products by Monte Carlo with the recorded seed, so
/// the market is bit-reproducible.
GeneratedMarket bs_market(const BsModel& model, const MarketGridSpec& spec,
                          std::size_t mc_paths, std::size_t grid_steps, std::uint64_t seed);

/// Volatility readout reproducing the reference model inside the signature
/// model: sigma * x0 * exp_lf(sigma*(2) - (sigma^2/2)*(1)) truncated at the
/// model order, the exponential-martingale lift of sigma * X_t.
SigSdeParams bs_sig_params(const BsModel& model, int order);

/// Empirical expected signature: coefficient-wise mean and standard error
/// over sampled paths. Coefficients at exactly zero mean (or zero spread)
/// simply stay absent from the sparse results.
struct McSignatureEstimate {
    LinearFunctional mean;
    LinearFunctional standard_error;
    std::size_t n_paths = 0;
};
McSignatureEstimate mc_expected_signature(const PathSampler& sampler, int order,
                                          std::size_t n_paths, std::uint64_t seed);

/// Two-sample Kolmogorov-Smirnov distance and the alpha-level acceptance
/// threshold c(alpha) * sqrt((n+m)/(n*m)).
double ks_statistic(std::vector<double> sample_a, std::vector<double> sample_b);
double ks_threshold(double alpha, std::size_t n, std::size_t m);

} // namespace sigsde

#endif
