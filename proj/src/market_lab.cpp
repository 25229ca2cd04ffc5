#include "sigsde/market_lab.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sigsde/dense_tensor.hpp"
#include "sigsde/path_signature.hpp"
#include "sigsde/tensor_ops.hpp"

namespace sigsde {

namespace {

double norm_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }
double norm_pdf(double x) {
    return std::exp(-0.5 * x * x) / std::sqrt(2.0 * 3.14159265358979323846);
}

std::vector<double> decimal_range(int from_hundredths, int to_hundredths, int step_hundredths) {
    std::vector<double> out;
    for (int k = from_hundredths; k <= to_hundredths; k += step_hundredths)
        out.push_back(static_cast<double>(k) / 100.0);
    return out;
}

} // namespace

BsModel::BsModel(double sigma_, double x0_) : sigma(sigma_), x0(x0_) {
    if (!(sigma > 0.0)) throw std::invalid_argument("BsModel: sigma must be positive");
    if (!(x0 > 0.0)) throw std::invalid_argument("BsModel: x0 must be positive");
}

DiscretePath bs_simulate(const BsModel& model, const std::vector<double>& grid, RngStream& rng) {
    if (grid.size() < 2) throw std::invalid_argument("bs_simulate: grid needs >= 2 nodes");
    std::vector<double> values(grid.size());
    values[0] = model.x0;
    for (std::size_t k = 1; k < grid.size(); ++k) {
        const double dt = grid[k] - grid[k - 1];
        if (!(dt > 0.0)) throw std::invalid_argument("bs_simulate: grid must increase");
        const double dw = std::sqrt(dt) * rng.gaussian();
        values[k] = values[k - 1] * std::exp(model.sigma * dw - 0.5 * model.sigma * model.sigma * dt);
    }
    return DiscretePath(grid, std::move(values), 1);
}

double bs_call_price(const BsModel& model, double strike, double maturity) {
    if (!(strike > 0.0) || !(maturity > 0.0))
        throw std::invalid_argument("bs_call_price: strike and maturity must be positive");
    const double stddev = model.sigma * std::sqrt(maturity);
    const double d1 = std::log(model.x0 / strike) / stddev + 0.5 * stddev;
    const double d2 = d1 - stddev;
    return model.x0 * norm_cdf(d1) - strike * norm_cdf(d2);
}

double bs_implied_vol(double price, double x0, double strike, double maturity) {
    const double intrinsic = std::max(x0 - strike, 0.0);
    if (price <= intrinsic + 1e-14) return 1e-4;
    double sigma = std::max(1e-3, std::sqrt(2.0 * 3.14159265358979323846 / maturity) * price / x0);
    for (int iter = 0; iter < 100; ++iter) {
        const BsModel probe(sigma, x0);
        const double diff = bs_call_price(probe, strike, maturity) - price;
        if (std::abs(diff) < 1e-12) break;
        const double stddev = sigma * std::sqrt(maturity);
        const double d1 = std::log(x0 / strike) / stddev + 0.5 * stddev;
        const double vega = x0 * norm_pdf(d1) * std::sqrt(maturity);
        if (vega < 1e-12) break;
        sigma = std::clamp(sigma - diff / vega, 1e-4, 5.0);
    }
    return sigma;
}

MarketGridSpec MarketGridSpec::experiment_default() {
    MarketGridSpec spec;
    spec.vanilla_strikes = decimal_range(50, 110, 10);
    spec.vanilla_maturities = decimal_range(40, 100, 5);
    // variance strikes run 0.010 to 0.040 in steps of 0.005
    for (int k = 100; k <= 400; k += 50) spec.variance_strikes.push_back(k / 10000.0);
    spec.variance_maturities = spec.vanilla_maturities;
    spec.barrier_out_strikes = {0.90, 0.92, 0.94, 0.96, 0.98, 1.01, 1.03};
    spec.barrier_out_levels = decimal_range(60, 90, 2);
    spec.barrier_out_maturity = 1.0;
    spec.barrier_in_strikes = spec.barrier_out_strikes;
    spec.barrier_in_levels = decimal_range(70, 82, 1);
    spec.barrier_in_maturity = 1.0;
    return spec;
}

GeneratedMarket bs_market(const BsModel& model, const MarketGridSpec& spec,
                          std::size_t mc_paths, std::size_t grid_steps, std::uint64_t seed) {
    if (spec.vanilla_strikes.empty() && spec.variance_strikes.empty() &&
        spec.barrier_out_strikes.empty())
        throw std::invalid_argument("bs_market: empty instrument grids");

    GeneratedMarket market;

    // vanilla calls priced in closed form
    for (double strike : spec.vanilla_strikes) {
        for (double t : spec.vanilla_maturities) {
            MarketInstrument inst{InstrumentKind::vanilla_call, strike, t, 0.0, std::nullopt};
            inst.observed_price = bs_call_price(model, strike, t);
            market.calibration.push_back(inst);
            market.calibration_se.push_back(0.0);
        }
    }

    // variance and barrier products priced by Monte Carlo on a shared path set
    std::vector<MarketInstrument> mc_batch;
    for (double strike : spec.variance_strikes)
        for (double t : spec.variance_maturities)
            mc_batch.push_back({InstrumentKind::variance_call, strike, t, 0.0, std::nullopt});
    for (double strike : spec.barrier_out_strikes)
        for (double level : spec.barrier_out_levels)
            mc_batch.push_back({InstrumentKind::barrier_down_out_call, strike,
                                spec.barrier_out_maturity, level, std::nullopt});
    const std::size_t n_heldout_begin = mc_batch.size();
    for (double strike : spec.barrier_in_strikes)
        for (double level : spec.barrier_in_levels)
            mc_batch.push_back({InstrumentKind::barrier_down_in_put, strike,
                                spec.barrier_in_maturity, level, std::nullopt});

    if (!mc_batch.empty()) {
        double horizon = 0.0;
        for (const auto& inst : mc_batch) horizon = std::max(horizon, inst.maturity);
        const auto grid = uniform_grid(horizon, grid_steps);
        PathSampler sampler = [&](RngStream& rng) { return bs_simulate(model, grid, rng); };
        auto estimates = mc_instrument_prices(sampler, mc_batch, mc_paths, seed);
        for (std::size_t i = 0; i < mc_batch.size(); ++i) {
            mc_batch[i].observed_price = estimates[i].price;
            if (i < n_heldout_begin) {
                market.calibration.push_back(mc_batch[i]);
                market.calibration_se.push_back(estimates[i].standard_error);
            } else {
                market.heldout.push_back(mc_batch[i]);
                market.heldout_se.push_back(estimates[i].standard_error);
            }
        }
    }
    return market;
}

SigSdeParams bs_sig_params(const BsModel& model, int order) {
    if (order < 1) throw std::invalid_argument("bs_sig_params: order must be >= 1");
    LinearFunctional generator(2, order);
    generator.add_term(MultiIndex(2, {2}), model.sigma);
    generator.add_term(MultiIndex(2, {1}), -0.5 * model.sigma * model.sigma);
    // Factorial-free tensor series sum_k generator^(x k): paired with a
    // signature, level k already contributes arg^k / k!, so this readout
    // evaluates sigma * x0 * exp(sigma W_t - sigma^2 t / 2) exactly up to
    // the truncation order.
    LinearFunctional ell(2, order);
    LinearFunctional power = LinearFunctional::constant(2, 1.0, order);
    for (int k = 0; k <= order; ++k) {
        for (const auto& [word, coef] : power.terms())
            ell.add_term(word, model.sigma * model.x0 * coef);
        if (k < order) power = concat_lf(power, generator, order);
    }
    return SigSdeParams(order, model.x0, std::move(ell));
}

McSignatureEstimate mc_expected_signature(const PathSampler& sampler, int order,
                                          std::size_t n_paths, std::uint64_t seed) {
    if (n_paths < 1) throw std::invalid_argument("mc_expected_signature: need paths");

    std::vector<double> sum, sum2;
    int alphabet = 0;

    for (std::size_t p = 0; p < n_paths; ++p) {
        RngStream rng = RngStream::substream(seed, p);
        DiscretePath path = sampler(rng);
        if (sum.empty()) {
            alphabet = path.dimension();
            const std::size_t size = DenseTensor(alphabet, order).size();
            sum.assign(size, 0.0);
            sum2.assign(size, 0.0);
        } else if (path.dimension() != alphabet) {
            throw std::invalid_argument("mc_expected_signature: sampler changed dimension");
        }
        path_signature_scan(path, order, [&](std::size_t node, const DenseTensor& running) {
            if (node + 1 == path.sample_count()) {
                auto c = running.coefficients();
                for (std::size_t i = 0; i < c.size(); ++i) {
                    sum[i] += c[i];
                    sum2[i] += c[i] * c[i];
                }
            }
        });
    }

    McSignatureEstimate out{LinearFunctional(alphabet, order), LinearFunctional(alphabet, order),
                            n_paths};
    DenseTensor mean_tensor(alphabet, order);
    DenseTensor se_tensor(alphabet, order);
    const double n = static_cast<double>(n_paths);
    for (std::size_t i = 0; i < sum.size(); ++i) {
        const double mean = sum[i] / n;
        mean_tensor[i] = mean;
        if (n_paths > 1) {
            const double var = std::max(0.0, (sum2[i] - n * mean * mean) / (n - 1.0));
            se_tensor[i] = std::sqrt(var / n);
        }
    }
    out.mean = mean_tensor.to_linear_functional();
    out.standard_error = se_tensor.to_linear_functional();
    return out;
}

double ks_statistic(std::vector<double> sample_a, std::vector<double> sample_b) {
    if (sample_a.empty() || sample_b.empty())
        throw std::invalid_argument("ks_statistic: empty sample");
    std::sort(sample_a.begin(), sample_a.end());
    std::sort(sample_b.begin(), sample_b.end());
    const double na = static_cast<double>(sample_a.size());
    const double nb = static_cast<double>(sample_b.size());
    std::size_t i = 0, j = 0;
    double d = 0.0;
    while (i < sample_a.size() && j < sample_b.size()) {
        if (sample_a[i] <= sample_b[j])
            ++i;
        else
            ++j;
        d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

double ks_threshold(double alpha, std::size_t n, std::size_t m) {
    if (!(alpha > 0.0 && alpha < 1.0)) throw std::invalid_argument("ks_threshold: bad alpha");
    const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
    const double nn = static_cast<double>(n), mm = static_cast<double>(m);
    return c * std::sqrt((nn + mm) / (nn * mm));
}

} // namespace sigsde
