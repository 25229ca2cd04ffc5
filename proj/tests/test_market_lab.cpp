#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "sigsde/expected_signature.hpp"
#include "sigsde/market_lab.hpp"
#include "sigsde/path_signature.hpp"
#include "sigsde/tensor_ops.hpp"

using namespace sigsde;

namespace {

MultiIndex w2(std::initializer_list<int> letters) { return MultiIndex(2, letters); }

} // namespace

TEST_CASE("reference call prices") {
    const BsModel model(0.2, 1.0);
    // at the money: 2 Phi(sigma/2) - 1
    CHECK(bs_call_price(model, 1.0, 1.0) == doctest::Approx(0.0796557).epsilon(1e-5));
    // deep in the money tends to the forward minus strike
    CHECK(bs_call_price(model, 1e-9, 1.0) == doctest::Approx(1.0).epsilon(1e-9));
    // short maturity tends to intrinsic
    CHECK(bs_call_price(model, 0.8, 1e-10) == doctest::Approx(0.2).epsilon(1e-6));
    CHECK(bs_call_price(model, 1.2, 1e-10) == doctest::Approx(0.0));

    CHECK(bs_implied_vol(bs_call_price(model, 0.9, 0.7), 1.0, 0.9, 0.7) ==
          doctest::Approx(0.2).epsilon(1e-8));
}

TEST_CASE("lognormal sampler has the right first two moments") {
    const BsModel model(0.25, 1.0);
    auto grid = uniform_grid(1.0, 8); // exact stepping: coarse grid is fine
    const std::size_t n = 50000;
    double sum = 0.0, sum_log = 0.0, sum_log2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        RngStream rng = RngStream::substream(7, i);
        DiscretePath path = bs_simulate(model, grid, rng);
        const double x = path.value(path.sample_count() - 1, 0);
        sum += x;
        sum_log += std::log(x);
        sum_log2 += std::log(x) * std::log(x);
    }
    const double mean = sum / n;
    const double lvar = sum_log2 / n - (sum_log / n) * (sum_log / n);
    // martingale within 3 SE; SE of the mean of a lognormal with sigma=0.25
    const double se_mean = std::sqrt((std::exp(0.25 * 0.25) - 1.0)) / std::sqrt(double(n));
    CHECK(std::abs(mean - 1.0) <= 3.0 * se_mean);
    const double se_lvar = 0.25 * 0.25 * std::sqrt(2.0 / (n - 1.0));
    CHECK(std::abs(lvar - 0.25 * 0.25) <= 3.0 * se_lvar);

    // sigma -> 0 degenerates to the constant path
    const BsModel frozen(1e-14, 2.0);
    RngStream rng(1);
    DiscretePath path = bs_simulate(frozen, grid, rng);
    for (std::size_t k = 0; k < path.sample_count(); ++k)
        CHECK(path.value(k, 0) == doctest::Approx(2.0).epsilon(1e-9));
}

TEST_CASE("volatility readout of the reference model") {
    const BsModel model(0.2, 1.0);
    SigSdeParams params = bs_sig_params(model, 4);
    CHECK(params.ell.coefficient(MultiIndex::empty(2)) == doctest::Approx(0.2));
    CHECK(params.ell.coefficient(w2({2})) == doctest::Approx(0.04));
    CHECK(params.ell.coefficient(w2({1})) == doctest::Approx(-0.5 * 0.2 * 0.2 * 0.2));
    // level-2 coefficients carry no 1/2!: the paired signature supplies it
    CHECK(params.ell.coefficient(w2({2, 2})) == doctest::Approx(0.2 * 0.04));
    CHECK(params.order == 4);

    // the readout tracks sigma * x0 * exp(sigma W - sigma^2 t / 2) along
    // sampled drivers, with truncation error shrinking as the order grows
    auto grid = uniform_grid(1.0, 64);
    std::vector<double> sup_err(5, 0.0);
    for (std::size_t i = 0; i < 40; ++i) {
        RngStream rng = RngStream::substream(11, i);
        std::vector<double> wpath(grid.size(), 0.0);
        for (std::size_t k = 1; k < grid.size(); ++k)
            wpath[k] = wpath[k - 1] + std::sqrt(grid[k] - grid[k - 1]) * rng.gaussian();
        DiscretePath driver(grid, wpath, 1);
        for (int order = 2; order <= 4; ++order) {
            auto series = volatility_series(bs_sig_params(model, order), driver);
            for (std::size_t k = 0; k < grid.size(); ++k) {
                const double exact = model.sigma * model.x0 *
                                     std::exp(model.sigma * wpath[k] -
                                              0.5 * model.sigma * model.sigma * grid[k]);
                sup_err[order] = std::max(sup_err[order], std::abs(series[k] - exact));
            }
        }
    }
    CHECK(sup_err[3] < sup_err[2]);
    CHECK(sup_err[4] < sup_err[3]);
    CHECK(sup_err[4] < 0.05 * sup_err[2]); // factorial, not merely monotone
    CHECK(sup_err[4] < 1e-3);
}

TEST_CASE("market generation covers the experiment grids") {
    const BsModel model(0.2, 1.0);
    MarketGridSpec spec = MarketGridSpec::experiment_default();
    CHECK(spec.vanilla_strikes.size() == 7);
    CHECK(spec.vanilla_maturities.size() == 13);
    CHECK(spec.variance_strikes.size() == 7);
    CHECK(spec.barrier_out_strikes.size() == 7);
    CHECK(spec.barrier_out_levels.size() == 16);
    CHECK(spec.barrier_in_levels.size() == 13);
    CHECK(spec.vanilla_maturities.front() == doctest::Approx(0.4));
    CHECK(spec.vanilla_maturities.back() == doctest::Approx(1.0));

    GeneratedMarket market = bs_market(model, spec, 2000, 64, 99);
    CHECK(market.calibration.size() == 7 * 13 + 7 * 13 + 7 * 16);
    CHECK(market.heldout.size() == 7 * 13);
    for (std::size_t i = 0; i < market.calibration.size(); ++i) {
        REQUIRE(market.calibration[i].observed_price.has_value());
        CHECK(*market.calibration[i].observed_price >= 0.0);
        if (market.calibration[i].kind == InstrumentKind::vanilla_call)
            CHECK(market.calibration_se[i] == 0.0);
        else
            CHECK(market.calibration_se[i] >= 0.0); // 0 when no path ever pays
    }
    int positive_se = 0;
    for (double se : market.calibration_se) positive_se += se > 0.0;
    CHECK(positive_se > 100);
    // reproducibility: same seed, same prices, bit for bit
    GeneratedMarket again = bs_market(model, spec, 2000, 64, 99);
    for (std::size_t i = 0; i < market.heldout.size(); ++i)
        CHECK(*again.heldout[i].observed_price == *market.heldout[i].observed_price);

    CHECK_THROWS_AS(bs_market(model, MarketGridSpec{}, 100, 16, 1), std::invalid_argument);
}

TEST_CASE("closed-form vanilla prices sit inside the Monte Carlo error band") {
    const BsModel model(0.2, 1.0);
    auto grid = uniform_grid(1.0, 64);
    std::vector<MarketInstrument> calls;
    for (double strike : {0.7, 0.9, 1.0, 1.1})
        calls.push_back({InstrumentKind::vanilla_call, strike, 1.0, 0.0, {}});
    PathSampler sampler = [&](RngStream& rng) { return bs_simulate(model, grid, rng); };
    auto estimates = mc_instrument_prices(sampler, calls, 40000, 12345);
    for (std::size_t i = 0; i < calls.size(); ++i) {
        const double exact = bs_call_price(model, calls[i].strike, 1.0);
        CHECK(std::abs(estimates[i].price - exact) <= 4.0 * estimates[i].standard_error);
    }
}

TEST_CASE("empirical expected signature") {
    // deterministic sampler: zero error bars, mean equals that path exactly
    DiscretePath fixed({0.0, 0.4, 1.0}, {0.0, 0.3, -0.2}, 1);
    PathSampler fixed_sampler = [&](RngStream&) { return fixed; };
    auto det = mc_expected_signature(fixed_sampler, 3, 16, 5);
    Signature direct = path_signature(fixed, 3);
    CHECK(det.standard_error.max_abs_coefficient() <= 1e-8);
    for (const auto& [word, coef] : direct.coefficients.terms())
        CHECK(det.mean.coefficient(word) == doctest::Approx(coef).epsilon(1e-12));

    // Brownian sampler: Gaussian moments at order 2
    auto grid = uniform_grid(1.0, 128);
    PathSampler bm = [&](RngStream& rng) {
        std::vector<double> values(grid.size(), 0.0);
        for (std::size_t k = 1; k < grid.size(); ++k)
            values[k] = values[k - 1] + std::sqrt(grid[k] - grid[k - 1]) * rng.gaussian();
        return DiscretePath(grid, std::move(values), 1);
    };
    auto est = mc_expected_signature(bm, 2, 20000, 777);
    const MultiIndex one(1, {1}), two(1, {1, 1});
    CHECK(std::abs(est.mean.coefficient(one)) <= 4.0 * est.standard_error.coefficient(one));
    CHECK(std::abs(est.mean.coefficient(two) - 0.5) <=
          4.0 * est.standard_error.coefficient(two) + 1e-12);
}

TEST_CASE("two-sample distribution distance") {
    std::vector<double> a, b;
    RngStream rng(2);
    for (int i = 0; i < 4000; ++i) {
        a.push_back(rng.gaussian());
        b.push_back(rng.gaussian());
    }
    CHECK(ks_statistic(a, b) < ks_threshold(0.01, a.size(), b.size()));

    std::vector<double> shifted = b;
    for (double& x : shifted) x += 1.0;
    CHECK(ks_statistic(a, shifted) > ks_threshold(0.01, a.size(), shifted.size()));

    CHECK(ks_threshold(0.01, 10000, 10000) == doctest::Approx(1.628 * std::sqrt(2.0 / 10000.0))
                                                  .epsilon(1e-3));
}
