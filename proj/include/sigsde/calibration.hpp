#ifndef SIGSDE_CALIBRATION_HPP
#define SIGSDE_CALIBRATION_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "sigsde/payoffs.hpp"
#include "sigsde/sig_sde.hpp"

namespace sigsde {

/// One calibration target: a signature payoff, its observed price, a
/// positive weight, and (optionally) the instrument it was fitted from,
/// which the starting-point heuristic may inspect.
struct CalibrationInstrument {
    SignaturePayoff payoff;
    double price = 0.0;
    double weight = 1.0;
    std::optional<MarketInstrument> meta;
};

struct OptimizerConfig {
    int starts = 8;
    int max_iterations = 500;
    double tol_gradient = 1e-10;
    double tol_step = 1e-12;
    std::uint64_t seed = 0;
    int algebra_order = 0;          // 0: use default_algebra_order(model order)
    bool analytic_jacobian = false; // default: central finite differences
    double fd_step = 1e-6;
    double start_perturbation = 0.1;
};

struct CalibrationProblem {
    std::vector<CalibrationInstrument> instruments;
    int model_order = 4;
    double horizon = 1.0;
    double x0 = 1.0;
    OptimizerConfig config;
};

void validate_problem(const CalibrationProblem& problem);

/// Model prices of every instrument as explicit polynomials in the readout
/// coefficients. Built once per problem: the word lifts are multilinear in
/// the readout, so each pairing with the driver expected signature collapses
/// to a polynomial whose coefficients are maturity-dependent constants.
/// Evaluation afterwards is a few hundred thousand multiply-adds, which is
/// what makes derivative-based calibration cheap.
class PricePolynomials {
public:
    explicit PricePolynomials(const CalibrationProblem& problem);

    std::size_t parameter_count() const { return n_params_; }
    std::size_t instrument_count() const { return n_instruments_; }

    /// Model price per instrument at these readout coordinates.
    std::vector<double> prices(std::span<const double> theta) const;

    /// Weighted residuals sqrt(w_i) * (price_i(theta) - p_i).
    std::vector<double> residuals(std::span<const double> theta) const;

    /// Sum of squared weighted residuals.
    double objective(std::span<const double> theta) const;

    /// d(residual_i)/d(theta_j), exact polynomial differentiation.
    std::vector<double> residual_jacobian(std::span<const double> theta) const;

    /// Whether any word lift exceeded the algebra truncation (see
    /// TruncationReport in the expected-signature module).
    bool truncated() const { return truncated_; }

private:
    struct Monomial {
        std::vector<std::uint8_t> vars; // sorted parameter indices, repeats allowed
        double coefficient = 0.0;
    };
    // per maturity, per parameter word: the polynomial giving that word's
    // expected-signature coordinate
    std::vector<std::vector<std::vector<Monomial>>> tables_;
    std::vector<std::size_t> maturity_of_instrument_;
    // instrument readouts as (word index, coefficient) pairs
    std::vector<std::vector<std::pair<std::size_t, double>>> readouts_;
    std::vector<double> target_prices_;
    std::vector<double> weight_sqrt_;
    std::size_t n_params_ = 0;
    std::size_t n_instruments_ = 0;
    std::size_t n_words_ = 0;
    bool truncated_ = false;

    void evaluate_words(std::span<const double> theta, std::size_t maturity_index,
                        std::vector<double>& word_values) const;
};

/// The calibration objective at the given readout coordinates. Builds the
/// polynomial tables on the spot; inside optimization loops construct
/// PricePolynomials once and reuse it.
double objective(const std::vector<double>& theta, const CalibrationProblem& problem);

enum class StopReason { gradient, step, max_iterations, stalled };

struct IterationRecord {
    int iteration = 0;
    double objective = 0.0;
    double gradient_norm = 0.0;
    double step_norm = 0.0;
    double damping = 0.0;
};

struct CalibrationResult {
    SigSdeParams params;
    double objective = 0.0;
    std::vector<double> residuals;       // weighted, signed
    std::vector<double> model_prices;    // unweighted model prices
    std::vector<IterationRecord> trace;  // winning start
    StopReason stop_reason = StopReason::max_iterations;
    int best_start = 0;
    std::vector<double> start_objectives;
    bool truncated = false;
};

/// Damped least squares from several starting points: start 1 scales the
/// constant readout from an implied-vol inversion of the most at-the-money
/// vanilla (falling back to 0.2 * x0), the rest are seeded Gaussian
/// perturbations of it. Deterministic for a fixed seed. Never returns an
/// objective above the best evaluated starting point.
CalibrationResult calibrate(const CalibrationProblem& problem);

} // namespace sigsde

#endif
