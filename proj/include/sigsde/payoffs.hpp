#ifndef SIGSDE_PAYOFFS_HPP
#define SIGSDE_PAYOFFS_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sigsde/discrete_path.hpp"
#include "sigsde/linear_functional.hpp"
#include "sigsde/rng.hpp"
#include "sigsde/sig_sde.hpp"

namespace sigsde {

enum class InstrumentKind {
    vanilla_call,
    variance_call,
    barrier_down_out_call,
    barrier_down_in_put,
};

std::string to_string(InstrumentKind kind);
InstrumentKind instrument_kind_from_string(const std::string& name);
bool is_barrier(InstrumentKind kind);

/// One payoff specification, optionally with an observed market price.
/// Variance strikes are in variance units; the barrier level applies to the
/// two barrier kinds only.
struct MarketInstrument {
    InstrumentKind kind;
    double strike = 0.0;
    double maturity = 0.0;
    double barrier = 0.0;
    std::optional<double> observed_price;
};

/// Structural checks that do not need market context: positive strike and
/// maturity, barrier set exactly for barrier kinds.
void validate_instrument(const MarketInstrument& inst);

/// Payoff of one sampled path. The path is read as piecewise linear: the
/// spot at maturity interpolates linearly, quadratic variation sums squared
/// increments of the sampled (and final interpolated) values up to maturity,
/// and barriers are monitored at the sampled nodes, which is exact for a
/// polyline. Throws when the maturity is outside the path horizon.
double evaluate_payoff(const DiscretePath& path, const MarketInstrument& inst);

/// A payoff paying <phi, signature of (t, X) over [0, maturity]> at maturity.
struct SignaturePayoff {
    LinearFunctional phi{2}; // alphabet {1,2}: 1 = time, 2 = spot
    int order = 0;           // max word length used for features
    double maturity = 0.0;
};

/// Pathwise cash flow of a signature payoff.
double evaluate_signature_payoff(const SignaturePayoff& payoff, const DiscretePath& path);

/// Algebraic price: pairing with the model expected signature, which must
/// carry words at least up to the payoff order.
double price_signature_payoff(const SignaturePayoff& payoff, const LinearFunctional& esig);

/// Pass a negative ridge to get the default scaling
/// 1e-6 * trace(Gram) / n_features.
inline constexpr double kAutoRidge = -1.0;

struct PayoffFitResult {
    SignaturePayoff payoff;
    double in_sample_rmse = 0.0;
    double holdout_rmse = 0.0;
    double payoff_std = 0.0; // payoff standard deviation over all paths
    int design_rank = 0;     // numeric rank of the training design
    bool rank_deficient = false;
};

/// Least-squares projection of the pathwise payoff onto signature features
/// of the time-augmented path at the instrument maturity, words up to
/// `order`. The last 20% of the paths are held out for the reported
/// out-of-sample RMSE. With ridge > 0 the regularized normal equations are
/// solved; with ridge == 0 the minimum-norm least-squares solution is taken
/// and any rank deficiency is reported in the result. (Pure-time feature
/// words are deterministic at a fixed maturity, so the exact design is
/// collinear by construction.) Requires at least 10 paths per feature.
PayoffFitResult fit_signature_payoff(const std::vector<DiscretePath>& paths,
                                     const MarketInstrument& inst, int order,
                                     double ridge = kAutoRidge);

/// Batch variant sharing the feature extraction across instruments.
std::vector<PayoffFitResult> fit_signature_payoffs(const std::vector<DiscretePath>& paths,
                                                   std::span<const MarketInstrument> instruments,
                                                   int order, double ridge = kAutoRidge);

/// Regression against caller-supplied pathwise cash flows instead of a named
/// instrument (one value per path).
PayoffFitResult fit_signature_payoff_targets(const std::vector<DiscretePath>& paths,
                                             double maturity, std::span<const double> targets,
                                             int order, double ridge = kAutoRidge);

struct McEstimate {
    double price = 0.0;
    double standard_error = 0.0;
};

/// Draws one path per sub-stream of `seed` from an arbitrary sampler and
/// averages the instrument payoffs. Needs n_paths >= 2 for the error bar.
using PathSampler = std::function<DiscretePath(RngStream&)>;
std::vector<McEstimate> mc_instrument_prices(const PathSampler& sampler,
                                             std::span<const MarketInstrument> instruments,
                                             std::size_t n_paths, std::uint64_t seed);

/// Monte Carlo price under the model itself (the cross-check oracle for the
/// algebraic pricer).
McEstimate mc_price(const SigSdeParams& params, const MarketInstrument& inst,
                    std::size_t n_paths, std::uint64_t seed,
                    const std::vector<double>& grid);
std::vector<McEstimate> mc_prices(const SigSdeParams& params,
                                  std::span<const MarketInstrument> instruments,
                                  std::size_t n_paths, std::uint64_t seed,
                                  const std::vector<double>& grid);

} // namespace sigsde

#endif
