#include "sigsde/calibration.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "sigsde/dense_tensor.hpp"
#include "sigsde/expected_signature.hpp"
#include "sigsde/market_lab.hpp"
#include "sigsde/tensor_ops.hpp"

namespace sigsde {

void validate_problem(const CalibrationProblem& problem) {
    if (problem.instruments.empty())
        throw std::invalid_argument("calibration: at least one instrument required");
    if (problem.model_order < 0) throw std::invalid_argument("calibration: bad model order");
    if (!(problem.horizon > 0.0)) throw std::invalid_argument("calibration: bad horizon");
    for (const auto& inst : problem.instruments) {
        if (inst.payoff.phi.alphabet_size() != 2)
            throw std::invalid_argument("calibration: payoffs must live on the {1,2} alphabet");
        if (!(inst.weight > 0.0))
            throw std::invalid_argument("calibration: weights must be positive");
        if (!(inst.payoff.maturity > 0.0) || inst.payoff.maturity > problem.horizon + 1e-12)
            throw std::invalid_argument("calibration: payoff maturity outside (0, horizon]");
    }
    if (problem.config.starts < 1) throw std::invalid_argument("calibration: starts must be >= 1");
}

PricePolynomials::PricePolynomials(const CalibrationProblem& problem) {
    validate_problem(problem);
    const int order = problem.model_order;
    const auto param_words = parameter_words(order);
    n_params_ = param_words.size();
    n_instruments_ = problem.instruments.size();

    int word_order = 0;
    for (const auto& inst : problem.instruments)
        word_order = std::max(word_order, inst.payoff.phi.top_word_length());
    const int algebra_order = problem.config.algebra_order > 0
                                  ? problem.config.algebra_order
                                  : default_algebra_order(order);
    truncated_ = word_order * (order + 1) > algebra_order;

    // distinct maturities
    std::vector<double> maturities;
    for (const auto& inst : problem.instruments) maturities.push_back(inst.payoff.maturity);
    std::sort(maturities.begin(), maturities.end());
    maturities.erase(std::unique(maturities.begin(), maturities.end()), maturities.end());
    maturity_of_instrument_.resize(n_instruments_);
    for (std::size_t i = 0; i < n_instruments_; ++i)
        maturity_of_instrument_[i] = static_cast<std::size_t>(
            std::lower_bound(maturities.begin(), maturities.end(),
                             problem.instruments[i].payoff.maturity) -
            maturities.begin());

    // instrument readouts over the pricing words
    const auto pricing_words = parameter_words(word_order);
    n_words_ = pricing_words.size();
    std::map<MultiIndex, std::size_t> word_rank;
    for (std::size_t i = 0; i < pricing_words.size(); ++i) word_rank[pricing_words[i]] = i;
    readouts_.resize(n_instruments_);
    target_prices_.resize(n_instruments_);
    weight_sqrt_.resize(n_instruments_);
    for (std::size_t i = 0; i < n_instruments_; ++i) {
        const auto& inst = problem.instruments[i];
        target_prices_[i] = inst.price;
        weight_sqrt_[i] = std::sqrt(inst.weight);
        for (const auto& [w, c] : inst.payoff.phi.terms()) readouts_[i].emplace_back(word_rank.at(w), c);
    }

    // dense driver expected signatures per maturity
    std::vector<DenseTensor> driver_esig;
    driver_esig.reserve(maturities.size());
    for (double t : maturities)
        driver_esig.push_back(DenseTensor::from_linear_functional(
            leadlag_bm_expected_signature(t, algebra_order), algebra_order));

    tables_.assign(maturities.size(),
                   std::vector<std::vector<Monomial>>(n_words_));
    for (std::size_t m = 0; m < maturities.size(); ++m)
        for (auto& polys : tables_[m])
            polys.clear();
    // constant word (index 0): expected-signature coordinate 1
    for (std::size_t m = 0; m < maturities.size(); ++m)
        tables_[m][0].push_back(Monomial{{}, 1.0});

    // basis integrator words: parameter word reindexed onto {1,2,3} with the
    // integrator letter appended
    std::vector<LinearFunctional> basis;
    basis.reserve(n_params_);
    for (const auto& w : param_words)
        basis.push_back(
            LinearFunctional::monomial(w.with_alphabet(3).append(3), 1.0, algebra_order));
    const LinearFunctional clock = LinearFunctional::monomial(MultiIndex(3, {1}), 1.0);

    // Depth-first walk over pricing words and slot assignments. Every node
    // carries the half-shuffle chain of its basis choices; the pairing with
    // each maturity's driver signature lands in that word's polynomial as
    // one monomial contribution. Truncation empties deep chains fast, which
    // is what keeps the walk small.
    struct Frame {
        std::size_t word_index;
        int depth;
        LinearFunctional chain;
        std::vector<std::uint8_t> monomial; // unsorted slot choices
    };
    auto register_node = [&](const Frame& frame) {
        std::vector<std::uint8_t> key = frame.monomial;
        std::sort(key.begin(), key.end());
        for (std::size_t m = 0; m < maturities.size(); ++m) {
            const double value = dense_pair(frame.chain, driver_esig[m]);
            if (value == 0.0) continue;
            auto& polys = tables_[m][frame.word_index];
            auto it = std::find_if(polys.begin(), polys.end(),
                                   [&](const Monomial& mono) { return mono.vars == key; });
            if (it == polys.end())
                polys.push_back(Monomial{key, value});
            else
                it->coefficient += value;
        }
    };

    // children of word w in the canonical layout: index(w append a) =
    // level_offset(len+1) + 2 * rank_in_level(w) + (a - 1); equivalently
    // 2 * index(w) + a for the {1,2} alphabet with level-concatenated layout.
    auto child_index = [](std::size_t parent, int letter) {
        return 2 * parent + static_cast<std::size_t>(letter);
    };

    std::vector<Frame> stack;
    if (word_order >= 1) {
        stack.push_back(Frame{child_index(0, 1), 1, truncate(clock, algebra_order), {}});
        for (std::size_t j = 0; j < n_params_; ++j)
            stack.push_back(Frame{child_index(0, 2), 1, basis[j], {static_cast<std::uint8_t>(j)}});
    }

    while (!stack.empty()) {
        Frame frame = std::move(stack.back());
        stack.pop_back();
        if (frame.chain.is_zero()) continue;
        register_node(frame);
        if (frame.depth >= word_order) continue;
        // letter-1 extension integrates against the clock
        stack.push_back(Frame{child_index(frame.word_index, 1), frame.depth + 1,
                              half_shuffle(frame.chain, clock, algebra_order),
                              frame.monomial});
        // letter-2 extension integrates against the spot: one slot per basis word
        for (std::size_t j = 0; j < n_params_; ++j) {
            LinearFunctional next = half_shuffle(frame.chain, basis[j], algebra_order);
            if (next.is_zero()) continue;
            auto monomial = frame.monomial;
            monomial.push_back(static_cast<std::uint8_t>(j));
            stack.push_back(Frame{child_index(frame.word_index, 2), frame.depth + 1,
                                  std::move(next), std::move(monomial)});
        }
    }
}

void PricePolynomials::evaluate_words(std::span<const double> theta, std::size_t maturity_index,
                                      std::vector<double>& word_values) const {
    const auto& table = tables_[maturity_index];
    word_values.assign(n_words_, 0.0);
    for (std::size_t w = 0; w < n_words_; ++w) {
        double total = 0.0;
        for (const auto& mono : table[w]) {
            double term = mono.coefficient;
            for (std::uint8_t v : mono.vars) term *= theta[v];
            total += term;
        }
        word_values[w] = total;
    }
}

std::vector<double> PricePolynomials::prices(std::span<const double> theta) const {
    if (theta.size() != n_params_)
        throw std::invalid_argument("prices: expected " + std::to_string(n_params_) +
                                    " coordinates, got " + std::to_string(theta.size()));
    std::vector<std::vector<double>> words_per_maturity(tables_.size());
    std::vector<double> out(n_instruments_, 0.0);
    for (std::size_t i = 0; i < n_instruments_; ++i) {
        const std::size_t m = maturity_of_instrument_[i];
        if (words_per_maturity[m].empty()) evaluate_words(theta, m, words_per_maturity[m]);
        double price = 0.0;
        for (const auto& [w, c] : readouts_[i]) price += c * words_per_maturity[m][w];
        out[i] = price;
    }
    return out;
}

std::vector<double> PricePolynomials::residuals(std::span<const double> theta) const {
    std::vector<double> r = prices(theta);
    for (std::size_t i = 0; i < n_instruments_; ++i)
        r[i] = weight_sqrt_[i] * (r[i] - target_prices_[i]);
    return r;
}

double PricePolynomials::objective(std::span<const double> theta) const {
    double total = 0.0;
    for (double r : residuals(theta)) total += r * r;
    return total;
}

std::vector<double> PricePolynomials::residual_jacobian(std::span<const double> theta) const {
    if (theta.size() != n_params_)
        throw std::invalid_argument("residual_jacobian: wrong coordinate count");
    // d(word value)/d(theta_j) per maturity, then chain through the readouts
    std::vector<double> jac(n_instruments_ * n_params_, 0.0);
    std::vector<std::vector<double>> word_grads(tables_.size());
    for (std::size_t m = 0; m < tables_.size(); ++m) {
        bool needed = false;
        for (std::size_t i = 0; i < n_instruments_; ++i)
            needed = needed || maturity_of_instrument_[i] == m;
        if (!needed) continue;
        auto& grads = word_grads[m];
        grads.assign(n_words_ * n_params_, 0.0);
        for (std::size_t w = 0; w < n_words_; ++w) {
            for (const auto& mono : tables_[m][w]) {
                const std::size_t deg = mono.vars.size();
                for (std::size_t k = 0; k < deg; ++k) {
                    double term = mono.coefficient;
                    for (std::size_t l = 0; l < deg; ++l)
                        if (l != k) term *= theta[mono.vars[l]];
                    grads[w * n_params_ + mono.vars[k]] += term;
                }
            }
        }
    }
    for (std::size_t i = 0; i < n_instruments_; ++i) {
        const auto& grads = word_grads[maturity_of_instrument_[i]];
        for (const auto& [w, c] : readouts_[i])
            for (std::size_t j = 0; j < n_params_; ++j)
                jac[i * n_params_ + j] += weight_sqrt_[i] * c * grads[w * n_params_ + j];
    }
    return jac;
}

double objective(const std::vector<double>& theta, const CalibrationProblem& problem) {
    const std::size_t expected = SigSdeParams::coefficient_count(problem.model_order);
    if (theta.size() != expected)
        throw std::invalid_argument("objective: expected " + std::to_string(expected) +
                                    " coordinates, got " + std::to_string(theta.size()));
    return PricePolynomials(problem).objective(theta);
}

namespace {

struct StartResult {
    std::vector<double> theta;
    double objective = std::numeric_limits<double>::infinity();
    std::vector<IterationRecord> trace;
    StopReason stop_reason = StopReason::max_iterations;
};

Eigen::MatrixXd fd_jacobian(const PricePolynomials& pricer, std::vector<double>& theta,
                            double fd_step) {
    const std::size_t n = theta.size();
    const std::size_t m = pricer.instrument_count();
    Eigen::MatrixXd jac(m, n);
    for (std::size_t j = 0; j < n; ++j) {
        const double saved = theta[j];
        const double h = fd_step * std::max(1.0, std::abs(saved));
        theta[j] = saved + h;
        const std::vector<double> up = pricer.residuals(theta);
        theta[j] = saved - h;
        const std::vector<double> down = pricer.residuals(theta);
        theta[j] = saved;
        for (std::size_t i = 0; i < m; ++i)
            jac(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                (up[i] - down[i]) / (2.0 * h);
    }
    return jac;
}

Eigen::MatrixXd analytic_jacobian(const PricePolynomials& pricer,
                                  const std::vector<double>& theta) {
    const std::size_t n = theta.size();
    const std::size_t m = pricer.instrument_count();
    const std::vector<double> flat = pricer.residual_jacobian(theta);
    Eigen::MatrixXd jac(m, n);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j)
            jac(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                flat[i * n + j];
    return jac;
}

StartResult run_start(const PricePolynomials& pricer, std::vector<double> theta,
                      const OptimizerConfig& config) {
    StartResult out;
    const std::size_t n = theta.size();
    std::vector<double> residual = pricer.residuals(theta);
    double cost = 0.0;
    for (double r : residual) cost += r * r;

    double damping = 1e-3;
    out.trace.push_back({0, cost, 0.0, 0.0, damping});
    out.stop_reason = StopReason::max_iterations;

    for (int iter = 1; iter <= config.max_iterations; ++iter) {
        Eigen::MatrixXd jac = config.analytic_jacobian
                                  ? analytic_jacobian(pricer, theta)
                                  : fd_jacobian(pricer, theta, config.fd_step);
        Eigen::VectorXd r = Eigen::Map<Eigen::VectorXd>(residual.data(), residual.size());
        Eigen::VectorXd gradient = 2.0 * jac.transpose() * r;
        const double gradient_norm = gradient.lpNorm<Eigen::Infinity>();
        if (gradient_norm < config.tol_gradient) {
            out.stop_reason = StopReason::gradient;
            out.trace.push_back({iter, cost, gradient_norm, 0.0, damping});
            break;
        }

        const Eigen::MatrixXd gram = jac.transpose() * jac;
        Eigen::VectorXd scale = gram.diagonal().cwiseMax(1e-30);

        bool accepted = false;
        double step_norm = 0.0;
        while (!accepted) {
            Eigen::MatrixXd damped = gram;
            damped.diagonal() += damping * scale;
            const Eigen::VectorXd delta = damped.ldlt().solve(-0.5 * gradient);
            std::vector<double> candidate(n);
            for (std::size_t j = 0; j < n; ++j)
                candidate[j] = theta[j] + delta(static_cast<Eigen::Index>(j));
            std::vector<double> cand_residual = pricer.residuals(candidate);
            double cand_cost = 0.0;
            for (double x : cand_residual) cand_cost += x * x;
            if (cand_cost < cost) {
                accepted = true;
                step_norm = delta.norm();
                theta = std::move(candidate);
                residual = std::move(cand_residual);
                cost = cand_cost;
                damping = std::max(damping / 3.0, 1e-14);
            } else {
                damping *= 4.0;
                if (damping > 1e14) break;
            }
        }
        out.trace.push_back({iter, cost, gradient_norm, step_norm, damping});
        if (!accepted) {
            out.stop_reason = StopReason::stalled;
            break;
        }
        double theta_norm = 0.0;
        for (double x : theta) theta_norm += x * x;
        if (step_norm < config.tol_step * (std::sqrt(theta_norm) + config.tol_step)) {
            out.stop_reason = StopReason::step;
            break;
        }
    }
    out.theta = std::move(theta);
    out.objective = cost;
    return out;
}

std::vector<double> initial_scale_start(const CalibrationProblem& problem) {
    // scale the constant readout from an implied-vol read of the most
    // at-the-money vanilla available
    double sigma0 = 0.2;
    double best_score = std::numeric_limits<double>::infinity();
    for (const auto& inst : problem.instruments) {
        if (!inst.meta || inst.meta->kind != InstrumentKind::vanilla_call) continue;
        const double score = std::abs(inst.meta->strike - problem.x0) -
                             0.01 * inst.meta->maturity;
        if (score < best_score) {
            best_score = score;
            sigma0 = bs_implied_vol(inst.price, problem.x0, inst.meta->strike,
                                    inst.meta->maturity);
        }
    }
    std::vector<double> theta(SigSdeParams::coefficient_count(problem.model_order), 0.0);
    theta[0] = sigma0 * problem.x0;
    return theta;
}

} // namespace

CalibrationResult calibrate(const CalibrationProblem& problem) {
    validate_problem(problem);
    const PricePolynomials pricer(problem);
    const std::size_t n = SigSdeParams::coefficient_count(problem.model_order);

    const std::vector<double> base = initial_scale_start(problem);
    const double perturbation =
        problem.config.start_perturbation * std::max(std::abs(base[0]), 0.1);

    std::vector<StartResult> runs;
    runs.reserve(problem.config.starts);
    for (int s = 0; s < problem.config.starts; ++s) {
        std::vector<double> theta = base;
        if (s > 0) {
            RngStream rng = RngStream::substream(problem.config.seed, static_cast<std::uint64_t>(s));
            for (std::size_t j = 0; j < n; ++j) theta[j] += perturbation * rng.gaussian();
        }
        runs.push_back(run_start(pricer, std::move(theta), problem.config));
    }

    int best = 0;
    for (int s = 1; s < static_cast<int>(runs.size()); ++s)
        if (runs[s].objective < runs[best].objective) best = s;

    CalibrationResult result{
        SigSdeParams(problem.model_order, problem.x0,
                     ell_from_vector(runs[best].theta, problem.model_order)),
        runs[best].objective,
        pricer.residuals(runs[best].theta),
        pricer.prices(runs[best].theta),
        std::move(runs[best].trace),
        runs[best].stop_reason,
        best,
        {},
        pricer.truncated()};
    for (const auto& run : runs) result.start_objectives.push_back(run.objective);
    return result;
}

} // namespace sigsde
