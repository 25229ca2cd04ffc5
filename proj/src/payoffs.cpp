#include "sigsde/payoffs.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "sigsde/dense_tensor.hpp"
#include "sigsde/path_signature.hpp"
#include "sigsde/tensor_ops.hpp"

namespace sigsde {

std::string to_string(InstrumentKind kind) {
    switch (kind) {
        case InstrumentKind::vanilla_call: return "vanilla_call";
        case InstrumentKind::variance_call: return "variance_call";
        case InstrumentKind::barrier_down_out_call: return "barrier_down_out_call";
        case InstrumentKind::barrier_down_in_put: return "barrier_down_in_put";
    }
    throw std::logic_error("to_string: unknown instrument kind");
}

InstrumentKind instrument_kind_from_string(const std::string& name) {
    if (name == "vanilla_call") return InstrumentKind::vanilla_call;
    if (name == "variance_call") return InstrumentKind::variance_call;
    if (name == "barrier_down_out_call") return InstrumentKind::barrier_down_out_call;
    if (name == "barrier_down_in_put") return InstrumentKind::barrier_down_in_put;
    throw std::invalid_argument("unknown instrument kind: " + name);
}

bool is_barrier(InstrumentKind kind) {
    return kind == InstrumentKind::barrier_down_out_call ||
           kind == InstrumentKind::barrier_down_in_put;
}

void validate_instrument(const MarketInstrument& inst) {
    if (!(inst.strike > 0.0)) throw std::invalid_argument("instrument: strike must be positive");
    if (!(inst.maturity > 0.0))
        throw std::invalid_argument("instrument: maturity must be positive");
    if (is_barrier(inst.kind)) {
        if (!(inst.barrier > 0.0))
            throw std::invalid_argument("instrument: barrier level must be positive");
    } else if (inst.barrier != 0.0) {
        throw std::invalid_argument("instrument: barrier set on a non-barrier kind");
    }
}

namespace {

/// Running spot / quadratic-variation / minimum summaries of one scalar path
/// at a sorted list of query times. Queries between nodes interpolate the
/// polyline.
struct PathStats {
    std::vector<double> spot;
    std::vector<double> quadratic_variation;
    std::vector<double> running_min;

    PathStats(const DiscretePath& path, std::span<const double> sorted_times) {
        if (path.dimension() != 1)
            throw std::invalid_argument("payoff evaluation expects a scalar spot path");
        spot.reserve(sorted_times.size());
        quadratic_variation.reserve(sorted_times.size());
        running_min.reserve(sorted_times.size());

        const double t_begin = path.start_time();
        const double t_end = path.end_time();
        std::size_t node = 0; // last node with time <= current query
        double qv = 0.0;
        double min_v = path.value(0, 0);
        for (double t : sorted_times) {
            if (t < t_begin - 1e-12 || t > t_end + 1e-12)
                throw std::invalid_argument("payoff maturity outside the path horizon");
            while (node + 1 < path.sample_count() && path.time(node + 1) <= t) {
                const double step = path.value(node + 1, 0) - path.value(node, 0);
                qv += step * step;
                ++node;
                min_v = std::min(min_v, path.value(node, 0));
            }
            double x = path.value(node, 0);
            double partial_qv = qv;
            double partial_min = min_v;
            if (t > path.time(node) && node + 1 < path.sample_count()) {
                const double frac =
                    (t - path.time(node)) / (path.time(node + 1) - path.time(node));
                x += frac * (path.value(node + 1, 0) - path.value(node, 0));
                const double step = x - path.value(node, 0);
                partial_qv += step * step;
                partial_min = std::min(partial_min, x);
            }
            spot.push_back(x);
            quadratic_variation.push_back(partial_qv);
            running_min.push_back(partial_min);
        }
    }
};

double payoff_from_stats(const PathStats& stats, std::size_t time_index,
                         const MarketInstrument& inst) {
    const double x = stats.spot[time_index];
    switch (inst.kind) {
        case InstrumentKind::vanilla_call: return std::max(x - inst.strike, 0.0);
        case InstrumentKind::variance_call:
            return std::max(stats.quadratic_variation[time_index] - inst.strike, 0.0);
        case InstrumentKind::barrier_down_out_call:
            return stats.running_min[time_index] > inst.barrier ? std::max(x - inst.strike, 0.0)
                                                                : 0.0;
        case InstrumentKind::barrier_down_in_put:
            return stats.running_min[time_index] < inst.barrier ? std::max(inst.strike - x, 0.0)
                                                                : 0.0;
    }
    throw std::logic_error("payoff_from_stats: unknown instrument kind");
}

/// Sorted unique maturities plus each instrument's index into them.
std::pair<std::vector<double>, std::vector<std::size_t>> maturity_layout(
    std::span<const MarketInstrument> instruments) {
    std::vector<double> times;
    for (const auto& inst : instruments) times.push_back(inst.maturity);
    std::sort(times.begin(), times.end());
    times.erase(std::unique(times.begin(), times.end()), times.end());
    std::vector<std::size_t> index(instruments.size());
    for (std::size_t i = 0; i < instruments.size(); ++i)
        index[i] = static_cast<std::size_t>(
            std::lower_bound(times.begin(), times.end(), instruments[i].maturity) -
            times.begin());
    return {std::move(times), std::move(index)};
}

/// Dense signature coefficients of add_time(path) at each checkpoint time.
/// Row layout follows parameter_words(order).
std::vector<std::vector<double>> signature_checkpoints(const DiscretePath& path, int order,
                                                       std::span<const double> sorted_times) {
    DiscretePath augmented = add_time(path);
    DenseTensor partial_seg(2, order), partial(2, order);
    std::vector<std::vector<double>> rows;
    rows.reserve(sorted_times.size());
    std::size_t next = 0;

    auto snapshot_rows = [&](const DenseTensor& tensor) {
        rows.emplace_back(tensor.coefficients().begin(), tensor.coefficients().end());
    };

    path_signature_scan(augmented, order, [&](std::size_t node, const DenseTensor& running) {
        const double t_node = augmented.time(node);
        // flush checkpoints inside the segment that just ended
        while (next < sorted_times.size() && sorted_times[next] <= t_node + 1e-12) {
            const double t = sorted_times[next];
            if (t >= t_node - 1e-12 || node == 0) {
                snapshot_rows(running);
            } else {
                // checkpoint strictly inside the previous segment: rebuild by
                // composing the running signature at the previous node with
                // the partial segment. Handled by scanning again is wasteful,
                // so interpolate from this node backwards.
                const double t_prev = augmented.time(node - 1);
                const double frac = (t - t_prev) / (t_node - t_prev);
                std::vector<double> inc(2);
                inc[0] = (augmented.value(node, 0) - augmented.value(node - 1, 0)) * (frac - 1.0);
                inc[1] = (augmented.value(node, 1) - augmented.value(node - 1, 1)) * (frac - 1.0);
                dense_segment_exp(inc, partial_seg);
                dense_concat(running, partial_seg, partial);
                snapshot_rows(partial);
            }
            ++next;
        }
    });
    if (next < sorted_times.size())
        throw std::invalid_argument("signature features: maturity beyond the path horizon");
    return rows;
}

double auto_ridge(const Eigen::MatrixXd& gram) {
    return 1e-6 * gram.trace() / static_cast<double>(gram.rows());
}

} // namespace

double evaluate_payoff(const DiscretePath& path, const MarketInstrument& inst) {
    validate_instrument(inst);
    const double t[1] = {inst.maturity};
    PathStats stats(path, t);
    return payoff_from_stats(stats, 0, inst);
}

double evaluate_signature_payoff(const SignaturePayoff& payoff, const DiscretePath& path) {
    const double t[1] = {payoff.maturity};
    auto rows = signature_checkpoints(path, payoff.order, t);
    DenseTensor probe(2, payoff.order);
    double value = 0.0;
    for (const auto& [word, coef] : payoff.phi.terms())
        value += coef * rows[0][probe.word_index(word)];
    return value;
}

double price_signature_payoff(const SignaturePayoff& payoff, const LinearFunctional& esig) {
    if (esig.max_order() != LinearFunctional::kUnboundedOrder &&
        esig.max_order() < payoff.order)
        throw std::invalid_argument(
            "price_signature_payoff: expected signature truncated below the payoff order");
    return pair(payoff.phi, esig);
}

namespace {

/// One factorization per maturity, reused across every instrument sharing it.
/// ridge > 0 solves the regularized normal equations; ridge == 0 takes the
/// minimum-norm least-squares solution through a complete orthogonal
/// decomposition (the exact design is collinear by construction: pure-time
/// words are deterministic at a fixed maturity).
struct DesignSolver {
    bool exact = false;
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod;
    Eigen::LDLT<Eigen::MatrixXd> ldlt;
    Eigen::VectorXd column_scale;
    int rank = 0;

    void factorize(const Eigen::MatrixXd& train, double ridge) {
        exact = ridge == 0.0;
        if (exact) {
            // Eigen's default rank threshold is too optimistic for designs
            // with thousands of rows; scale it with the row count so exact
            // collinearities buried under Householder roundoff are seen.
            cod.setThreshold(Eigen::NumTraits<double>::epsilon() *
                             static_cast<double>(train.rows()));
            cod.compute(train);
            rank = static_cast<int>(cod.rank());
        } else {
            // ridge on standardized columns, so one lambda means the same
            // relative shrinkage for every feature scale
            column_scale = (train.colwise().squaredNorm() /
                            static_cast<double>(train.rows()))
                               .cwiseSqrt()
                               .cwiseMax(1e-300);
            const Eigen::MatrixXd scaled = train * column_scale.cwiseInverse().asDiagonal();
            Eigen::MatrixXd gram = scaled.transpose() * scaled;
            const double lambda = ridge < 0.0 ? auto_ridge(gram) : ridge;
            gram.diagonal().array() += lambda;
            ldlt.compute(gram);
            rank = static_cast<int>(train.cols());
        }
    }

    Eigen::VectorXd solve(const Eigen::MatrixXd& train, const Eigen::VectorXd& y) const {
        if (exact) return cod.solve(y);
        const Eigen::VectorXd rhs =
            column_scale.cwiseInverse().asDiagonal() * (train.transpose() * y);
        return column_scale.cwiseInverse().asDiagonal() * ldlt.solve(rhs);
    }
};

void check_path_budget(std::size_t n_paths, std::size_t n_features) {
    if (n_paths < 10 * n_features)
        throw std::invalid_argument("signature payoff fit: need at least 10 paths per feature (" +
                                    std::to_string(10 * n_features) + "), got " +
                                    std::to_string(n_paths));
}

PayoffFitResult fit_one(const Eigen::MatrixXd& features, const Eigen::VectorXd& targets,
                        const DesignSolver& solver, const std::vector<MultiIndex>& words,
                        int order, double maturity, std::size_t n_train) {
    const std::size_t n_paths = static_cast<std::size_t>(features.rows());
    const std::size_t n_holdout = n_paths - n_train;
    const auto train = features.topRows(static_cast<Eigen::Index>(n_train));
    const auto y_train = targets.head(static_cast<Eigen::Index>(n_train));
    const Eigen::VectorXd weights = solver.solve(train, y_train);

    PayoffFitResult fit;
    fit.payoff.order = order;
    fit.payoff.maturity = maturity;
    fit.payoff.phi = LinearFunctional(2, order);
    for (std::size_t f = 0; f < words.size(); ++f)
        fit.payoff.phi.add_term(words[f], weights(static_cast<Eigen::Index>(f)));
    fit.design_rank = solver.rank;
    fit.rank_deficient = solver.rank < static_cast<int>(words.size());

    fit.in_sample_rmse =
        std::sqrt((train * weights - y_train).squaredNorm() / double(n_train));
    if (n_holdout > 0) {
        const auto hold = features.bottomRows(static_cast<Eigen::Index>(n_holdout));
        const auto y_hold = targets.tail(static_cast<Eigen::Index>(n_holdout));
        fit.holdout_rmse = std::sqrt((hold * weights - y_hold).squaredNorm() / double(n_holdout));
    }
    const double mean = targets.mean();
    fit.payoff_std = std::sqrt((targets.array() - mean).square().sum() /
                               std::max<double>(1.0, double(n_paths - 1)));
    return fit;
}

} // namespace

std::vector<PayoffFitResult> fit_signature_payoffs(const std::vector<DiscretePath>& paths,
                                                   std::span<const MarketInstrument> instruments,
                                                   int order, double ridge) {
    const auto words = parameter_words(order);
    const std::size_t n_features = words.size();
    const std::size_t n_paths = paths.size();
    check_path_budget(n_paths, n_features);
    for (const auto& inst : instruments) validate_instrument(inst);

    auto [times, time_index] = maturity_layout(instruments);
    const std::size_t n_train = n_paths - n_paths / 5;

    std::vector<Eigen::MatrixXd> features(times.size(), Eigen::MatrixXd(n_paths, n_features));
    std::vector<Eigen::VectorXd> targets(instruments.size(), Eigen::VectorXd(n_paths));
    for (std::size_t p = 0; p < n_paths; ++p) {
        auto rows = signature_checkpoints(paths[p], order, times);
        for (std::size_t m = 0; m < times.size(); ++m)
            for (std::size_t f = 0; f < n_features; ++f)
                features[m](static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(f)) =
                    rows[m][f];
        PathStats stats(paths[p], times);
        for (std::size_t i = 0; i < instruments.size(); ++i)
            targets[i](static_cast<Eigen::Index>(p)) =
                payoff_from_stats(stats, time_index[i], instruments[i]);
    }

    std::vector<DesignSolver> solvers(times.size());
    for (std::size_t m = 0; m < times.size(); ++m)
        solvers[m].factorize(features[m].topRows(static_cast<Eigen::Index>(n_train)), ridge);

    std::vector<PayoffFitResult> results;
    results.reserve(instruments.size());
    for (std::size_t i = 0; i < instruments.size(); ++i) {
        const std::size_t m = time_index[i];
        results.push_back(fit_one(features[m], targets[i], solvers[m], words, order,
                                  instruments[i].maturity, n_train));
    }
    return results;
}

PayoffFitResult fit_signature_payoff(const std::vector<DiscretePath>& paths,
                                     const MarketInstrument& inst, int order, double ridge) {
    const MarketInstrument list[1] = {inst};
    return fit_signature_payoffs(paths, list, order, ridge).front();
}

PayoffFitResult fit_signature_payoff_targets(const std::vector<DiscretePath>& paths,
                                             double maturity, std::span<const double> targets,
                                             int order, double ridge) {
    const auto words = parameter_words(order);
    const std::size_t n_paths = paths.size();
    check_path_budget(n_paths, words.size());
    if (targets.size() != n_paths)
        throw std::invalid_argument("fit_signature_payoff_targets: one target per path required");

    const double times[1] = {maturity};
    Eigen::MatrixXd features(n_paths, words.size());
    Eigen::VectorXd y(n_paths);
    for (std::size_t p = 0; p < n_paths; ++p) {
        auto rows = signature_checkpoints(paths[p], order, times);
        for (std::size_t f = 0; f < words.size(); ++f)
            features(static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(f)) = rows[0][f];
        y(static_cast<Eigen::Index>(p)) = targets[p];
    }
    const std::size_t n_train = n_paths - n_paths / 5;
    DesignSolver solver;
    solver.factorize(features.topRows(static_cast<Eigen::Index>(n_train)), ridge);
    return fit_one(features, y, solver, words, order, maturity, n_train);
}

std::vector<McEstimate> mc_instrument_prices(const PathSampler& sampler,
                                             std::span<const MarketInstrument> instruments,
                                             std::size_t n_paths, std::uint64_t seed) {
    if (n_paths < 2)
        throw std::invalid_argument("mc_instrument_prices: need at least two paths");
    for (const auto& inst : instruments) validate_instrument(inst);
    auto [times, time_index] = maturity_layout(instruments);

    std::vector<double> sum(instruments.size(), 0.0), sum2(instruments.size(), 0.0);
    for (std::size_t p = 0; p < n_paths; ++p) {
        RngStream rng = RngStream::substream(seed, p);
        DiscretePath path = sampler(rng);
        PathStats stats(path, times);
        for (std::size_t i = 0; i < instruments.size(); ++i) {
            const double value = payoff_from_stats(stats, time_index[i], instruments[i]);
            sum[i] += value;
            sum2[i] += value * value;
        }
    }
    std::vector<McEstimate> out(instruments.size());
    const double n = static_cast<double>(n_paths);
    for (std::size_t i = 0; i < instruments.size(); ++i) {
        const double mean = sum[i] / n;
        const double var = std::max(0.0, (sum2[i] - n * mean * mean) / (n - 1.0));
        out[i] = {mean, std::sqrt(var / n)};
    }
    return out;
}

std::vector<McEstimate> mc_prices(const SigSdeParams& params,
                                  std::span<const MarketInstrument> instruments,
                                  std::size_t n_paths, std::uint64_t seed,
                                  const std::vector<double>& grid) {
    PathSampler sampler = [&](RngStream& rng) { return simulate(params, grid, rng); };
    return mc_instrument_prices(sampler, instruments, n_paths, seed);
}

McEstimate mc_price(const SigSdeParams& params, const MarketInstrument& inst,
                    std::size_t n_paths, std::uint64_t seed, const std::vector<double>& grid) {
    const MarketInstrument list[1] = {inst};
    return mc_prices(params, list, n_paths, seed, grid).front();
}

} // namespace sigsde
