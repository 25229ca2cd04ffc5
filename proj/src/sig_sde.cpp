#include "sigsde/sig_sde.hpp"

#include <cmath>
#include <stdexcept>

#include "sigsde/dense_tensor.hpp"
#include "sigsde/path_signature.hpp"
#include "sigsde/tensor_ops.hpp"

namespace sigsde {

SigSdeParams::SigSdeParams(int order_, double x0_, LinearFunctional ell_)
    : order(order_), x0(x0_), ell(std::move(ell_)) {
    if (order < 0) throw std::invalid_argument("SigSdeParams: order must be non-negative");
    if (ell.alphabet_size() != 2)
        throw std::invalid_argument("SigSdeParams: ell must live on the alphabet {1,2}");
    if (ell.top_word_length() > order)
        throw std::invalid_argument("SigSdeParams: ell contains words longer than the order");
}

std::size_t SigSdeParams::coefficient_count(int order) {
    return (static_cast<std::size_t>(1) << (order + 1)) - 1;
}

std::vector<MultiIndex> parameter_words(int order) {
    std::vector<MultiIndex> words{MultiIndex::empty(2)};
    std::size_t begin = 0;
    for (int len = 1; len <= order; ++len) {
        std::size_t end = words.size();
        for (std::size_t i = begin; i < end; ++i)
            for (int a = 1; a <= 2; ++a) words.push_back(words[i].append(a));
        begin = end;
    }
    return words;
}

LinearFunctional ell_from_vector(const std::vector<double>& coeffs, int order) {
    auto words = parameter_words(order);
    if (coeffs.size() != words.size())
        throw std::invalid_argument("ell_from_vector: expected " + std::to_string(words.size()) +
                                    " coefficients, got " + std::to_string(coeffs.size()));
    LinearFunctional ell(2, order);
    for (std::size_t i = 0; i < words.size(); ++i) ell.add_term(words[i], coeffs[i]);
    return ell;
}

std::vector<double> ell_to_vector(const LinearFunctional& ell, int order) {
    auto words = parameter_words(order);
    std::vector<double> out(words.size());
    for (std::size_t i = 0; i < words.size(); ++i) out[i] = ell.coefficient(words[i]);
    return out;
}

namespace {

// ell reindexed onto the 3-letter lead-lag alphabet (letters keep their
// values: 1 = time, 2 = lag driver) with the integrator letter 3 appended.
LinearFunctional integrator_part(const SigSdeParams& params, int max_order) {
    LinearFunctional out(3, max_order);
    for (const auto& [word, coef] : params.ell.terms())
        out.add_term(word.with_alphabet(3).append(3), coef);
    return out;
}

} // namespace

LinearFunctional path_functional(const SigSdeParams& params) {
    LinearFunctional out = integrator_part(params, params.order + 1);
    out.add_term(MultiIndex::empty(3), params.x0);
    return out;
}

LinearFunctional lift_word(const MultiIndex& word, const SigSdeParams& params,
                           int algebra_order) {
    if (word.alphabet_size() != 2 || word.is_empty())
        throw std::invalid_argument("lift_word: need a non-empty word over {1,2}");
    const LinearFunctional p1 = LinearFunctional::monomial(MultiIndex(3, {1}), 1.0);
    const LinearFunctional p2 = integrator_part(params, algebra_order);
    auto factor = [&](int letter) -> const LinearFunctional& { return letter == 1 ? p1 : p2; };
    LinearFunctional chain = truncate(factor(word.letter(0)), algebra_order);
    for (std::size_t i = 1; i < word.length(); ++i)
        chain = half_shuffle(chain, factor(word.letter(i)), algebra_order);
    return chain;
}

DiscretePath simulate(const SigSdeParams& params, const std::vector<double>& grid,
                      RngStream& rng) {
    if (grid.size() < 2) throw std::invalid_argument("simulate: grid needs at least two nodes");
    if (grid.front() != 0.0) throw std::invalid_argument("simulate: grid must start at time 0");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw std::invalid_argument("simulate: grid must be strictly increasing");

    const int sig_order = params.order + 1;
    DenseTensor running(3, sig_order);
    DenseTensor lead_seg(3, sig_order);
    DenseTensor lag_seg(3, sig_order);
    DenseTensor interval(3, sig_order);
    DenseTensor scratch(3, sig_order);
    running.set_identity();

    // flat tensor indices of the integrator words, paired with ell
    std::vector<std::pair<std::size_t, double>> readout;
    readout.reserve(params.ell.term_count());
    for (const auto& [word, coef] : params.ell.terms())
        readout.emplace_back(running.word_index(word.with_alphabet(3).append(3)), coef);

    std::vector<double> values(grid.size());
    values[0] = params.x0;
    double increment[3];
    std::span<const double> inc_span(increment, 3);
    for (std::size_t k = 1; k < grid.size(); ++k) {
        const double dt = grid[k] - grid[k - 1];
        const double dw = std::sqrt(dt) * rng.gaussian();
        // lead channel moves first while (t, lag) stay frozen ...
        increment[0] = 0.0;
        increment[1] = 0.0;
        increment[2] = dw;
        dense_segment_exp(inc_span, lead_seg);
        // ... then time and lag advance together, lead frozen
        increment[0] = dt;
        increment[1] = dw;
        increment[2] = 0.0;
        dense_segment_exp(inc_span, lag_seg);
        dense_concat(lead_seg, lag_seg, interval);
        dense_concat(running, interval, scratch);
        std::swap(running, scratch);

        double x = params.x0;
        for (const auto& [idx, coef] : readout) x += coef * running[idx];
        values[k] = x;
    }
    return DiscretePath(grid, std::move(values), 1);
}

std::vector<double> volatility_series(const SigSdeParams& params, const DiscretePath& driver) {
    if (driver.dimension() != 1)
        throw std::invalid_argument("volatility_series: driver must be one-dimensional");
    DiscretePath augmented = add_time(driver);
    std::vector<std::pair<std::size_t, double>> readout;
    DenseTensor probe(2, params.order);
    for (const auto& [word, coef] : params.ell.terms())
        readout.emplace_back(probe.word_index(word), coef);

    std::vector<double> series(driver.sample_count());
    path_signature_scan(augmented, params.order,
                        [&](std::size_t node, const DenseTensor& running) {
                            double sigma = 0.0;
                            for (const auto& [idx, coef] : readout) sigma += coef * running[idx];
                            series[node] = sigma;
                        });
    return series;
}

} // namespace sigsde
