#include "sigsde/path_signature.hpp"

#include <stdexcept>

#include "sigsde/tensor_ops.hpp"

namespace sigsde {

Signature identity_signature(int alphabet_size, int order) {
    return Signature{LinearFunctional::constant(alphabet_size, 1.0, order), order};
}

DiscretePath add_time(const DiscretePath& path) {
    const int d = path.dimension();
    const std::size_t n = path.sample_count();
    std::vector<double> values;
    values.reserve(n * (d + 1));
    for (std::size_t i = 0; i < n; ++i) {
        values.push_back(path.time(i));
        auto p = path.point(i);
        values.insert(values.end(), p.begin(), p.end());
    }
    return DiscretePath(path.times(), std::move(values), d + 1);
}

DiscretePath lead_lag(const DiscretePath& path) {
    const int d = path.dimension();
    const std::size_t n = path.segment_count();
    std::vector<double> values;
    values.reserve((2 * n + 1) * 2 * d);
    auto push_node = [&](std::size_t lag, std::size_t lead) {
        auto a = path.point(lag);
        auto b = path.point(lead);
        values.insert(values.end(), a.begin(), a.end());
        values.insert(values.end(), b.begin(), b.end());
    };
    for (std::size_t k = 0; k < n; ++k) {
        push_node(k, k);
        push_node(k, k + 1);
    }
    push_node(n, n);

    const double t0 = path.start_time();
    const double span = path.end_time() - t0;
    std::vector<double> times(2 * n + 1);
    for (std::size_t k = 0; k <= 2 * n; ++k)
        times[k] = t0 + span * static_cast<double>(k) / static_cast<double>(2 * n);
    return DiscretePath(std::move(times), std::move(values), 2 * d);
}

DiscretePath lead_lag_time_augmented(const DiscretePath& scalar_path) {
    if (scalar_path.dimension() != 1)
        throw std::invalid_argument("lead_lag_time_augmented: driver must be one-dimensional");
    const std::size_t n = scalar_path.segment_count();
    std::vector<double> values;
    values.reserve((2 * n + 1) * 3);
    for (std::size_t k = 0; k < n; ++k) {
        const double t = scalar_path.time(k);
        const double w = scalar_path.value(k, 0);
        const double w_next = scalar_path.value(k + 1, 0);
        values.insert(values.end(), {t, w, w});
        values.insert(values.end(), {t, w, w_next});
    }
    const double t_end = scalar_path.time(n);
    const double w_end = scalar_path.value(n, 0);
    values.insert(values.end(), {t_end, w_end, w_end});

    const double t0 = scalar_path.start_time();
    const double span = scalar_path.end_time() - t0;
    std::vector<double> times(2 * n + 1);
    for (std::size_t k = 0; k <= 2 * n; ++k)
        times[k] = t0 + span * static_cast<double>(k) / static_cast<double>(2 * n);
    return DiscretePath(std::move(times), std::move(values), 3);
}

Signature segment_signature(std::span<const double> increment, int order) {
    DenseTensor t(static_cast<int>(increment.size()), order);
    dense_segment_exp(increment, t);
    return Signature{t.to_linear_functional(), order};
}

Signature chen_concat(const Signature& first, const Signature& second) {
    if (first.alphabet_size() != second.alphabet_size())
        throw std::invalid_argument("chen_concat: alphabet mismatch");
    if (first.order != second.order)
        throw std::invalid_argument("chen_concat: truncation order mismatch");
    return Signature{concat_lf(first.coefficients, second.coefficients, first.order),
                     first.order};
}

void path_signature_scan(const DiscretePath& path, int order,
                         const std::function<void(std::size_t, const DenseTensor&)>& visit) {
    const int d = path.dimension();
    DenseTensor running(d, order);
    DenseTensor segment(d, order);
    DenseTensor scratch(d, order);
    running.set_identity();
    visit(0, running);
    std::vector<double> increment(d);
    for (std::size_t k = 1; k < path.sample_count(); ++k) {
        auto prev = path.point(k - 1);
        auto cur = path.point(k);
        for (int c = 0; c < d; ++c) increment[c] = cur[c] - prev[c];
        dense_segment_exp(increment, segment);
        dense_concat(running, segment, scratch);
        std::swap(running, scratch);
        visit(k, running);
    }
}

Signature path_signature(const DiscretePath& path, int order) {
    Signature out = identity_signature(path.dimension(), order);
    path_signature_scan(path, order, [&](std::size_t node, const DenseTensor& running) {
        if (node + 1 == path.sample_count())
            out.coefficients = running.to_linear_functional();
    });
    return out;
}

} // namespace sigsde
