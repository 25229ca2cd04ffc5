#ifndef SIGSDE_TEST_UTIL_HPP
#define SIGSDE_TEST_UTIL_HPP

#include <random>
#include <vector>

#include "sigsde/discrete_path.hpp"
#include "sigsde/multi_index.hpp"

namespace sigsde::testutil {

/// Random piecewise-linear path: Gaussian increments on a uniform grid.
inline DiscretePath random_pl_path(std::mt19937_64& rng, int d, std::size_t segments,
                                   double horizon = 1.0, double scale = 0.3) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> times(segments + 1), values((segments + 1) * d, 0.0);
    const double dt = horizon / static_cast<double>(segments);
    for (std::size_t i = 0; i <= segments; ++i) times[i] = dt * static_cast<double>(i);
    for (std::size_t i = 1; i <= segments; ++i)
        for (int c = 0; c < d; ++c)
            values[i * d + c] = values[(i - 1) * d + c] + scale * std::sqrt(dt) * gauss(rng);
    return DiscretePath(std::move(times), std::move(values), d);
}

/// Every word over {1..d} of length <= max_len, canonical order.
inline std::vector<MultiIndex> words_up_to(int d, int max_len) {
    std::vector<MultiIndex> out{MultiIndex::empty(d)};
    std::size_t begin = 0;
    for (int len = 1; len <= max_len; ++len) {
        std::size_t end = out.size();
        for (std::size_t i = begin; i < end; ++i)
            for (int a = 1; a <= d; ++a) out.push_back(out[i].append(a));
        begin = end;
    }
    return out;
}

} // namespace sigsde::testutil

#endif
