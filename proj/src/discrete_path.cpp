#include "sigsde/discrete_path.hpp"

#include <cmath>
#include <stdexcept>

namespace sigsde {

DiscretePath::DiscretePath(std::vector<double> times, std::vector<double> values, int dimension)
    : times_(std::move(times)), values_(std::move(values)), dim_(dimension) {
    if (dim_ < 1) throw std::invalid_argument("DiscretePath: dimension must be >= 1");
    if (times_.size() < 2) throw std::invalid_argument("DiscretePath: need at least two samples");
    if (values_.size() != times_.size() * static_cast<std::size_t>(dim_))
        throw std::invalid_argument("DiscretePath: values/times size mismatch");
    for (std::size_t i = 1; i < times_.size(); ++i)
        if (!(times_[i] > times_[i - 1]))
            throw std::invalid_argument("DiscretePath: times must be strictly increasing");
}

DiscretePath DiscretePath::scalar(std::vector<double> times, std::vector<double> values) {
    return DiscretePath(std::move(times), std::move(values), 1);
}

double DiscretePath::total_variation() const {
    double tv = 0.0;
    for (std::size_t i = 1; i < times_.size(); ++i)
        for (int c = 0; c < dim_; ++c) tv += std::abs(value(i, c) - value(i - 1, c));
    return tv;
}

std::vector<double> uniform_grid(double horizon, std::size_t steps) {
    if (!(horizon > 0.0)) throw std::invalid_argument("uniform_grid: horizon must be positive");
    if (steps < 1) throw std::invalid_argument("uniform_grid: need at least one step");
    std::vector<double> t(steps + 1);
    for (std::size_t i = 0; i <= steps; ++i)
        t[i] = horizon * static_cast<double>(i) / static_cast<double>(steps);
    return t;
}

} // namespace sigsde
