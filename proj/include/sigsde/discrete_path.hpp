#ifndef SIGSDE_DISCRETE_PATH_HPP
#define SIGSDE_DISCRETE_PATH_HPP

#include <span>
#include <vector>

namespace sigsde {

/// Time-stamped samples of a d-dimensional path, interpreted piecewise
/// linearly. Times are strictly increasing (years); at least two samples.
class DiscretePath {
public:
    /// `values` is row-major, one sample of `dimension` coordinates per time.
    DiscretePath(std::vector<double> times, std::vector<double> values, int dimension);

    /// Scalar path convenience.
    static DiscretePath scalar(std::vector<double> times, std::vector<double> values);

    int dimension() const { return dim_; }
    std::size_t sample_count() const { return times_.size(); }
    std::size_t segment_count() const { return times_.size() - 1; }

    const std::vector<double>& times() const { return times_; }
    const std::vector<double>& values() const { return values_; }

    double time(std::size_t i) const { return times_[i]; }
    std::span<const double> point(std::size_t i) const {
        return {values_.data() + i * dim_, static_cast<std::size_t>(dim_)};
    }
    double value(std::size_t i, int channel) const { return values_[i * dim_ + channel]; }

    double start_time() const { return times_.front(); }
    double end_time() const { return times_.back(); }

    /// Total variation of the piecewise-linear path in the 1-norm over
    /// channels (an upper bound used by decay estimates).
    double total_variation() const;

private:
    std::vector<double> times_;
    std::vector<double> values_;
    int dim_;
};

/// Uniform grid 0, T/steps, ..., T.
std::vector<double> uniform_grid(double horizon, std::size_t steps);

} // namespace sigsde

#endif
