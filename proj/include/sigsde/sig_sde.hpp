#ifndef SIGSDE_SIG_SDE_HPP
#define SIGSDE_SIG_SDE_HPP

#include <vector>

#include "sigsde/discrete_path.hpp"
#include "sigsde/linear_functional.hpp"
#include "sigsde/rng.hpp"

namespace sigsde {

/// The model: dX_t = <ell, sig(t, W)_{0,t}> dW_t with X_0 = x0. The
/// volatility is a linear readout of the truncated signature of the
/// time-augmented driver; ell lives on words over {1,2} of length <= order.
struct SigSdeParams {
    int order;             // truncation order N of the volatility readout
    double x0;             // initial spot
    LinearFunctional ell;  // alphabet {1,2}: 1 = time, 2 = driver

    SigSdeParams(int order, double x0, LinearFunctional ell);

    /// Number of free coefficients: sum_{k=0..N} 2^k (31 for N = 4).
    static std::size_t coefficient_count(int order);
};

/// Canonical coordinate system on the parameter space: all words over {1,2}
/// of length <= order, in length-then-lexicographic order.
std::vector<MultiIndex> parameter_words(int order);

/// Packs/unpacks ell along parameter_words(order).
LinearFunctional ell_from_vector(const std::vector<double>& coeffs, int order);
std::vector<double> ell_to_vector(const LinearFunctional& ell, int order);

/// The spot as a linear readout of the lead-lag driver signature:
/// x0 * (empty word) + ell (reindexed onto channels 1=time, 2=lag) with the
/// lead channel 3 appended to every word as the integrator letter. Words have
/// length <= order + 1.
LinearFunctional path_functional(const SigSdeParams& params);

/// Lift of a word over the (time, X) alphabet onto the lead-lag driver
/// alphabet: the left-nested half-shuffle chain
///   C_(i1..in) = (...((P_i1 > P_i2) > P_i3) ... > P_in)
/// with P_1 = (1) and P_2 = the integrator part of path_functional. Pairing
/// C_I with the lead-lag driver signature yields the I-coordinate of the
/// signature of (t, X). Intermediate and final results are truncated at
/// algebra_order.
LinearFunctional lift_word(const MultiIndex& word, const SigSdeParams& params, int algebra_order);

/// Samples one path on the given grid (strictly increasing, starting at 0):
/// draws Brownian increments, accumulates the lead-lag driver signature
/// interval by interval through the concatenation identity, and reads the
/// spot off path_functional at every node. X at the first node is exactly x0.
DiscretePath simulate(const SigSdeParams& params, const std::vector<double>& grid,
                      RngStream& rng);

/// Volatility readout along a sampled driver: <ell, signature of the
/// time-augmented driver on [0, t_k]> for every node k. Diagnostic.
std::vector<double> volatility_series(const SigSdeParams& params, const DiscretePath& driver);

} // namespace sigsde

#endif
