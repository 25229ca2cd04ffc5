#ifndef SIGSDE_PATH_SIGNATURE_HPP
#define SIGSDE_PATH_SIGNATURE_HPP

#include <functional>

#include "sigsde/dense_tensor.hpp"
#include "sigsde/discrete_path.hpp"
#include "sigsde/linear_functional.hpp"

namespace sigsde {

/// Truncated signature of a path: a linear functional with empty-word
/// coefficient exactly 1 and words up to `order`. Coefficients of a genuine
/// signature satisfy the shuffle identity up to numeric rounding; that is a
/// property of how instances are produced, not a constructor check.
struct Signature {
    LinearFunctional coefficients;
    int order = 0;

    int alphabet_size() const { return coefficients.alphabet_size(); }
    double coefficient(const MultiIndex& word) const { return coefficients.coefficient(word); }
};

/// Identity signature (empty word only).
Signature identity_signature(int alphabet_size, int order);

/// Prepends time as channel 1: output sample k is (t_k, X_{t_k}).
DiscretePath add_time(const DiscretePath& path);

/// Zig-zag embedding into 2d channels. For input samples Z_{t_0..t_n} the
/// output has 2n+1 nodes: even node 2k carries (Z_{t_k}, Z_{t_k}) and odd
/// node 2k+1 carries (Z_{t_k}, Z_{t_{k+1}}). Channels 1..d are the lag block
/// (frozen while the lead moves), channels d+1..2d the lead block (which
/// advances first). Node times are the canonical uniform reparametrization
/// of [t_0, t_n]; signatures do not see the reparametrization.
DiscretePath lead_lag(const DiscretePath& path);

/// Lead-lag of a scalar driver with time kept as a plain extra channel:
/// output channels are (t, W_lag, W_lead). Per input interval the lead
/// channel moves first while (t, W_lag) stay frozen, then time and lag
/// advance together. Integrals against the lead channel therefore reproduce
/// left-point (Ito) sums of (t, W_lag)-adapted integrands.
DiscretePath lead_lag_time_augmented(const DiscretePath& scalar_path);

/// Signature of one straight segment with the given increment.
Signature segment_signature(std::span<const double> increment, int order);

/// Concatenation of signatures: coefficient of K is the sum of
/// S1^(I) * S2^(J) over splits I x J = K, truncated at the common order.
Signature chen_concat(const Signature& first, const Signature& second);

/// Signature of the piecewise-linear path: left-to-right concatenation of
/// per-segment exponentials.
Signature path_signature(const DiscretePath& path, int order);

/// Incremental form: invokes `visit(node_index, running)` after absorbing
/// each node (including node 0, where running is the identity). The tensor
/// reference stays owned by the scan; copy out what you need.
void path_signature_scan(const DiscretePath& path, int order,
                         const std::function<void(std::size_t, const DenseTensor&)>& visit);

} // namespace sigsde

#endif
