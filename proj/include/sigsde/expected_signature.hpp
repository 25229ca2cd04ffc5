#ifndef SIGSDE_EXPECTED_SIGNATURE_HPP
#define SIGSDE_EXPECTED_SIGNATURE_HPP

#include <vector>

#include "sigsde/linear_functional.hpp"
#include "sigsde/sig_sde.hpp"

namespace sigsde {

/// One way of cutting a word into consecutive blocks of length 1 or 2.
/// Concatenating the blocks reproduces the source word.
struct BlockDecomposition {
    std::vector<MultiIndex> blocks;

    bool operator==(const BlockDecomposition& other) const { return blocks == other.blocks; }
};

/// All block decompositions of a non-empty word, in the deterministic order
/// produced by always trying the length-1 head block before the length-2 one.
/// Their number follows the Fibonacci-style recurrence
/// count(n) = count(n-1) + count(n-2) with count(1) = 1, count(2) = 2.
/// Words longer than 24 letters are rejected (the closed-form evaluation
/// below never materializes decompositions, so it has no such cap).
std::vector<BlockDecomposition> decompositions(const MultiIndex& word);

/// Block weight of the lead-lag Brownian expected signature: maps a block
/// over the 3-letter lead-lag alphabet (1 = time, 2 = lag, 3 = lead) to a
/// functional over the flat (time, W) alphabet:
///   (1) -> (1),  (2) -> (2),  (3) -> (2),
///   (2,3) -> -1/2 (1),  (3,2) -> +1/2 (1),  anything else -> 0.
/// Only blocks of length 1 or 2 are meaningful.
LinearFunctional alpha(const MultiIndex& block);

/// Expected signature of the time-augmented Brownian motion (t, W_t) on
/// [0, T]: the tensor exponential of T*(1) + (T/2)*(2,2), truncated at
/// `order`. Memoized per (T, order); safe for concurrent callers.
LinearFunctional bm_expected_signature(double horizon, int order);

/// Closed-form expected signature of the lead-lag Brownian driver
/// (t, W_lag, W_lead) on [0, T], words up to `order`: coefficient of I is
/// the sum over block decompositions of I of the alpha-weights' concatenation
/// paired with bm_expected_signature. Evaluated blockwise by a prefix
/// recursion, so no decomposition set is ever enumerated.
LinearFunctional leadlag_bm_expected_signature(double horizon, int order);

/// Diagnostic emitted when the lift support exceeds the algebra truncation.
struct TruncationReport {
    bool truncated = false;
    int required_order = 0;   // support order the requested words would need
    int algebra_order = 0;    // truncation actually applied
    double tail_bound = 0.0;  // crude factorial bound on the dropped mass
};

/// Expected signature of the time-augmented model path (t, X_t) under the
/// given parameters, as a functional over {1,2}: coefficient of I is
/// <lift_word(I), leadlag_bm_expected_signature(horizon, algebra_order)>.
/// Word lifts need support up to |I|*(order+1); when algebra_order is
/// smaller the computation truncates and reports it through `report`
/// (never silently: the report is also printable by callers).
LinearFunctional model_expected_signature(const SigSdeParams& params, double horizon,
                                          int word_order, int algebra_order,
                                          TruncationReport* report = nullptr);

/// Default algebra truncation: 2 * (N + 1).
int default_algebra_order(int model_order);

} // namespace sigsde

#endif
