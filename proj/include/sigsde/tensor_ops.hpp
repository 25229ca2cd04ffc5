#ifndef SIGSDE_TENSOR_OPS_HPP
#define SIGSDE_TENSOR_OPS_HPP

#include "sigsde/linear_functional.hpp"

namespace sigsde {

/// Free-tensor-algebra arithmetic on sparse linear functionals. All
/// operations are pure; results are in canonical form (no zero terms).
/// The optional `order` arguments truncate the result: words longer than
/// `order` are dropped. kUnboundedOrder keeps everything the operands can
/// produce.

/// Bilinear concatenation product: coefficient of K is the sum of
/// F^(I) * G^(J) over all splits I x J = K.
LinearFunctional concat_lf(const LinearFunctional& lhs, const LinearFunctional& rhs,
                           int order = LinearFunctional::kUnboundedOrder);

/// Shuffle product of two words: the sum over all interleavings, with
/// multiplicities. All result words have length |lhs| + |rhs| and the
/// coefficients are non-negative integers summing to binomial(|lhs|+|rhs|, |lhs|).
LinearFunctional shuffle(const MultiIndex& lhs, const MultiIndex& rhs);

/// Bilinear extension of the word shuffle.
LinearFunctional shuffle_lf(const LinearFunctional& lhs, const LinearFunctional& rhs,
                            int order = LinearFunctional::kUnboundedOrder);

/// Half-shuffle product, the word rule u > (v.a) = (u shuffle v).a extended
/// bilinearly. Realizes "integrate <lhs, sig> against d<rhs, sig>", which is
/// why `rhs` must not contain the empty word (an integrator has no constant
/// component). Not associative; nesting matters to callers.
LinearFunctional half_shuffle(const LinearFunctional& lhs, const LinearFunctional& rhs,
                              int order = LinearFunctional::kUnboundedOrder);

/// Coefficient-wise inner product over the common support.
double pair(const LinearFunctional& lhs, const LinearFunctional& rhs);

/// alpha * F + beta * G in canonical form.
LinearFunctional lin_comb(double alpha, const LinearFunctional& f, double beta,
                          const LinearFunctional& g);

/// Truncated tensor exponential: empty word + sum_{k=1..order} F^(x k) / k!.
/// Requires a vanishing empty-word coefficient, otherwise no truncation of
/// the series is exact at any order.
LinearFunctional exp_lf(const LinearFunctional& f, int order);

/// Drop all words longer than `order`.
LinearFunctional truncate(const LinearFunctional& f, int order);

/// Saturating order arithmetic for truncation bookkeeping.
int saturating_order_add(int a, int b);

} // namespace sigsde

#endif
