#ifndef SIGSDE_DENSE_TENSOR_HPP
#define SIGSDE_DENSE_TENSOR_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "sigsde/linear_functional.hpp"

namespace sigsde {

/// Dense truncated tensor-algebra element over {1,...,d}: one contiguous
/// coefficient block per level 0..order, level k holding d^k doubles in
/// lexicographic word order. This is the internal workhorse for per-step
/// signature updates; the sparse LinearFunctional stays the public currency.
class DenseTensor {
public:
    DenseTensor(int alphabet_size, int order);

    int alphabet_size() const { return d_; }
    int order() const { return order_; }

    /// Flat coefficient storage, levels concatenated.
    std::span<double> coefficients() { return coeffs_; }
    std::span<const double> coefficients() const { return coeffs_; }

    std::size_t level_offset(int level) const { return offsets_[level]; }
    std::size_t level_size(int level) const { return sizes_[level]; }
    std::size_t size() const { return coeffs_.size(); }

    double& operator[](std::size_t flat) { return coeffs_[flat]; }
    double operator[](std::size_t flat) const { return coeffs_[flat]; }

    /// Flat index of a word (letters 1..d).
    std::size_t word_index(const MultiIndex& word) const;

    /// Resets to the algebra unit (empty word 1, everything else 0).
    void set_identity();
    void set_zero();

    double coefficient(const MultiIndex& word) const { return coeffs_[word_index(word)]; }

    LinearFunctional to_linear_functional() const;
    static DenseTensor from_linear_functional(const LinearFunctional& f, int order);

private:
    int d_;
    int order_;
    std::vector<std::size_t> offsets_;
    std::vector<std::size_t> sizes_;
    std::vector<double> coeffs_;
};

/// out = lhs (x) rhs truncated at out.order(). Levels obey
/// out_k = sum_{i+j=k} lhs_i (x) rhs_j. All three must share d and order;
/// `out` must not alias the inputs.
void dense_concat(const DenseTensor& lhs, const DenseTensor& rhs, DenseTensor& out);

/// Signature of one straight segment with the given increment: the tensor
/// exponential of the level-1 element, so the word (k_1,...,k_n) gets
/// increment[k_1-1]*...*increment[k_n-1] / n!.
void dense_segment_exp(std::span<const double> increment, DenseTensor& out);

/// <sparse, dense> pairing; the sparse side's words must fit the tensor.
double dense_pair(const LinearFunctional& sparse, const DenseTensor& dense);

} // namespace sigsde

#endif
