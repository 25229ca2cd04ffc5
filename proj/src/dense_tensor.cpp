#include "sigsde/dense_tensor.hpp"

#include <algorithm>
#include <stdexcept>

namespace sigsde {

DenseTensor::DenseTensor(int alphabet_size, int order) : d_(alphabet_size), order_(order) {
    if (alphabet_size < 1) throw std::invalid_argument("DenseTensor: alphabet size must be >= 1");
    if (order < 0) throw std::invalid_argument("DenseTensor: order must be non-negative");
    offsets_.resize(order + 1);
    sizes_.resize(order + 1);
    std::size_t off = 0, lvl = 1;
    for (int k = 0; k <= order; ++k) {
        offsets_[k] = off;
        sizes_[k] = lvl;
        off += lvl;
        if (lvl > (static_cast<std::size_t>(1) << 40) / static_cast<std::size_t>(d_))
            throw std::invalid_argument("DenseTensor: truncation order too large for alphabet");
        lvl *= static_cast<std::size_t>(d_);
    }
    coeffs_.assign(off, 0.0);
}

std::size_t DenseTensor::word_index(const MultiIndex& word) const {
    const int n = static_cast<int>(word.length());
    if (n > order_) throw std::invalid_argument("DenseTensor: word longer than truncation order");
    std::size_t idx = 0;
    for (int i = 0; i < n; ++i) idx = idx * d_ + static_cast<std::size_t>(word.letter(i) - 1);
    return offsets_[n] + idx;
}

void DenseTensor::set_zero() { std::fill(coeffs_.begin(), coeffs_.end(), 0.0); }

void DenseTensor::set_identity() {
    set_zero();
    coeffs_[0] = 1.0;
}

LinearFunctional DenseTensor::to_linear_functional() const {
    LinearFunctional out(d_, order_);
    std::vector<int> letters;
    for (int k = 0; k <= order_; ++k) {
        letters.assign(k, 1);
        for (std::size_t idx = 0; idx < sizes_[k]; ++idx) {
            std::size_t rem = idx;
            for (int i = k - 1; i >= 0; --i) {
                letters[i] = 1 + static_cast<int>(rem % d_);
                rem /= d_;
            }
            out.add_term(MultiIndex(d_, letters), coeffs_[offsets_[k] + idx]);
        }
    }
    return out;
}

DenseTensor DenseTensor::from_linear_functional(const LinearFunctional& f, int order) {
    DenseTensor out(f.alphabet_size(), order);
    for (const auto& [w, c] : f.terms()) {
        if (static_cast<int>(w.length()) > order) break;
        out[out.word_index(w)] = c;
    }
    return out;
}

void dense_concat(const DenseTensor& lhs, const DenseTensor& rhs, DenseTensor& out) {
    const int d = out.alphabet_size();
    const int order = out.order();
    if (lhs.alphabet_size() != d || rhs.alphabet_size() != d || lhs.order() != order ||
        rhs.order() != order)
        throw std::invalid_argument("dense_concat: operand shape mismatch");
    out.set_zero();
    const double* a = lhs.coefficients().data();
    const double* b = rhs.coefficients().data();
    double* c = out.coefficients().data();
    for (int k = 0; k <= order; ++k) {
        double* ck = c + out.level_offset(k);
        for (int i = 0; i <= k; ++i) {
            const int j = k - i;
            const double* ai = a + lhs.level_offset(i);
            const double* bj = b + rhs.level_offset(j);
            const std::size_t ni = lhs.level_size(i);
            const std::size_t nj = rhs.level_size(j);
            for (std::size_t p = 0; p < ni; ++p) {
                const double ap = ai[p];
                if (ap == 0.0) continue;
                double* dst = ck + p * nj;
                for (std::size_t q = 0; q < nj; ++q) dst[q] += ap * bj[q];
            }
        }
    }
}

void dense_segment_exp(std::span<const double> increment, DenseTensor& out) {
    const int d = out.alphabet_size();
    if (static_cast<int>(increment.size()) != d)
        throw std::invalid_argument("dense_segment_exp: increment dimension mismatch");
    out.set_zero();
    double* c = out.coefficients().data();
    c[0] = 1.0;
    for (int k = 1; k <= out.order(); ++k) {
        const double* prev = c + out.level_offset(k - 1);
        double* cur = c + out.level_offset(k);
        const std::size_t np = out.level_size(k - 1);
        const double inv_k = 1.0 / static_cast<double>(k);
        for (std::size_t p = 0; p < np; ++p) {
            const double scaled = prev[p] * inv_k;
            double* dst = cur + p * d;
            for (int m = 0; m < d; ++m) dst[m] = scaled * increment[m];
        }
    }
}

double dense_pair(const LinearFunctional& sparse, const DenseTensor& dense) {
    if (sparse.alphabet_size() != dense.alphabet_size())
        throw std::invalid_argument("dense_pair: alphabet mismatch");
    double sum = 0.0;
    for (const auto& [w, c] : sparse.terms()) sum += c * dense[dense.word_index(w)];
    return sum;
}

} // namespace sigsde
