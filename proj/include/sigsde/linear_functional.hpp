#ifndef SIGSDE_LINEAR_FUNCTIONAL_HPP
#define SIGSDE_LINEAR_FUNCTIONAL_HPP

#include <limits>
#include <map>

#include "sigsde/multi_index.hpp"

namespace sigsde {

/// Finitely supported real assignment to words over {1,...,d}: the container
/// for model parameters, payoffs, signatures and expected signatures alike.
///
/// Canonical sparse form: terms never hold an exactly-zero coefficient, every
/// stored word uses the functional's alphabet and is no longer than
/// max_order(). Two functionals are equal iff their term maps are equal.
/// Values are immutable once built by an operation; all algebraic operations
/// are pure functions returning new values.
class LinearFunctional {
public:
    static constexpr int kUnboundedOrder = std::numeric_limits<int>::max();

    using TermMap = std::map<MultiIndex, double>;

    explicit LinearFunctional(int alphabet_size, int max_order = kUnboundedOrder);

    /// Single-term functional coef * word.
    static LinearFunctional monomial(const MultiIndex& word, double coef,
                                     int max_order = kUnboundedOrder);
    /// The functional coef * (empty word).
    static LinearFunctional constant(int alphabet_size, double coef,
                                     int max_order = kUnboundedOrder);

    int alphabet_size() const { return d_; }
    int max_order() const { return max_order_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    /// Coefficient of `word`, zero when absent.
    double coefficient(const MultiIndex& word) const;

    /// Sets (or erases, when coef == 0.0) a coefficient. Validates alphabet
    /// and truncation order.
    void set_coefficient(const MultiIndex& word, double coef);

    /// Accumulates into a coefficient; erases it if the sum lands on 0.0.
    /// Words longer than max_order() are silently dropped, which is what
    /// every truncated operation wants.
    void add_term(const MultiIndex& word, double coef);

    /// Length-then-lexicographic iteration order (the canonical order used
    /// by the JSON serialization).
    const TermMap& terms() const { return terms_; }

    /// Length of the longest stored word (0 for the zero functional).
    int top_word_length() const;

    /// Largest absolute coefficient (0 for the zero functional).
    double max_abs_coefficient() const;

    bool operator==(const LinearFunctional& other) const {
        return d_ == other.d_ && terms_ == other.terms_;
    }
    bool operator!=(const LinearFunctional& other) const { return !(*this == other); }

    std::string to_string() const;

private:
    void check_word(const MultiIndex& word) const;

    TermMap terms_;
    int d_;
    int max_order_;
};

} // namespace sigsde

#endif
