#include "sigsde/tensor_ops.hpp"

#include <algorithm>
#include <stdexcept>

namespace sigsde {

namespace {

void check_same_alphabet(const LinearFunctional& f, const LinearFunctional& g, const char* op) {
    if (f.alphabet_size() != g.alphabet_size())
        throw std::invalid_argument(std::string(op) + ": alphabet mismatch");
}

int result_order(const LinearFunctional& f, const LinearFunctional& g, int requested) {
    return std::min(requested, saturating_order_add(f.max_order(), g.max_order()));
}

// Recursive interleaving enumeration. Appends coef * (every interleaving of
// lhs[0:nl] and rhs[0:nr], each followed by `tail`) into `out`.
void shuffle_words_into(LinearFunctional& out, const MultiIndex& lhs, std::size_t nl,
                        const MultiIndex& rhs, std::size_t nr, std::vector<int>& tail,
                        double coef) {
    if (nl == 0 || nr == 0) {
        const MultiIndex& rest = (nl == 0) ? rhs : lhs;
        std::size_t n = (nl == 0) ? nr : nl;
        std::vector<int> word;
        word.reserve(n + tail.size());
        for (std::size_t i = 0; i < n; ++i) word.push_back(rest.letter(i));
        word.insert(word.end(), tail.rbegin(), tail.rend());
        out.add_term(MultiIndex(out.alphabet_size(), word), coef);
        return;
    }
    tail.push_back(lhs.letter(nl - 1));
    shuffle_words_into(out, lhs, nl - 1, rhs, nr, tail, coef);
    tail.back() = rhs.letter(nr - 1);
    shuffle_words_into(out, lhs, nl, rhs, nr - 1, tail, coef);
    tail.pop_back();
}

} // namespace

int saturating_order_add(int a, int b) {
    if (a == LinearFunctional::kUnboundedOrder || b == LinearFunctional::kUnboundedOrder)
        return LinearFunctional::kUnboundedOrder;
    long sum = static_cast<long>(a) + static_cast<long>(b);
    if (sum >= LinearFunctional::kUnboundedOrder) return LinearFunctional::kUnboundedOrder;
    return static_cast<int>(sum);
}

LinearFunctional concat_lf(const LinearFunctional& lhs, const LinearFunctional& rhs, int order) {
    check_same_alphabet(lhs, rhs, "concat_lf");
    LinearFunctional out(lhs.alphabet_size(), result_order(lhs, rhs, order));
    for (const auto& [wl, cl] : lhs.terms()) {
        if (static_cast<int>(wl.length()) > out.max_order()) break;
        for (const auto& [wr, cr] : rhs.terms()) {
            if (static_cast<int>(wl.length() + wr.length()) > out.max_order()) break;
            out.add_term(concat(wl, wr), cl * cr);
        }
    }
    return out;
}

LinearFunctional shuffle(const MultiIndex& lhs, const MultiIndex& rhs) {
    if (lhs.alphabet_size() != rhs.alphabet_size())
        throw std::invalid_argument("shuffle: alphabet mismatch");
    LinearFunctional out(lhs.alphabet_size());
    std::vector<int> tail;
    shuffle_words_into(out, lhs, lhs.length(), rhs, rhs.length(), tail, 1.0);
    return out;
}

LinearFunctional shuffle_lf(const LinearFunctional& lhs, const LinearFunctional& rhs, int order) {
    check_same_alphabet(lhs, rhs, "shuffle_lf");
    LinearFunctional out(lhs.alphabet_size(), result_order(lhs, rhs, order));
    std::vector<int> tail;
    for (const auto& [wl, cl] : lhs.terms()) {
        if (static_cast<int>(wl.length()) > out.max_order()) break;
        for (const auto& [wr, cr] : rhs.terms()) {
            if (static_cast<int>(wl.length() + wr.length()) > out.max_order()) break;
            shuffle_words_into(out, wl, wl.length(), wr, wr.length(), tail, cl * cr);
        }
    }
    return out;
}

LinearFunctional half_shuffle(const LinearFunctional& lhs, const LinearFunctional& rhs,
                              int order) {
    check_same_alphabet(lhs, rhs, "half_shuffle");
    if (rhs.coefficient(MultiIndex::empty(rhs.alphabet_size())) != 0.0)
        throw std::invalid_argument(
            "half_shuffle: integrator operand has a constant (empty-word) term");
    LinearFunctional out(lhs.alphabet_size(), result_order(lhs, rhs, order));
    std::vector<int> tail;
    for (const auto& [wr, cr] : rhs.terms()) {
        const MultiIndex body = wr.drop_last();
        const int last = wr.letter(wr.length() - 1);
        for (const auto& [wl, cl] : lhs.terms()) {
            if (static_cast<int>(wl.length() + wr.length()) > out.max_order()) break;
            tail.assign(1, last);
            shuffle_words_into(out, wl, wl.length(), body, body.length(), tail, cl * cr);
        }
    }
    return out;
}

double pair(const LinearFunctional& lhs, const LinearFunctional& rhs) {
    check_same_alphabet(lhs, rhs, "pair");
    const LinearFunctional& small = lhs.term_count() <= rhs.term_count() ? lhs : rhs;
    const LinearFunctional& large = lhs.term_count() <= rhs.term_count() ? rhs : lhs;
    double sum = 0.0;
    for (const auto& [w, c] : small.terms()) sum += c * large.coefficient(w);
    return sum;
}

LinearFunctional lin_comb(double alpha, const LinearFunctional& f, double beta,
                          const LinearFunctional& g) {
    check_same_alphabet(f, g, "lin_comb");
    LinearFunctional out(f.alphabet_size(), std::max(f.max_order(), g.max_order()));
    for (const auto& [w, c] : f.terms()) out.add_term(w, alpha * c);
    for (const auto& [w, c] : g.terms()) out.add_term(w, beta * c);
    return out;
}

LinearFunctional exp_lf(const LinearFunctional& f, int order) {
    if (order < 0) throw std::invalid_argument("exp_lf: order must be non-negative");
    if (f.coefficient(MultiIndex::empty(f.alphabet_size())) != 0.0)
        throw std::invalid_argument("exp_lf: operand has a non-zero constant term");
    LinearFunctional out = LinearFunctional::constant(f.alphabet_size(), 1.0, order);
    LinearFunctional power = LinearFunctional::constant(f.alphabet_size(), 1.0, order);
    double factorial = 1.0;
    for (int k = 1; k <= order; ++k) {
        power = concat_lf(power, f, order);
        if (power.is_zero()) break;
        factorial *= k;
        for (const auto& [w, c] : power.terms()) out.add_term(w, c / factorial);
    }
    return out;
}

LinearFunctional truncate(const LinearFunctional& f, int order) {
    if (order < 0) throw std::invalid_argument("truncate: order must be non-negative");
    LinearFunctional out(f.alphabet_size(), order);
    for (const auto& [w, c] : f.terms()) {
        if (static_cast<int>(w.length()) > order) break;
        out.add_term(w, c);
    }
    return out;
}

} // namespace sigsde
