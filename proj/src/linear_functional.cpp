#include "sigsde/linear_functional.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace sigsde {

LinearFunctional::LinearFunctional(int alphabet_size, int max_order)
    : d_(alphabet_size), max_order_(max_order) {
    if (alphabet_size < 1 || alphabet_size > 255)
        throw std::invalid_argument("LinearFunctional: alphabet size must be in 1..255");
    if (max_order < 0)
        throw std::invalid_argument("LinearFunctional: max_order must be non-negative");
}

LinearFunctional LinearFunctional::monomial(const MultiIndex& word, double coef, int max_order) {
    LinearFunctional f(word.alphabet_size(), max_order);
    f.set_coefficient(word, coef);
    return f;
}

LinearFunctional LinearFunctional::constant(int alphabet_size, double coef, int max_order) {
    LinearFunctional f(alphabet_size, max_order);
    f.set_coefficient(MultiIndex::empty(alphabet_size), coef);
    return f;
}

void LinearFunctional::check_word(const MultiIndex& word) const {
    if (word.alphabet_size() != d_)
        throw std::invalid_argument("LinearFunctional: alphabet mismatch (word over " +
                                    std::to_string(word.alphabet_size()) + ", functional over " +
                                    std::to_string(d_) + ")");
}

double LinearFunctional::coefficient(const MultiIndex& word) const {
    auto it = terms_.find(word);
    return it == terms_.end() ? 0.0 : it->second;
}

void LinearFunctional::set_coefficient(const MultiIndex& word, double coef) {
    check_word(word);
    if (static_cast<int>(word.length()) > max_order_)
        throw std::invalid_argument("LinearFunctional: word longer than max_order");
    if (coef == 0.0)
        terms_.erase(word);
    else
        terms_[word] = coef;
}

void LinearFunctional::add_term(const MultiIndex& word, double coef) {
    check_word(word);
    if (static_cast<int>(word.length()) > max_order_) return;
    if (coef == 0.0) return;
    auto [it, inserted] = terms_.try_emplace(word, coef);
    if (!inserted) {
        it->second += coef;
        if (it->second == 0.0) terms_.erase(it);
    }
}

int LinearFunctional::top_word_length() const {
    if (terms_.empty()) return 0;
    return static_cast<int>(terms_.rbegin()->first.length());
}

double LinearFunctional::max_abs_coefficient() const {
    double m = 0.0;
    for (const auto& [w, c] : terms_) m = std::max(m, std::abs(c));
    return m;
}

std::string LinearFunctional::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [w, c] : terms_) {
        if (!first) os << " + ";
        os << c << "*" << w.to_string();
        first = false;
    }
    return os.str();
}

} // namespace sigsde
