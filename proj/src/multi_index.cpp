#include "sigsde/multi_index.hpp"

#include <algorithm>
#include <stdexcept>

namespace sigsde {

namespace {

void check_alphabet(int d) {
    if (d < 1 || d > 255)
        throw std::invalid_argument("MultiIndex: alphabet size must be in 1..255, got " +
                                    std::to_string(d));
}

} // namespace

MultiIndex::MultiIndex(int alphabet_size) : d_(alphabet_size) { check_alphabet(d_); }

MultiIndex::MultiIndex(int alphabet_size, std::vector<std::uint8_t> letters)
    : letters_(std::move(letters)), d_(alphabet_size) {}

MultiIndex::MultiIndex(int alphabet_size, std::initializer_list<int> letters)
    : MultiIndex(alphabet_size, std::vector<int>(letters)) {}

MultiIndex::MultiIndex(int alphabet_size, const std::vector<int>& letters) : d_(alphabet_size) {
    check_alphabet(d_);
    letters_.reserve(letters.size());
    for (int x : letters) {
        if (x < 1 || x > d_)
            throw std::invalid_argument("MultiIndex: letter " + std::to_string(x) +
                                        " outside alphabet 1.." + std::to_string(d_));
        letters_.push_back(static_cast<std::uint8_t>(x));
    }
}

MultiIndex MultiIndex::append(int letter) const {
    if (letter < 1 || letter > d_)
        throw std::invalid_argument("MultiIndex::append: letter " + std::to_string(letter) +
                                    " outside alphabet 1.." + std::to_string(d_));
    std::vector<std::uint8_t> out = letters_;
    out.push_back(static_cast<std::uint8_t>(letter));
    return MultiIndex(d_, std::move(out));
}

MultiIndex MultiIndex::prefix(std::size_t n) const {
    if (n > letters_.size()) throw std::invalid_argument("MultiIndex::prefix: length exceeded");
    return MultiIndex(d_, std::vector<std::uint8_t>(letters_.begin(), letters_.begin() + n));
}

MultiIndex MultiIndex::drop_last() const {
    if (letters_.empty()) throw std::invalid_argument("MultiIndex::drop_last: empty word");
    return prefix(letters_.size() - 1);
}

MultiIndex MultiIndex::subword(std::size_t from, std::size_t count) const {
    if (from + count > letters_.size())
        throw std::invalid_argument("MultiIndex::subword: range exceeds word length");
    return MultiIndex(d_, std::vector<std::uint8_t>(letters_.begin() + from,
                                                    letters_.begin() + from + count));
}

MultiIndex MultiIndex::with_alphabet(int alphabet_size) const {
    check_alphabet(alphabet_size);
    for (std::uint8_t x : letters_)
        if (static_cast<int>(x) > alphabet_size)
            throw std::invalid_argument("MultiIndex::with_alphabet: letter does not fit");
    return MultiIndex(alphabet_size, letters_);
}

bool MultiIndex::operator<(const MultiIndex& other) const {
    if (letters_.size() != other.letters_.size()) return letters_.size() < other.letters_.size();
    return std::lexicographical_compare(letters_.begin(), letters_.end(),
                                        other.letters_.begin(), other.letters_.end());
}

std::string MultiIndex::to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < letters_.size(); ++i) {
        if (i > 0) s += ',';
        s += std::to_string(static_cast<int>(letters_[i]));
    }
    s += ')';
    return s;
}

MultiIndex concat(const MultiIndex& lhs, const MultiIndex& rhs) {
    if (lhs.alphabet_size() != rhs.alphabet_size())
        throw std::invalid_argument("concat: alphabet mismatch");
    std::vector<std::uint8_t> out = lhs.letters_;
    out.insert(out.end(), rhs.letters_.begin(), rhs.letters_.end());
    return MultiIndex(lhs.alphabet_size(), std::move(out));
}

} // namespace sigsde
