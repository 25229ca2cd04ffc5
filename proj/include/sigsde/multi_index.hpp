#ifndef SIGSDE_MULTI_INDEX_HPP
#define SIGSDE_MULTI_INDEX_HPP

#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace sigsde {

/// A word over the alphabet {1,...,d}. Indexes one iterated-integral
/// coordinate of a signature. Immutable value type; the empty word is valid.
///
/// Ordering is length-then-lexicographic and ignores the alphabet size, so
/// words can be used as canonical map keys. Equality is letter-wise.
class MultiIndex {
public:
    /// Empty word over {1,...,d}.
    explicit MultiIndex(int alphabet_size);

    MultiIndex(int alphabet_size, std::initializer_list<int> letters);
    MultiIndex(int alphabet_size, const std::vector<int>& letters);

    static MultiIndex empty(int alphabet_size) { return MultiIndex(alphabet_size); }

    int alphabet_size() const { return d_; }
    std::size_t length() const { return letters_.size(); }
    bool is_empty() const { return letters_.empty(); }

    /// i-th letter, 0-based position, value in 1..d.
    int letter(std::size_t i) const { return static_cast<int>(letters_[i]); }

    const std::vector<std::uint8_t>& letters() const { return letters_; }

    /// Word with `letter` appended.
    MultiIndex append(int letter) const;
    /// First n letters.
    MultiIndex prefix(std::size_t n) const;
    /// Word without its last letter. Precondition: non-empty.
    MultiIndex drop_last() const;
    /// Letters [from, from+count) as a word over the same alphabet.
    MultiIndex subword(std::size_t from, std::size_t count) const;

    /// Same letters reinterpreted over a (possibly different) alphabet size.
    /// Every letter must fit in the new alphabet.
    MultiIndex with_alphabet(int alphabet_size) const;

    bool operator==(const MultiIndex& other) const { return letters_ == other.letters_; }
    bool operator!=(const MultiIndex& other) const { return !(*this == other); }
    bool operator<(const MultiIndex& other) const;

    /// Rendering like "(1,3,2)" or "()" for the empty word.
    std::string to_string() const;

private:
    MultiIndex(int alphabet_size, std::vector<std::uint8_t> letters);

    friend MultiIndex concat(const MultiIndex& lhs, const MultiIndex& rhs);

    std::vector<std::uint8_t> letters_;
    int d_;
};

/// Concatenation: letters of `lhs` followed by letters of `rhs`.
/// Throws std::invalid_argument on alphabet mismatch.
MultiIndex concat(const MultiIndex& lhs, const MultiIndex& rhs);

} // namespace sigsde

#endif
