#include "sigsde/expected_signature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

#include "sigsde/tensor_ops.hpp"

namespace sigsde {

namespace {

void decompose_rec(const MultiIndex& word, std::size_t from, std::vector<MultiIndex>& prefix,
                   std::vector<BlockDecomposition>& out) {
    if (from == word.length()) {
        out.push_back(BlockDecomposition{prefix});
        return;
    }
    prefix.push_back(word.subword(from, 1));
    decompose_rec(word, from + 1, prefix, out);
    prefix.pop_back();
    if (from + 2 <= word.length()) {
        prefix.push_back(word.subword(from, 2));
        decompose_rec(word, from + 2, prefix, out);
        prefix.pop_back();
    }
}

} // namespace

std::vector<BlockDecomposition> decompositions(const MultiIndex& word) {
    if (word.is_empty()) throw std::invalid_argument("decompositions: word must be non-empty");
    if (word.length() > 24)
        throw std::invalid_argument("decompositions: refusing to enumerate words longer than 24");
    std::vector<BlockDecomposition> out;
    std::vector<MultiIndex> prefix;
    decompose_rec(word, 0, prefix, out);
    return out;
}

LinearFunctional alpha(const MultiIndex& block) {
    if (block.length() < 1 || block.length() > 2)
        throw std::invalid_argument("alpha: block length must be 1 or 2");
    for (std::size_t i = 0; i < block.length(); ++i)
        if (block.letter(i) > 3) throw std::invalid_argument("alpha: letters must be in {1,2,3}");

    LinearFunctional out(2, 1);
    if (block.length() == 1) {
        // single letters survive: time stays time, lag and lead both read W
        out.add_term(MultiIndex(2, {block.letter(0) == 1 ? 1 : 2}), 1.0);
        return out;
    }
    const int a = block.letter(0), b = block.letter(1);
    if (a == 2 && b == 3)
        out.add_term(MultiIndex(2, {1}), -0.5);
    else if (a == 3 && b == 2)
        out.add_term(MultiIndex(2, {1}), 0.5);
    return out; // every other pair carries no weight
}

LinearFunctional bm_expected_signature(double horizon, int order) {
    if (!(horizon > 0.0))
        throw std::invalid_argument("bm_expected_signature: horizon must be positive");
    if (order < 0) throw std::invalid_argument("bm_expected_signature: order must be >= 0");

    static std::mutex memo_mutex;
    static std::map<std::pair<double, int>, LinearFunctional> memo;
    {
        std::scoped_lock lock(memo_mutex);
        auto it = memo.find({horizon, order});
        if (it != memo.end()) return it->second;
    }

    LinearFunctional generator(2, 2);
    generator.add_term(MultiIndex(2, {1}), horizon);
    generator.add_term(MultiIndex(2, {2, 2}), horizon / 2.0);
    LinearFunctional result = exp_lf(generator, order);

    std::scoped_lock lock(memo_mutex);
    memo.try_emplace({horizon, order}, result);
    return result;
}

LinearFunctional leadlag_bm_expected_signature(double horizon, int order) {
    if (!(horizon > 0.0))
        throw std::invalid_argument("leadlag_bm_expected_signature: horizon must be positive");
    const LinearFunctional flat = bm_expected_signature(horizon, order);

    // alpha weights for single letters and pairs, fetched once
    LinearFunctional alpha1[4] = {LinearFunctional(2), alpha(MultiIndex(3, {1})),
                                  alpha(MultiIndex(3, {2})), alpha(MultiIndex(3, {3}))};
    LinearFunctional alpha2[4][4] = {
        {LinearFunctional(2), LinearFunctional(2), LinearFunctional(2), LinearFunctional(2)},
        {LinearFunctional(2), alpha(MultiIndex(3, {1, 1})), alpha(MultiIndex(3, {1, 2})),
         alpha(MultiIndex(3, {1, 3}))},
        {LinearFunctional(2), alpha(MultiIndex(3, {2, 1})), alpha(MultiIndex(3, {2, 2})),
         alpha(MultiIndex(3, {2, 3}))},
        {LinearFunctional(2), alpha(MultiIndex(3, {3, 1})), alpha(MultiIndex(3, {3, 2})),
         alpha(MultiIndex(3, {3, 3}))}};

    LinearFunctional out(3, order);
    out.add_term(MultiIndex::empty(3), 1.0);

    // Prefix recursion over the last block: weight(I) =
    // weight(I minus last letter) x alpha(last letter)
    // + weight(I minus last two)  x alpha(last two letters).
    // Levels are walked in lockstep so only two of them stay alive.
    std::vector<LinearFunctional> grandparent; // level n-2, indexed by word rank
    std::vector<LinearFunctional> parent{LinearFunctional::constant(2, 1.0)}; // level n-1
    std::vector<MultiIndex> parent_words{MultiIndex::empty(3)};

    for (int level = 1; level <= order; ++level) {
        std::vector<LinearFunctional> current;
        std::vector<MultiIndex> current_words;
        current.reserve(parent.size() * 3);
        current_words.reserve(parent.size() * 3);
        for (std::size_t p = 0; p < parent.size(); ++p) {
            for (int letter = 1; letter <= 3; ++letter) {
                LinearFunctional weight = concat_lf(parent[p], alpha1[letter]);
                if (level >= 2) {
                    const MultiIndex& pw = parent_words[p];
                    const int prev_letter = pw.letter(pw.length() - 1);
                    const LinearFunctional& pair_weight = alpha2[prev_letter][letter];
                    if (!pair_weight.is_zero())
                        weight = lin_comb(1.0, weight, 1.0,
                                          concat_lf(grandparent[p / 3], pair_weight));
                }
                const MultiIndex word = parent_words[p].append(letter);
                out.add_term(word, pair(weight, flat));
                current.push_back(std::move(weight));
                current_words.push_back(word);
            }
        }
        grandparent = std::move(parent);
        parent = std::move(current);
        parent_words = std::move(current_words);
    }
    return out;
}

int default_algebra_order(int model_order) { return 2 * (model_order + 1); }

LinearFunctional model_expected_signature(const SigSdeParams& params, double horizon,
                                          int word_order, int algebra_order,
                                          TruncationReport* report) {
    if (word_order < 0 || algebra_order < 1)
        throw std::invalid_argument("model_expected_signature: bad truncation orders");

    const LinearFunctional driver_esig = leadlag_bm_expected_signature(horizon, algebra_order);

    if (report) {
        report->required_order = word_order * (params.order + 1);
        report->algebra_order = algebra_order;
        report->truncated = report->required_order > algebra_order;
        if (report->truncated) {
            // factorial tail L^n/n! at the first dropped level, with a crude
            // scale L combining the readout size and the horizon
            double ell_norm = 0.0;
            for (const auto& [w, c] : params.ell.terms()) ell_norm += std::abs(c);
            const double scale = (1.0 + ell_norm) * std::max(1.0, horizon);
            double tail = 1.0;
            for (int n = 1; n <= algebra_order + 1; ++n) tail *= scale / n;
            report->tail_bound = tail;
        } else {
            report->tail_bound = 0.0;
        }
    }

    LinearFunctional out(2, word_order);
    out.add_term(MultiIndex::empty(2), 1.0);
    if (word_order == 0) return out;

    // Depth-first walk over words on {1,2}, sharing half-shuffle prefixes.
    const LinearFunctional p1 = LinearFunctional::monomial(MultiIndex(3, {1}), 1.0);
    LinearFunctional p2(3, algebra_order);
    for (const auto& [w, c] : params.ell.terms())
        p2.add_term(w.with_alphabet(3).append(3), c);

    struct Frame {
        MultiIndex word;
        LinearFunctional chain;
    };
    std::vector<Frame> stack;
    stack.push_back({MultiIndex(2, {1}), truncate(p1, algebra_order)});
    stack.push_back({MultiIndex(2, {2}), truncate(p2, algebra_order)});
    while (!stack.empty()) {
        Frame frame = std::move(stack.back());
        stack.pop_back();
        out.add_term(frame.word, pair(frame.chain, driver_esig));
        if (static_cast<int>(frame.word.length()) < word_order && !frame.chain.is_zero()) {
            stack.push_back(
                {frame.word.append(1), half_shuffle(frame.chain, p1, algebra_order)});
            stack.push_back(
                {frame.word.append(2), half_shuffle(frame.chain, p2, algebra_order)});
        }
    }
    return out;
}

} // namespace sigsde
