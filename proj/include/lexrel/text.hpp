#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "lexrel/corpus.hpp"

namespace lexrel {

/// Lowercases, splits on Unicode whitespace, strips leading/trailing
/// punctuation from each token and drops tokens that become empty.
/// Intra-word apostrophes and hyphens survive ("it's" stays one token).
/// Total: never throws; invalid UTF-8 bytes are treated as U+FFFD.
std::vector<std::string> tokenize(std::string_view text);

/// Which n-gram orders to extract. At least one must be enabled.
struct NgramOrders {
    bool unigrams = true;
    bool bigrams = true;

    bool operator==(const NgramOrders&) const = default;
};

/// Frequency table over unigrams and/or bigrams. Bigram keys are the two
/// tokens joined by a single space; since tokens never contain whitespace
/// the two orders cannot collide.
struct NgramTable {
    std::unordered_map<std::string, std::uint64_t> counts;
    std::uint64_t total = 0;

    void add(std::string ngram) {
        ++counts[std::move(ngram)];
        ++total;
    }
    void add_tokens(std::span<const std::string> tokens, const NgramOrders& orders);
};

NgramTable extract_ngrams(std::span<const std::string> tokens, const NgramOrders& orders);

/// The k highest-count n-grams, ranked by count descending with ties broken
/// lexicographically, so the result is independent of construction order.
/// Returns fewer than k entries when the table is smaller.
std::vector<std::string> top_k(const NgramTable& table, std::size_t k);

struct UnigramDistribution {
    std::unordered_map<std::string, double> probs;
};

/// Unigram probabilities over the documents' texts (parent_text excluded).
/// Throws PreconditionError when the sample yields zero tokens.
UnigramDistribution unigram_distribution(std::span<const Document> docs);

/// Same, over pre-tokenized documents (used by the bootstrap loop).
UnigramDistribution unigram_distribution_from_tokens(
    std::span<const std::vector<std::string>> docs_tokens);

/// Export (ngram, count) rows sorted by the top_k rule, for inspection and
/// external Venn plotting. k = 0 exports the whole table.
void write_ngram_csv(const std::filesystem::path& path, const NgramTable& table,
                     std::size_t k = 0);

} // namespace lexrel
