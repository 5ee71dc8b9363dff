#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

#include "lexrel/corpus.hpp"
#include "lexrel/text.hpp"

#include <nlohmann/json_fwd.hpp>

namespace lexrel {

using NgramSet = std::unordered_set<std::string>;

/// Intersection-over-union of two n-gram sets; 1.0 when both are empty.
double jaccard(const NgramSet& a, const NgramSet& b);

enum class JsdVariant {
    DivergenceBase2, // bounded [0,1]; the toolkit default
    DistanceBaseE,   // sqrt of the natural-log divergence, bounded [0, sqrt(ln 2)]
};

/// Base-2 Jensen-Shannon divergence over the union support, in [0,1].
/// Zero-probability terms contribute zero. Throws PreconditionError when an
/// input does not sum to 1 within 1e-9.
double jsd(const UnigramDistribution& p, const UnigramDistribution& q);

double jsd(const UnigramDistribution& p, const UnigramDistribution& q, JsdVariant variant);

struct OverlapCount {
    std::uint64_t shared = 0;
    std::uint64_t unique_a = 0;
    std::uint64_t unique_b = 0;
};

/// Exact partition counts of a ∪ b: shared + unique_a = |a|, shared + unique_b = |b|.
OverlapCount overlap_counts(const NgramSet& a, const NgramSet& b);

enum class SimilarityMetric { Jaccard, Jsd };

std::string_view to_string(SimilarityMetric m);
SimilarityMetric similarity_metric_from_string(std::string_view s);

struct BootstrapSpec {
    std::uint64_t iterations = 1000;
    std::uint64_t sample_size = 1000;
    std::uint64_t top_k = 1000;
    std::uint64_t seed = 0;
    SimilarityMetric metric = SimilarityMetric::Jaccard;
    bool with_replacement = false;
    JsdVariant jsd_variant = JsdVariant::DivergenceBase2;
};

struct SimilarityReport {
    std::string corpus_a;
    std::string corpus_b;
    std::string metric;
    double mean = 0.0;
    double std_dev = 0.0; // population standard deviation over iterations
    double min = 0.0;
    double max = 0.0;
    std::uint64_t iterations = 0;
    std::uint64_t sample_size = 0;
    std::uint64_t top_k = 0;
    std::uint64_t seed = 0;
    std::optional<std::vector<double>> per_iteration;

    nlohmann::json to_json() const;
    /// Summary row: pair, metric, mean, std, min, max.
    std::string to_csv_row() const;
    static std::string csv_header();
};

/// The paper's bootstrap protocol: per iteration, draw sample_size documents
/// from each corpus (without replacement by default, per-iteration RNG
/// streams derived from seed XOR iteration index), then compare the samples.
/// Jaccard compares the top_k of combined unigram+bigram tables; JSD compares
/// unigram distributions. Iterations are independent; `threads` may run them
/// in parallel with results identical to a sequential run.
SimilarityReport bootstrap_similarity(const Corpus& a, const Corpus& b, const BootstrapSpec& spec,
                                      int threads = 1, bool keep_per_iteration = false);

/// The two top-k sets of one specific bootstrap iteration, drawn exactly as
/// bootstrap_similarity would draw them (Jaccard path). Used for Venn-style
/// overlap exports of a chosen iteration.
std::pair<std::vector<std::string>, std::vector<std::string>> bootstrap_topk_sets(
    const Corpus& a, const Corpus& b, const BootstrapSpec& spec, std::uint64_t iteration);

/// Overlap export: sections shared / unique_a / unique_b, n-grams sorted.
void write_overlap_csv(const std::filesystem::path& path, const NgramSet& a, const NgramSet& b);

} // namespace lexrel
