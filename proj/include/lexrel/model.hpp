#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "lexrel/corpus.hpp"
#include "lexrel/text.hpp"

#include <nlohmann/json_fwd.hpp>

namespace lexrel {

enum class FeatureStreams {
    CommentOnly,
    CommentPlusParent, // comment in block 0, parent comment in block 1
};

std::string_view to_string(FeatureStreams s);
FeatureStreams feature_streams_from_string(std::string_view s);

/// Hashed n-gram featurization parameters. With CommentPlusParent the
/// feature vector spans 2*hash_dims (disjoint blocks); a document without a
/// parent leaves block 1 empty so the weight geometry matches across stages.
struct FeatureSpec {
    std::uint32_t hash_dims = 1u << 18;
    NgramOrders orders{};
    FeatureStreams streams = FeatureStreams::CommentPlusParent;
    bool signed_hashing = true;

    std::uint32_t dimension() const {
        return streams == FeatureStreams::CommentPlusParent ? 2 * hash_dims : hash_dims;
    }
    void validate() const;
    bool operator==(const FeatureSpec&) const = default;

    nlohmann::json to_json() const;
    static FeatureSpec from_json(const nlohmann::json& j);
};

/// Sparse feature vector, entries sorted by index.
struct SparseVec {
    std::vector<std::pair<std::uint32_t, double>> entries;

    double dot(std::span<const double> weights) const {
        double z = 0.0;
        for (const auto& [idx, val] : entries) z += weights[idx] * val;
        return z;
    }
};

/// Hash each n-gram into its stream block, accumulate with the hash-derived
/// sign, no normalization. Exposed for tests; featurize() is this plus an
/// l2 normalization of the whole vector.
SparseVec featurize_raw(const Document& doc, const FeatureSpec& spec);
SparseVec featurize(const Document& doc, const FeatureSpec& spec);

/// Linear classifier over hashed features. The lineage lists every training
/// stage that shaped these weights, in order.
struct LinearModel {
    std::vector<double> weights;
    double bias = 0.0;
    FeatureSpec feature_spec;
    std::vector<std::string> lineage;

    static LinearModel zero(const FeatureSpec& spec);

    double predict_score(const Document& doc) const;
    double predict_score(const SparseVec& features) const;

    void save(const std::filesystem::path& path) const;
    static LinearModel load(const std::filesystem::path& path);
    nlohmann::json to_json() const;
    static LinearModel from_json(const nlohmann::json& j);
};

struct TrainConfig {
    double learning_rate = 0.05;
    int epochs = 5;
    double l1_lambda = 0.0;
    std::uint64_t seed = 0;
    bool class_weighted = true;

    void validate() const;
    nlohmann::json to_json() const;
};

/// Logistic loss minimized by SGD with a per-epoch deterministic shuffle
/// keyed on (seed, epoch). Class weighting scales each example's gradient by
/// N/(2*count(class)); l1 is applied by soft-thresholding the weights an
/// update touched. Given identical inputs the result is bitwise identical.
///
/// The lineage gains `stage` unless the initializer was already transferred
/// under that name (transfer() pre-registers the upcoming stage).
LinearModel train(std::span<const Document> docs, std::span<const int> labels,
                  const TrainConfig& config, const FeatureSpec& spec, const std::string& stage,
                  const LinearModel* init = nullptr);

/// Deep copy for the next training stage; extends the lineage, leaves the
/// source untouched.
LinearModel transfer(const LinearModel& model, const std::string& next_stage);

/// Scores for a whole document span (prediction order = input order).
std::vector<double> predict_scores(const LinearModel& model, std::span<const Document> docs);

} // namespace lexrel
