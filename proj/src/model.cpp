#include "lexrel/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include <nlohmann/json.hpp>

#include "lexrel/errors.hpp"
#include "lexrel/hash.hpp"
#include "lexrel/rng.hpp"

namespace lexrel {

std::string_view to_string(FeatureStreams s) {
    return s == FeatureStreams::CommentOnly ? "comment_only" : "comment_plus_parent";
}

FeatureStreams feature_streams_from_string(std::string_view s) {
    if (s == "comment_only") return FeatureStreams::CommentOnly;
    if (s == "comment_plus_parent") return FeatureStreams::CommentPlusParent;
    throw ConfigError("unknown feature streams mode: " + std::string(s));
}

void FeatureSpec::validate() const {
    if (hash_dims < (1u << 10)) throw ConfigError("feature spec: hash_dims must be >= 2^10");
    if ((hash_dims & (hash_dims - 1)) != 0)
        throw ConfigError("feature spec: hash_dims must be a power of two");
    if (!orders.unigrams && !orders.bigrams)
        throw ConfigError("feature spec: at least one n-gram order required");
}

nlohmann::json FeatureSpec::to_json() const {
    std::vector<int> orders_list;
    if (orders.unigrams) orders_list.push_back(1);
    if (orders.bigrams) orders_list.push_back(2);
    return {{"hash_dims", hash_dims},
            {"orders", orders_list},
            {"streams", to_string(streams)},
            {"signed_hashing", signed_hashing}};
}

FeatureSpec FeatureSpec::from_json(const nlohmann::json& j) {
    FeatureSpec spec;
    spec.hash_dims = j.at("hash_dims").get<std::uint32_t>();
    spec.orders = {false, false};
    for (int o : j.at("orders").get<std::vector<int>>()) {
        if (o == 1) spec.orders.unigrams = true;
        else if (o == 2) spec.orders.bigrams = true;
        else throw ConfigError("feature spec: orders must be a subset of {1,2}");
    }
    spec.streams = feature_streams_from_string(j.at("streams").get<std::string>());
    spec.signed_hashing = j.value("signed_hashing", true);
    spec.validate();
    return spec;
}

namespace {

void hash_text_into(std::map<std::uint32_t, double>& acc, const std::string& text,
                    const FeatureSpec& spec, std::uint32_t block_offset) {
    const auto tokens = tokenize(text);
    const NgramTable table = extract_ngrams(tokens, spec.orders);
    const std::uint32_t mask = spec.hash_dims - 1;
    for (const auto& [ngram, count] : table.counts) {
        const std::uint64_t h = stable_hash64(ngram);
        const std::uint32_t idx = block_offset + (static_cast<std::uint32_t>(h) & mask);
        // Sign comes from the top hash bit, disjoint from the index bits.
        const double sign = spec.signed_hashing ? ((h >> 63) ? -1.0 : 1.0) : 1.0;
        acc[idx] += sign * static_cast<double>(count);
    }
}

} // namespace

SparseVec featurize_raw(const Document& doc, const FeatureSpec& spec) {
    std::map<std::uint32_t, double> acc;
    hash_text_into(acc, doc.text, spec, 0);
    if (spec.streams == FeatureStreams::CommentPlusParent && doc.parent_text)
        hash_text_into(acc, *doc.parent_text, spec, spec.hash_dims);

    SparseVec vec;
    vec.entries.reserve(acc.size());
    for (const auto& [idx, val] : acc)
        if (val != 0.0) vec.entries.emplace_back(idx, val);
    return vec;
}

SparseVec featurize(const Document& doc, const FeatureSpec& spec) {
    SparseVec vec = featurize_raw(doc, spec);
    double norm_sq = 0.0;
    for (const auto& [idx, val] : vec.entries) norm_sq += val * val;
    if (norm_sq > 0.0) {
        const double inv = 1.0 / std::sqrt(norm_sq);
        for (auto& [idx, val] : vec.entries) val *= inv;
    }
    return vec;
}

LinearModel LinearModel::zero(const FeatureSpec& spec) {
    spec.validate();
    LinearModel m;
    m.feature_spec = spec;
    m.weights.assign(spec.dimension(), 0.0);
    return m;
}

namespace {

double sigmoid(double z) {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

} // namespace

double LinearModel::predict_score(const SparseVec& features) const {
    return sigmoid(features.dot(weights) + bias);
}

double LinearModel::predict_score(const Document& doc) const {
    return predict_score(featurize(doc, feature_spec));
}

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate))
        throw ConfigError("train config: learning_rate must be positive and finite");
    if (epochs < 1) throw ConfigError("train config: epochs must be >= 1");
    if (l1_lambda < 0.0 || !std::isfinite(l1_lambda))
        throw ConfigError("train config: l1_lambda must be non-negative and finite");
}

nlohmann::json TrainConfig::to_json() const {
    return {{"learning_rate", learning_rate},
            {"epochs", epochs},
            {"l1_lambda", l1_lambda},
            {"seed", seed},
            {"class_weighted", class_weighted}};
}

LinearModel train(std::span<const Document> docs, std::span<const int> labels,
                  const TrainConfig& config, const FeatureSpec& spec, const std::string& stage,
                  const LinearModel* init) {
    config.validate();
    spec.validate();
    if (docs.size() != labels.size())
        throw PreconditionError("train: documents and labels differ in length");
    if (init && !(init->feature_spec == spec))
        throw PreconditionError("train: initializer feature spec does not match");

    std::array<double, 2> cw{1.0, 1.0};
    {
        std::vector<int> label_vec(labels.begin(), labels.end());
        const auto weights = class_weights(label_vec); // also rejects single-class input
        if (config.class_weighted) cw = weights;
    }

    LinearModel model = init ? *init : LinearModel::zero(spec);
    if (model.lineage.empty() || model.lineage.back() != stage) model.lineage.push_back(stage);

    std::vector<SparseVec> features;
    features.reserve(docs.size());
    for (const Document& d : docs) features.push_back(featurize(d, spec));

    std::vector<std::size_t> order(docs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    const double lr = config.learning_rate;
    const double shrink = lr * config.l1_lambda;

    for (int epoch = 0; epoch < config.epochs; ++epoch) {
        Rng rng(config.seed ^ static_cast<std::uint64_t>(epoch));
        rng.shuffle(order);
        for (const std::size_t i : order) {
            const SparseVec& x = features[i];
            const int y = labels[i];
            const double p = sigmoid(x.dot(model.weights) + model.bias);
            const double g = (p - static_cast<double>(y)) * cw[static_cast<std::size_t>(y)];
            for (const auto& [idx, val] : x.entries) {
                double w = model.weights[idx] - lr * g * val;
                if (shrink > 0.0) {
                    // Soft-thresholding of the touched coordinate; bias is
                    // never regularized.
                    if (w > shrink) w -= shrink;
                    else if (w < -shrink) w += shrink;
                    else w = 0.0;
                }
                model.weights[idx] = w;
            }
            model.bias -= lr * g;
        }
    }
    return model;
}

LinearModel transfer(const LinearModel& model, const std::string& next_stage) {
    LinearModel copy = model;
    copy.lineage.push_back(next_stage);
    return copy;
}

std::vector<double> predict_scores(const LinearModel& model, std::span<const Document> docs) {
    std::vector<double> scores;
    scores.reserve(docs.size());
    for (const Document& d : docs) scores.push_back(model.predict_score(d));
    return scores;
}

nlohmann::json LinearModel::to_json() const {
    nlohmann::json j{{"format", "lexrel-model"},
                     {"version", 1},
                     {"feature_spec", feature_spec.to_json()},
                     {"bias", bias},
                     {"lineage", lineage}};
    std::size_t nnz = 0;
    for (double w : weights) nnz += (w != 0.0);
    if (nnz * 3 < weights.size()) {
        std::vector<std::uint32_t> idx;
        std::vector<double> val;
        idx.reserve(nnz);
        val.reserve(nnz);
        for (std::size_t i = 0; i < weights.size(); ++i) {
            if (weights[i] != 0.0) {
                idx.push_back(static_cast<std::uint32_t>(i));
                val.push_back(weights[i]);
            }
        }
        j["weights"] = {{"encoding", "sparse"}, {"dim", weights.size()}, {"idx", idx}, {"val", val}};
    } else {
        j["weights"] = {{"encoding", "dense"}, {"dim", weights.size()}, {"val", weights}};
    }
    return j;
}

LinearModel LinearModel::from_json(const nlohmann::json& j) {
    if (j.value("format", std::string()) != "lexrel-model")
        throw ConfigError("model file: unrecognized format");
    LinearModel m;
    m.feature_spec = FeatureSpec::from_json(j.at("feature_spec"));
    m.bias = j.at("bias").get<double>();
    m.lineage = j.at("lineage").get<std::vector<std::string>>();
    const nlohmann::json& w = j.at("weights");
    const auto dim = w.at("dim").get<std::size_t>();
    if (dim != m.feature_spec.dimension())
        throw ConfigError("model file: weight dimension does not match feature spec");
    m.weights.assign(dim, 0.0);
    if (w.at("encoding") == "sparse") {
        const auto idx = w.at("idx").get<std::vector<std::uint32_t>>();
        const auto val = w.at("val").get<std::vector<double>>();
        if (idx.size() != val.size()) throw ConfigError("model file: corrupt sparse weights");
        for (std::size_t i = 0; i < idx.size(); ++i) {
            if (idx[i] >= dim) throw ConfigError("model file: weight index out of range");
            m.weights[idx[i]] = val[i];
        }
    } else {
        const auto val = w.at("val").get<std::vector<double>>();
        if (val.size() != dim) throw ConfigError("model file: corrupt dense weights");
        m.weights = val;
    }
    return m;
}

void LinearModel::save(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << to_json().dump(2) << '\n';
}

LinearModel LinearModel::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    nlohmann::json j;
    in >> j;
    return from_json(j);
}

} // namespace lexrel
