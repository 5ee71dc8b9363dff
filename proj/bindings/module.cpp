// Python bindings for the core operations: tokenization, n-gram statistics,
// corpus similarity, classification metrics, and the hashed-feature
// classifier with weight transfer.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "lexrel/corpus.hpp"
#include "lexrel/errors.hpp"
#include "lexrel/metrics.hpp"
#include "lexrel/model.hpp"
#include "lexrel/similarity.hpp"
#include "lexrel/text.hpp"

namespace py = pybind11;
using namespace lexrel;

namespace {

NgramOrders orders_from_list(const std::vector<int>& orders) {
    NgramOrders out{false, false};
    for (int o : orders) {
        if (o == 1) out.unigrams = true;
        else if (o == 2) out.bigrams = true;
        else throw PreconditionError("orders must be a subset of {1, 2}");
    }
    return out;
}

NgramSet to_set(const std::vector<std::string>& items) {
    return NgramSet(items.begin(), items.end());
}

UnigramDistribution to_dist(const std::map<std::string, double>& probs) {
    UnigramDistribution d;
    d.probs.insert(probs.begin(), probs.end());
    return d;
}

JsdVariant variant_from_string(const std::string& v) {
    if (v == "divergence_base2") return JsdVariant::DivergenceBase2;
    if (v == "distance_base_e") return JsdVariant::DistanceBaseE;
    throw PreconditionError("unknown jsd variant: " + v);
}

Corpus corpus_from_texts(const std::vector<std::string>& texts, const std::string& name) {
    Corpus c;
    c.name = name;
    c.documents.reserve(texts.size());
    for (std::size_t i = 0; i < texts.size(); ++i) {
        Document d;
        d.id = name + ":" + std::to_string(i);
        d.text = texts[i];
        c.documents.push_back(std::move(d));
    }
    return c;
}

std::vector<Document> docs_from_texts(const std::vector<std::string>& texts,
                                      const std::optional<std::vector<std::string>>& parents) {
    if (parents && parents->size() != texts.size())
        throw PreconditionError("parents must match texts in length");
    std::vector<Document> docs;
    docs.reserve(texts.size());
    for (std::size_t i = 0; i < texts.size(); ++i) {
        Document d;
        d.id = std::to_string(i);
        d.text = texts[i];
        if (parents && !(*parents)[i].empty()) d.parent_text = (*parents)[i];
        docs.push_back(std::move(d));
    }
    return docs;
}

py::dict eval_to_dict(const EvalReport& r) {
    auto opt = [](const std::optional<double>& v) -> py::object {
        return v ? py::cast(*v) : py::none();
    };
    py::dict d;
    d["task"] = r.task;
    d["precision"] = opt(r.precision);
    d["recall"] = opt(r.recall);
    d["f1"] = opt(r.f1);
    d["mcc"] = opt(r.mcc);
    d["auc"] = opt(r.auc);
    d["threshold"] = r.threshold;
    d["n"] = r.n;
    return d;
}

// Thin classifier wrapper over FeatureSpec + LinearModel.
struct Classifier {
    LinearModel model;

    static Classifier train_new(const std::vector<std::string>& texts,
                                const std::vector<int>& labels,
                                const std::optional<std::vector<std::string>>& parents,
                                int hash_bits, bool dual_stream, double learning_rate, int epochs,
                                double l1_lambda, std::uint64_t seed, bool class_weighted,
                                const std::string& stage, const Classifier* init) {
        FeatureSpec spec;
        spec.hash_dims = 1u << hash_bits;
        spec.streams =
            dual_stream ? FeatureStreams::CommentPlusParent : FeatureStreams::CommentOnly;
        if (init) spec = init->model.feature_spec;

        TrainConfig cfg;
        cfg.learning_rate = learning_rate;
        cfg.epochs = epochs;
        cfg.l1_lambda = l1_lambda;
        cfg.seed = seed;
        cfg.class_weighted = class_weighted;

        const auto docs = docs_from_texts(texts, parents);
        Classifier out;
        out.model = train(docs, labels, cfg, spec, stage, init ? &init->model : nullptr);
        return out;
    }

    std::vector<double> predict(const std::vector<std::string>& texts,
                                const std::optional<std::vector<std::string>>& parents) const {
        const auto docs = docs_from_texts(texts, parents);
        return predict_scores(model, docs);
    }

    Classifier transferred(const std::string& next_stage) const {
        Classifier out;
        out.model = transfer(model, next_stage);
        return out;
    }
};

} // namespace

PYBIND11_MODULE(lexrel, m) {
    m.doc() = "Corpus relatedness measures and transfer-learning text classification";

    py::register_exception<Error>(m, "LexrelError");

    m.def("tokenize", [](const std::string& text) { return tokenize(text); },
          py::arg("text"),
          "Lowercase, split on whitespace, strip edge punctuation.");

    m.def(
        "ngram_counts",
        [](const std::vector<std::string>& tokens, const std::vector<int>& orders) {
            const NgramTable t = extract_ngrams(tokens, orders_from_list(orders));
            return std::map<std::string, std::uint64_t>(t.counts.begin(), t.counts.end());
        },
        py::arg("tokens"), py::arg("orders") = std::vector<int>{1, 2},
        "Unigram/bigram frequency counts; bigram keys are space-joined.");

    m.def(
        "top_k",
        [](const std::map<std::string, std::uint64_t>& counts, std::size_t k) {
            NgramTable t;
            for (const auto& [key, count] : counts) {
                t.counts.emplace(key, count);
                t.total += count;
            }
            return top_k(t, k);
        },
        py::arg("counts"), py::arg("k"),
        "Top-k n-grams by count, ties broken lexicographically.");

    m.def(
        "jaccard",
        [](const std::vector<std::string>& a, const std::vector<std::string>& b) {
            return jaccard(to_set(a), to_set(b));
        },
        py::arg("a"), py::arg("b"), "Intersection-over-union of two n-gram sets.");

    m.def(
        "jsd",
        [](const std::map<std::string, double>& p, const std::map<std::string, double>& q,
           const std::string& variant) {
            return jsd(to_dist(p), to_dist(q), variant_from_string(variant));
        },
        py::arg("p"), py::arg("q"), py::arg("variant") = "divergence_base2",
        "Jensen-Shannon divergence between unigram distributions.");

    m.def(
        "overlap_counts",
        [](const std::vector<std::string>& a, const std::vector<std::string>& b) {
            const OverlapCount oc = overlap_counts(to_set(a), to_set(b));
            py::dict d;
            d["shared"] = oc.shared;
            d["unique_a"] = oc.unique_a;
            d["unique_b"] = oc.unique_b;
            return d;
        },
        py::arg("a"), py::arg("b"));

    m.def(
        "bootstrap_similarity",
        [](const std::vector<std::string>& texts_a, const std::vector<std::string>& texts_b,
           const std::string& metric, std::uint64_t iterations, std::uint64_t sample_size,
           std::uint64_t top_k, std::uint64_t seed, bool with_replacement,
           const std::string& jsd_variant, int threads, bool keep_per_iteration) {
            BootstrapSpec spec;
            spec.metric = similarity_metric_from_string(metric);
            spec.iterations = iterations;
            spec.sample_size = sample_size;
            spec.top_k = top_k;
            spec.seed = seed;
            spec.with_replacement = with_replacement;
            spec.jsd_variant = variant_from_string(jsd_variant);
            const Corpus a = corpus_from_texts(texts_a, "a");
            const Corpus b = corpus_from_texts(texts_b, "b");
            const SimilarityReport r =
                bootstrap_similarity(a, b, spec, threads, keep_per_iteration);
            py::dict d;
            d["metric"] = r.metric;
            d["mean"] = r.mean;
            d["std"] = r.std_dev;
            d["min"] = r.min;
            d["max"] = r.max;
            d["iterations"] = r.iterations;
            d["sample_size"] = r.sample_size;
            if (r.per_iteration) d["per_iteration"] = *r.per_iteration;
            return d;
        },
        py::arg("texts_a"), py::arg("texts_b"), py::arg("metric") = "jaccard",
        py::arg("iterations") = 1000, py::arg("sample_size") = 1000, py::arg("top_k") = 1000,
        py::arg("seed") = 0, py::arg("with_replacement") = false,
        py::arg("jsd_variant") = "divergence_base2", py::arg("threads") = 1,
        py::arg("keep_per_iteration") = false,
        "The bootstrapped sampling protocol over two text collections.");

    m.def(
        "auc",
        [](const std::vector<double>& scores, const std::vector<int>& labels) {
            return auc(scores, labels);
        },
        py::arg("scores"), py::arg("labels"),
        "Rank-based AUC with midrank tie handling.");

    m.def(
        "evaluate",
        [](const std::vector<double>& scores, const std::vector<int>& labels, double threshold,
           const std::string& task) {
            return eval_to_dict(evaluate(scores, labels, threshold, task));
        },
        py::arg("scores"), py::arg("labels"), py::arg("threshold") = 0.5,
        py::arg("task") = "hate",
        "Precision/recall/F1/MCC/AUC bundle; undefined metrics are None.");

    m.def(
        "class_weights",
        [](const std::vector<int>& labels) {
            const auto w = class_weights(labels);
            return py::make_tuple(w[0], w[1]);
        },
        py::arg("labels"), "Balanced class weights N/(2*count(c)).");

    py::class_<Classifier>(m, "Classifier",
                           "Deterministic logistic classifier over hashed n-gram features")
        .def_static(
            "train",
            [](const std::vector<std::string>& texts, const std::vector<int>& labels,
               const std::optional<std::vector<std::string>>& parents, int hash_bits,
               bool dual_stream, double learning_rate, int epochs, double l1_lambda,
               std::uint64_t seed, bool class_weighted, const std::string& stage,
               const Classifier* init) {
                return Classifier::train_new(texts, labels, parents, hash_bits, dual_stream,
                                             learning_rate, epochs, l1_lambda, seed,
                                             class_weighted, stage, init);
            },
            py::arg("texts"), py::arg("labels"), py::arg("parents") = py::none(),
            py::arg("hash_bits") = 18, py::arg("dual_stream") = false,
            py::arg("learning_rate") = 0.05, py::arg("epochs") = 5, py::arg("l1_lambda") = 0.0,
            py::arg("seed") = 0, py::arg("class_weighted") = true, py::arg("stage") = "stage",
            py::arg("init") = py::none())
        .def("predict", &Classifier::predict, py::arg("texts"), py::arg("parents") = py::none())
        .def("transfer", &Classifier::transferred, py::arg("next_stage"))
        .def("save", [](const Classifier& c, const std::string& path) { c.model.save(path); },
             py::arg("path"))
        .def_static("load",
                    [](const std::string& path) {
                        Classifier c;
                        c.model = LinearModel::load(path);
                        return c;
                    },
                    py::arg("path"))
        .def_property_readonly("lineage",
                               [](const Classifier& c) { return c.model.lineage; })
        .def_property_readonly("bias", [](const Classifier& c) { return c.model.bias; });
}
