#include "lexrel/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_set>

#include "lexrel/errors.hpp"
#include "lexrel/rng.hpp"

namespace lexrel {

std::string_view to_string(CanonicalClass c) {
    switch (c) {
        case CanonicalClass::Neutral: return "neutral";
        case CanonicalClass::Sarcasm: return "sarcasm";
        case CanonicalClass::ImplicitHate: return "implicit_hate";
        case CanonicalClass::ExplicitHate: return "explicit_hate";
    }
    return "neutral";
}

CanonicalClass canonical_class_from_string(std::string_view s) {
    if (s == "neutral") return CanonicalClass::Neutral;
    if (s == "sarcasm") return CanonicalClass::Sarcasm;
    if (s == "implicit_hate") return CanonicalClass::ImplicitHate;
    if (s == "explicit_hate") return CanonicalClass::ExplicitHate;
    throw PreconditionError("unknown canonical class: " + std::string(s));
}

std::string_view to_string(CorpusSource s) {
    switch (s) {
        case CorpusSource::Sarc: return "sarc";
        case CorpusSource::ImplicitHateCorpus: return "implicit_hate_corpus";
        case CorpusSource::Ethos: return "ethos";
        case CorpusSource::Combined: return "combined";
    }
    return "combined";
}

std::string_view to_string(TaskKind t) {
    return t == TaskKind::Sarcasm ? "sarcasm" : "hate";
}

namespace {

bool whitespace_only(const std::string& s) {
    return std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c) != 0; });
}

// Fixed per-class stream tags so stratified splits are reproducible no
// matter how the class enum is ordered internally.
std::uint64_t stable_class_tag(CanonicalClass c) {
    switch (c) {
        case CanonicalClass::Neutral: return 0x6E65757472616C00ull;
        case CanonicalClass::Sarcasm: return 0x7361726361736D00ull;
        case CanonicalClass::ImplicitHate: return 0x696D706C69636974ull;
        case CanonicalClass::ExplicitHate: return 0x6578706C69636974ull;
    }
    return 0;
}

} // namespace

void Corpus::validate() const {
    std::unordered_set<std::string_view> seen;
    seen.reserve(documents.size() * 2);
    for (const Document& d : documents) {
        if (d.text.empty() || whitespace_only(d.text))
            throw PreconditionError("document " + d.id + " has empty text");
        if (!seen.insert(d.id).second)
            throw PreconditionError("duplicate document id: " + d.id);
    }
}

int project_label(CanonicalClass c, TaskKind task) {
    if (task == TaskKind::Sarcasm)
        return (c == CanonicalClass::Sarcasm || c == CanonicalClass::ImplicitHate) ? 1 : 0;
    return (c == CanonicalClass::ImplicitHate || c == CanonicalClass::ExplicitHate) ? 1 : 0;
}

std::vector<int> project_labels(const Corpus& corpus, TaskKind task) {
    std::vector<int> labels;
    labels.reserve(corpus.documents.size());
    for (const Document& d : corpus.documents) labels.push_back(project_label(d.canonical_class, task));
    return labels;
}

std::pair<Corpus, Corpus> split(const Corpus& corpus, const SplitSpec& spec) {
    const std::size_t n = corpus.documents.size();
    if (n == 0) throw PreconditionError("split: corpus is empty");
    if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0))
        throw ConfigError("split: train_fraction must lie in (0,1)");

    std::vector<std::size_t> train_idx;

    if (spec.stratified) {
        std::map<CanonicalClass, std::vector<std::size_t>> by_class;
        for (std::size_t i = 0; i < n; ++i) by_class[corpus.documents[i].canonical_class].push_back(i);
        for (auto& [cls, idx] : by_class) {
            if (idx.size() < 2)
                throw PreconditionError("split: class '" + std::string(to_string(cls)) +
                                        "' has fewer than 2 documents, cannot stratify");
        }
        for (auto& [cls, idx] : by_class) {
            Rng rng(spec.seed ^ stable_class_tag(cls));
            rng.shuffle(idx);
            auto take = static_cast<std::size_t>(
                std::llround(spec.train_fraction * static_cast<double>(idx.size())));
            take = std::clamp<std::size_t>(take, 1, idx.size() - 1);
            train_idx.insert(train_idx.end(), idx.begin(), idx.begin() + take);
        }
    } else {
        std::vector<std::size_t> idx(n);
        for (std::size_t i = 0; i < n; ++i) idx[i] = i;
        Rng rng(spec.seed);
        rng.shuffle(idx);
        auto take =
            static_cast<std::size_t>(std::llround(spec.train_fraction * static_cast<double>(n)));
        take = std::clamp<std::size_t>(take, 1, n - 1);
        train_idx.assign(idx.begin(), idx.begin() + take);
    }

    std::vector<bool> in_train(n, false);
    for (std::size_t i : train_idx) in_train[i] = true;

    Corpus train{{}, corpus.source, corpus.schema_version, corpus.name};
    Corpus test{{}, corpus.source, corpus.schema_version, corpus.name};
    for (std::size_t i = 0; i < n; ++i)
        (in_train[i] ? train : test).documents.push_back(corpus.documents[i]);
    return {std::move(train), std::move(test)};
}

std::array<double, 2> class_weights(const std::vector<int>& labels) {
    double count[2] = {0.0, 0.0};
    for (int y : labels) {
        if (y != 0 && y != 1) throw PreconditionError("class_weights: labels must be 0 or 1");
        count[y] += 1.0;
    }
    if (count[0] == 0.0 || count[1] == 0.0)
        throw PreconditionError("class_weights: both classes must be present");
    const double n = count[0] + count[1];
    return {n / (2.0 * count[0]), n / (2.0 * count[1])};
}

Corpus filter_sarcasm_votes(const Corpus& corpus, std::int64_t min_ups, std::int64_t max_downs) {
    if (corpus.source != CorpusSource::Sarc)
        throw PreconditionError("filter_sarcasm_votes: corpus source must be sarc");
    Corpus out{{}, corpus.source, corpus.schema_version, corpus.name};
    for (const Document& d : corpus.documents) {
        if (!d.ups.has_value() || !d.downs.has_value())
            throw PreconditionError("filter_sarcasm_votes: document " + d.id +
                                    " is missing vote metadata");
        if (*d.ups > min_ups && *d.downs <= max_downs) out.documents.push_back(d);
    }
    return out;
}

} // namespace lexrel
